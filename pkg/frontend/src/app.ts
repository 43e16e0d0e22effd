// Wiring: build the store, map, and panels inside a container and
// kick off the initial loads. Exported as a function so the test
// suite can boot the whole app against a fixture-backed client.

import { Client } from "./api.js";
import { BasemapDoc, MapView } from "./map.js";
import { Panels } from "./panels.js";
import { Store } from "./state.js";

export interface App {
  store: Store;
  map: MapView;
  panels: Panels;
}

export function initApp(
  container: HTMLElement,
  client: Client,
  basemap: BasemapDoc,
): App {
  const store = new Store(client);

  const mapBox = document.createElement("div");
  mapBox.id = "map-box";
  const panelBox = document.createElement("div");
  panelBox.id = "panel-box";
  container.replaceChildren(mapBox, panelBox);

  const map = new MapView(store, basemap);
  mapBox.appendChild(map.svg);
  const panels = new Panels(store, panelBox);

  store.subscribe(() => {
    map.render();
    panels.render();
  });
  map.render();
  panels.render();
  void store.init();

  return { store, map, panels };
}

/** Browser entry point: same-origin service, static basemap asset. */
export async function boot(): Promise<App> {
  const container = document.getElementById("app");
  if (!container) throw new Error("missing #app container");
  const res = await fetch("./basemap.geojson");
  const basemap = (await res.json()) as BasemapDoc;
  return initApp(container, new Client(""), basemap);
}
