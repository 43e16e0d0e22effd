// SVG map: static basemap under choropleth under routes under the
// endpoint markers. Everything redraws from state; the only DOM kept
// between renders is the <svg> itself and its four layer groups.

import {
  LineFeature,
  NeighborhoodScoreProperties,
  SegmentScoreProperties,
} from "./api.js";
import { rampColor } from "./colors.js";
import { Projector, bboxOfLines } from "./geometry.js";
import { HoverInfo, Store } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface BasemapDoc {
  type: string;
  features: {
    geometry: { type: string; coordinates: [number, number][] };
    properties?: { kind?: string };
  }[];
}

function el(name: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, name) as SVGElement;
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

export class MapView {
  readonly svg: SVGSVGElement;
  readonly projector: Projector;
  private layers: Record<"basemap" | "choropleth" | "routes" | "endpoints", SVGElement>;

  constructor(
    private readonly store: Store,
    basemap: BasemapDoc,
    readonly width = 900,
    readonly height = 520,
  ) {
    const lines = basemap.features
      .filter((f) => f.geometry.type === "LineString")
      .map((f) => f.geometry.coordinates);
    this.projector = new Projector(bboxOfLines(lines), width, height);

    this.svg = el("svg", {
      id: "map",
      viewBox: `0 0 ${width} ${height}`,
      width: String(width),
      height: String(height),
    }) as SVGSVGElement;
    this.layers = {
      basemap: el("g", { id: "basemap" }),
      choropleth: el("g", { id: "choropleth" }),
      routes: el("g", { id: "routes" }),
      endpoints: el("g", { id: "endpoints" }),
    };
    for (const g of Object.values(this.layers)) this.svg.appendChild(g);

    for (const line of lines) {
      this.layers.basemap.appendChild(
        el("path", {
          d: this.projector.pathD(line),
          class: "base-line",
          fill: "none",
          stroke: "#cbd5e1",
          "stroke-width": "2",
        }),
      );
    }

    this.svg.addEventListener("click", (ev) => this.onClick(ev as MouseEvent));
  }

  /** Map a client-space click onto lon/lat and hand it to the store. */
  private onClick(ev: MouseEvent): void {
    const rect = this.svg.getBoundingClientRect();
    // headless DOM reports a zero rect; treat client space as SVG space there
    const sx = rect.width > 0 ? this.width / rect.width : 1;
    const sy = rect.height > 0 ? this.height / rect.height : 1;
    const x = (ev.clientX - rect.left) * sx;
    const y = (ev.clientY - rect.top) * sy;
    const [lon, lat] = this.projector.toLonLat(x, y);
    this.store.setPoint({ lat, lon });
  }

  render(): void {
    this.renderChoropleth();
    this.renderRoutes();
    this.renderEndpoints();
  }

  private clear(layer: SVGElement): void {
    while (layer.firstChild) layer.removeChild(layer.firstChild);
  }

  private renderChoropleth(): void {
    const { layer, scores } = this.store.state;
    this.clear(this.layers.choropleth);
    if (layer === "off" || !scores) return;
    for (const f of scores.features) {
      if (f.geometry.type === "LineString") {
        const props = f.properties as SegmentScoreProperties;
        const node = el("path", {
          d: this.projector.pathD(
            (f as LineFeature<SegmentScoreProperties>).geometry.coordinates,
          ),
          class: "seg",
          fill: "none",
          stroke: rampColor(props.score),
          "stroke-width": "5",
          "stroke-linecap": "round",
          "data-edge-id": props.edge_id,
          "data-score": String(props.score),
        });
        node.addEventListener("mouseenter", () =>
          this.store.setHover(segmentHover(props)),
        );
        node.addEventListener("mouseleave", () => this.store.setHover(null));
        this.layers.choropleth.appendChild(node);
      } else {
        const props = f.properties as NeighborhoodScoreProperties;
        const ring = f.geometry.coordinates[0];
        if (!ring) continue;
        const scored =
          typeof props.score === "number" && props.absent !== true;
        const node = el("polygon", {
          points: this.projector.ringPoints(ring as [number, number][]),
          class: "nbh",
          fill: scored ? rampColor(props.score as number) : "#e2e8f0",
          "fill-opacity": "0.55",
          stroke: "#64748b",
          "data-neighborhood-id": props.neighborhood_id,
          "data-score": scored ? String(props.score) : "none",
        });
        node.addEventListener("mouseenter", () =>
          this.store.setHover(neighborhoodHover(props)),
        );
        node.addEventListener("mouseleave", () => this.store.setHover(null));
        this.layers.choropleth.appendChild(node);
      }
    }
  }

  private renderRoutes(): void {
    const { routes, selected, showBaseline } = this.store.state;
    this.clear(this.layers.routes);
    const order = showBaseline ? ["shortest", ...selected] : selected;
    for (const id of order) {
      const r = routes[id];
      if (!r) continue;
      this.layers.routes.appendChild(
        el("path", {
          d: this.projector.pathD(r.coords),
          class: "route-line",
          fill: "none",
          stroke: r.color,
          "stroke-width": "4",
          "stroke-linecap": "round",
          "stroke-linejoin": "round",
          "data-profile-id": r.profileId,
        }),
      );
    }
  }

  private renderEndpoints(): void {
    const { origin, dest } = this.store.state;
    this.clear(this.layers.endpoints);
    for (const [p, cls] of [
      [origin, "origin"],
      [dest, "dest"],
    ] as const) {
      if (!p) continue;
      const [x, y] = this.projector.toXY(p.lon, p.lat);
      this.layers.endpoints.appendChild(
        el("circle", {
          cx: x.toFixed(1),
          cy: y.toFixed(1),
          r: "7",
          class: cls,
          fill: cls === "origin" ? "#111827" : "#ffffff",
          stroke: "#111827",
          "stroke-width": "2.5",
        }),
      );
    }
  }
}

function segmentHover(p: SegmentScoreProperties): HoverInfo {
  return {
    kind: "segment",
    title: `${p.kind} ${p.edge_id}`,
    score: p.score,
    penalty: p.penalty,
    labels: p.labels,
  };
}

function neighborhoodHover(p: NeighborhoodScoreProperties): HoverInfo {
  return {
    kind: "neighborhood",
    title: p.neighborhood_id,
    score:
      typeof p.score === "number" && p.absent !== true ? p.score : null,
    penalty: null,
    labels: [],
  };
}
