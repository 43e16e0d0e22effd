// Replays the recorded service responses in test/fixtures/ behind the
// client's fetch seam. Requests are matched on method, path, and the
// query parameters that picked the fixture when it was recorded; an
// unmatched request is a test bug and throws.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import type { BasemapDoc } from "../src/map.js";

const here = dirname(fileURLToPath(import.meta.url));

export interface Recorded {
  status: number;
  body: unknown;
}

export function loadFixture(name: string): Recorded {
  const raw = readFileSync(join(here, "fixtures", `${name}.json`), "utf8");
  return JSON.parse(raw) as Recorded;
}

export function loadBasemap(): BasemapDoc {
  const raw = readFileSync(
    join(here, "..", "public", "basemap.geojson"),
    "utf8",
  );
  return JSON.parse(raw) as BasemapDoc;
}

export function loadScenario(): {
  origin: { lat: number; lon: number };
  dest: { lat: number; lon: number };
  disconnected_point: { lat: number; lon: number };
} {
  const raw = readFileSync(
    join(here, "..", "..", "data", "scenario.json"),
    "utf8",
  );
  return JSON.parse(raw) as ReturnType<typeof loadScenario>;
}

function fixtureFor(method: string, url: URL): string {
  const q = url.searchParams;
  if (url.pathname === "/health") return "health";
  if (url.pathname === "/profiles") {
    return method === "POST" ? "profile_created" : "profiles";
  }
  if (url.pathname === "/scores") {
    const key = `${q.get("profile_id")}/${q.get("level")}`;
    const table: Record<string, string> = {
      "walking_cane/segment": "scores_segment_cane",
      "motorized_wheelchair/segment": "scores_segment_motorized",
      "motorized_wheelchair/neighborhood": "scores_neighborhood_motorized",
    };
    const hit = table[key];
    if (hit) return hit;
    throw new Error(`no scores fixture for ${key}`);
  }
  if (url.pathname === "/routes") return "routes_planted";
  if (url.pathname === "/route") {
    if ((q.get("to") ?? "").includes("-122.2808")) return "route_disconnected";
    const table: Record<string, string> = {
      walking_cane: "route_cane",
      motorized_wheelchair: "route_motorized",
      shortest: "route_shortest",
      my_custom: "route_custom",
    };
    return table[q.get("profile_id") ?? ""] ?? "route_unknown";
  }
  throw new Error(`no fixture route for ${method} ${url.pathname}`);
}

export interface FakeService {
  fetch: FetchLike;
  calls: string[];
  /**
   * Delay every request whose URL contains `pattern` until the
   * returned release function runs. Used to force stale-response
   * orderings.
   */
  hold(pattern: string): () => void;
}

export function fakeService(): FakeService {
  const calls: string[] = [];
  const holds: { pattern: string; waiters: (() => void)[]; active: boolean }[] =
    [];

  const fetchImpl: FetchLike = async (rawUrl, init) => {
    const method = init?.method ?? "GET";
    calls.push(`${method} ${rawUrl}`);
    for (const hold of holds) {
      if (hold.active && rawUrl.includes(hold.pattern)) {
        await new Promise<void>((resolve) => hold.waiters.push(resolve));
      }
    }
    const url = new URL(rawUrl, "http://fixtures.test");
    const recorded = loadFixture(fixtureFor(method, url));
    return {
      ok: recorded.status < 400,
      status: recorded.status,
      json: async () => recorded.body,
    };
  };

  return {
    fetch: fetchImpl,
    calls,
    hold(pattern: string) {
      const entry = { pattern, waiters: [] as (() => void)[], active: true };
      holds.push(entry);
      return () => {
        entry.active = false;
        for (const w of entry.waiters.splice(0)) w();
      };
    },
  };
}
