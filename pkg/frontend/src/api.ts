// Typed client for the sidewalk-access HTTP service. Every request the
// UI makes goes through this module, and the fetch implementation is
// injectable so the test suite can replay recorded responses.

export interface LatLon {
  lat: number;
  lon: number;
}

export interface Provenance {
  kind: string;
  base_profile_id?: string;
}

export interface ProfileDoc {
  profile_id: string;
  group: string;
  confidence: Record<string, number>;
  provenance: Provenance;
}

export interface HealthDoc {
  status: string;
  version: string;
  backend: string;
  nodes: number;
  edges: number;
}

export interface BarrierDoc {
  label_id: string;
  label_type: string;
  severity: string;
  edge_id: string;
}

export interface RouteProperties {
  profile_id: string;
  length_m: number;
  weighted_m: number;
  origin_node: string;
  dest_node: string;
  nodes: string[];
  edges: string[];
  barriers: BarrierDoc[];
}

export interface LineFeature<P> {
  type: "Feature";
  geometry: { type: "LineString"; coordinates: [number, number][] };
  properties: P;
}

export interface PolygonFeature<P> {
  type: "Feature";
  geometry: { type: "Polygon"; coordinates: [number, number][][] };
  properties: P;
}

export interface RoutesDoc {
  type: "FeatureCollection";
  features: LineFeature<RouteProperties>[];
  version: string;
}

export interface SegmentScoreProperties {
  edge_id: string;
  kind: string;
  length_m: number;
  penalty: number;
  score: number;
  normalizer: number;
  profile_id: string;
  labels: { label_type: string; severity: string }[];
}

export interface NeighborhoodScoreProperties {
  neighborhood_id: string;
  score?: number | null;
  covered_length_m?: number;
  normalizer: number;
  profile_id: string;
  absent?: boolean;
}

export interface ScoresDoc {
  type: "FeatureCollection";
  features: (
    | LineFeature<SegmentScoreProperties>
    | PolygonFeature<NeighborhoodScoreProperties>
  )[];
  version: string;
}

export interface ServiceErrorBody {
  module: string;
  kind: string;
  message: string;
}

/** Non-2xx service reply, carrying the structured error when present. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ServiceErrorBody | null,
    readonly version: string | null,
  ) {
    super(detail ? `${detail.kind}: ${detail.message}` : `HTTP ${status}`);
  }
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

function fmt(p: LatLon): string {
  return `${p.lat},${p.lon}`;
}

export class Client {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchImpl(this.base + path);
    return this.unwrap<T>(res);
  }

  private async unwrap<T>(res: {
    ok: boolean;
    status: number;
    json(): Promise<unknown>;
  }): Promise<T> {
    let body: unknown = null;
    try {
      body = await res.json();
    } catch {
      body = null;
    }
    if (!res.ok) {
      const rec = body as { error?: ServiceErrorBody; version?: string } | null;
      throw new ApiError(res.status, rec?.error ?? null, rec?.version ?? null);
    }
    return body as T;
  }

  health(): Promise<HealthDoc> {
    return this.get("/health");
  }

  profiles(): Promise<{ profiles: ProfileDoc[]; version: string }> {
    return this.get("/profiles");
  }

  async createProfile(body: {
    profile_id: string;
    base_profile_id: string;
    overrides: Record<string, number>;
  }): Promise<{ profile: ProfileDoc; version: string }> {
    const res = await this.fetchImpl(this.base + "/profiles", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return this.unwrap(res);
  }

  scores(profileId: string, level: "segment" | "neighborhood"): Promise<ScoresDoc> {
    return this.get(
      `/scores?profile_id=${encodeURIComponent(profileId)}&level=${level}`,
    );
  }

  route(from: LatLon, to: LatLon, profileId: string): Promise<RoutesDoc> {
    return this.get(
      `/route?from=${fmt(from)}&to=${fmt(to)}` +
        `&profile_id=${encodeURIComponent(profileId)}`,
    );
  }

  routes(from: LatLon, to: LatLon, profileIds: string[]): Promise<RoutesDoc> {
    return this.get(
      `/routes?from=${fmt(from)}&to=${fmt(to)}` +
        `&profile_ids=${encodeURIComponent(profileIds.join(","))}`,
    );
  }
}
