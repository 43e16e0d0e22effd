// Single-session UI state and the actions that mutate it. The store
// owns every service interaction; rendering code subscribes and reads.
//
// Two rules the rest of the app leans on:
//   - routes are kept only for currently selected profiles (plus the
//     explicit shortest baseline), enforced on every selection change;
//   - responses apply only when their request stamp is still current,
//     so a slow stale fetch can never overwrite a newer one.

import {
  ApiError,
  BarrierDoc,
  Client,
  LatLon,
  ProfileDoc,
  RoutesDoc,
  ScoresDoc,
} from "./api.js";
import { ColorAssigner } from "./colors.js";

export type Layer = "segments" | "neighborhoods" | "off";

export interface RouteView {
  profileId: string;
  color: string;
  coords: [number, number][];
  lengthM: number;
  weightedM: number;
  barriers: BarrierDoc[];
}

export interface RouteFailure {
  profileId: string;
  kind: string;
  message: string;
}

export interface HoverInfo {
  kind: "segment" | "neighborhood";
  title: string;
  score: number | null;
  penalty: number | null;
  labels: { label_type: string; severity: string }[];
}

export interface UiState {
  profiles: ProfileDoc[];
  selected: string[];
  showBaseline: boolean;
  origin: LatLon | null;
  dest: LatLon | null;
  layer: Layer;
  routes: Record<string, RouteView>;
  routeErrors: Record<string, RouteFailure>;
  scores: ScoresDoc | null;
  hover: HoverInfo | null;
  banner: string | null;
  notice: string | null;
  version: string | null;
  backend: string | null;
}

export const BASELINE_ID = "shortest";

type Listener = () => void;

export class Store {
  readonly state: UiState = {
    profiles: [],
    selected: [],
    showBaseline: false,
    origin: null,
    dest: null,
    layer: "off",
    routes: {},
    routeErrors: {},
    scores: null,
    hover: null,
    banner: null,
    notice: null,
    version: null,
    backend: null,
  };

  private listeners: Listener[] = [];
  private colorAssigner = new ColorAssigner();
  private routeStamp = 0;
  private scoreStamp = 0;
  private busyCount = 0;
  private idleWaiters: (() => void)[] = [];

  constructor(private readonly client: Client) {}

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private emit(): void {
    for (const l of this.listeners) l();
  }

  /** Resolves once no store-initiated request is in flight. */
  async settled(): Promise<void> {
    while (this.busyCount > 0) {
      await new Promise<void>((resolve) => this.idleWaiters.push(resolve));
    }
  }

  private async track<T>(work: Promise<T>): Promise<T> {
    this.busyCount += 1;
    try {
      return await work;
    } finally {
      this.busyCount -= 1;
      if (this.busyCount === 0) {
        for (const w of this.idleWaiters.splice(0)) w();
      }
    }
  }

  colorFor(profileId: string): string {
    return this.colorAssigner.colorFor(profileId);
  }

  private noteVersion(v: string | null | undefined): void {
    if (v == null) return;
    if (this.state.version !== null && this.state.version !== v) {
      this.state.banner =
        `dataset changed on the server (${this.state.version} -> ${v}); ` +
        "shown results may mix versions, reload to resync";
    }
    this.state.version = v;
  }

  async init(): Promise<void> {
    await this.track(
      (async () => {
        try {
          const health = await this.client.health();
          this.state.backend = health.backend;
          this.noteVersion(health.version);
          const listing = await this.client.profiles();
          this.noteVersion(listing.version);
          this.state.profiles = listing.profiles;
          const first = listing.profiles[0];
          if (first) this.state.selected = [first.profile_id];
        } catch (err) {
          this.state.banner = describeError(err, "loading the service failed");
        }
        this.emit();
      })(),
    );
  }

  // ---- profile selection -------------------------------------------------

  toggleProfile(profileId: string): void {
    const known = this.state.profiles.some((p) => p.profile_id === profileId);
    if (!known) {
      this.state.banner = `unknown profile '${profileId}'`;
      this.emit();
      return;
    }
    const idx = this.state.selected.indexOf(profileId);
    if (idx >= 0) {
      this.state.selected.splice(idx, 1);
      delete this.state.routes[profileId];
      delete this.state.routeErrors[profileId];
    } else {
      this.state.selected.push(profileId);
      if (this.state.origin && this.state.dest) {
        void this.fetchRouteFor(profileId, this.routeStamp);
      }
    }
    this.afterSelectionChange();
    this.emit();
  }

  toggleBaseline(): void {
    this.state.showBaseline = !this.state.showBaseline;
    if (!this.state.showBaseline) {
      delete this.state.routes[BASELINE_ID];
      delete this.state.routeErrors[BASELINE_ID];
    } else if (this.state.origin && this.state.dest) {
      void this.fetchRouteFor(BASELINE_ID, this.routeStamp);
    }
    this.emit();
  }

  private afterSelectionChange(): void {
    // drop anything displayed for a no-longer-selected profile
    for (const id of Object.keys(this.state.routes)) {
      if (id !== BASELINE_ID && !this.state.selected.includes(id)) {
        delete this.state.routes[id];
      }
    }
    if (this.state.layer !== "off") {
      const pid = this.state.selected[0];
      if (pid === undefined) {
        this.state.layer = "off";
        this.state.scores = null;
      } else if (this.state.scores?.features[0]?.properties.profile_id !== pid) {
        void this.fetchScores(pid, this.state.layer);
      }
    }
  }

  // ---- endpoints and routes ----------------------------------------------

  setPoint(p: LatLon): void {
    this.state.notice = null;
    if (this.state.origin === null) {
      this.state.origin = p;
    } else if (this.state.dest === null) {
      if (p.lat === this.state.origin.lat && p.lon === this.state.origin.lon) {
        this.state.notice = "origin and destination are the same point";
        this.emit();
        return;
      }
      this.state.dest = p;
      this.refetchRoutes();
    } else {
      this.state.origin = p;
      this.state.dest = null;
      this.state.routes = {};
      this.state.routeErrors = {};
    }
    this.emit();
  }

  clearEndpoints(): void {
    this.state.origin = null;
    this.state.dest = null;
    this.state.routes = {};
    this.state.routeErrors = {};
    this.state.notice = null;
    this.emit();
  }

  private refetchRoutes(): void {
    this.routeStamp += 1;
    const stamp = this.routeStamp;
    this.state.routes = {};
    this.state.routeErrors = {};
    const wanted = this.state.showBaseline
      ? [...this.state.selected, BASELINE_ID]
      : [...this.state.selected];
    for (const id of wanted) {
      void this.fetchRouteFor(id, stamp);
    }
  }

  private fetchRouteFor(profileId: string, stamp: number): Promise<void> {
    const { origin, dest } = this.state;
    if (!origin || !dest) return Promise.resolve();
    return this.track(
      (async () => {
        try {
          const doc = await this.client.route(origin, dest, profileId);
          if (stamp !== this.routeStamp) return; // stale, drop
          this.applyRoute(profileId, doc);
        } catch (err) {
          if (stamp !== this.routeStamp) return;
          this.applyRouteError(profileId, err);
        }
        this.emit();
      })(),
    );
  }

  private applyRoute(profileId: string, doc: RoutesDoc): void {
    this.noteVersion(doc.version);
    const feature = doc.features[0];
    if (!feature) return;
    const stillWanted =
      profileId === BASELINE_ID
        ? this.state.showBaseline
        : this.state.selected.includes(profileId);
    if (!stillWanted) return;
    this.state.routes[profileId] = {
      profileId,
      color: this.colorFor(profileId),
      coords: feature.geometry.coordinates,
      lengthM: feature.properties.length_m,
      weightedM: feature.properties.weighted_m,
      barriers: feature.properties.barriers,
    };
    delete this.state.routeErrors[profileId];
  }

  private applyRouteError(profileId: string, err: unknown): void {
    if (err instanceof ApiError && err.status === 422 && err.detail) {
      this.noteVersion(err.version);
      this.state.routeErrors[profileId] = {
        profileId,
        kind: err.detail.kind,
        message: err.detail.message,
      };
      return;
    }
    this.state.banner = describeError(err, `route for ${profileId} failed`);
  }

  // ---- choropleth layer --------------------------------------------------

  setLayer(level: "segments" | "neighborhoods"): void {
    if (this.state.layer === level) {
      this.state.layer = "off";
      this.state.scores = null;
      this.emit();
      return;
    }
    const pid = this.state.selected[0];
    if (pid === undefined) {
      this.state.banner = "select a profile before turning on a score layer";
      this.emit();
      return;
    }
    this.state.layer = level;
    void this.fetchScores(pid, level);
    this.emit();
  }

  private fetchScores(profileId: string, level: Layer): Promise<void> {
    this.scoreStamp += 1;
    const stamp = this.scoreStamp;
    const apiLevel = level === "segments" ? "segment" : "neighborhood";
    return this.track(
      (async () => {
        try {
          const doc = await this.client.scores(profileId, apiLevel);
          if (stamp !== this.scoreStamp) return; // stale, drop
          this.noteVersion(doc.version);
          this.state.scores = doc;
        } catch (err) {
          if (stamp !== this.scoreStamp) return;
          this.state.banner = describeError(err, "score layer failed");
          this.state.layer = "off";
          this.state.scores = null;
        }
        this.emit();
      })(),
    );
  }

  // ---- custom profiles ---------------------------------------------------

  createCustomProfile(
    profileId: string,
    baseProfileId: string,
    overrides: Record<string, number>,
  ): Promise<void> {
    return this.track(
      (async () => {
        try {
          const created = await this.client.createProfile({
            profile_id: profileId,
            base_profile_id: baseProfileId,
            overrides,
          });
          this.noteVersion(created.version);
          this.state.profiles.push(created.profile);
          this.toggleProfile(created.profile.profile_id);
        } catch (err) {
          this.state.banner = describeError(err, "creating the profile failed");
        }
        this.emit();
      })(),
    );
  }

  // ---- misc --------------------------------------------------------------

  setHover(h: HoverInfo | null): void {
    this.state.hover = h;
    this.emit();
  }

  dismissBanner(): void {
    this.state.banner = null;
    this.emit();
  }
}

function describeError(err: unknown, fallback: string): string {
  if (err instanceof ApiError && err.detail) {
    return `${err.detail.kind}: ${err.detail.message}`;
  }
  if (err instanceof Error && err.message) {
    return `${fallback}: ${err.message}`;
  }
  return fallback;
}
