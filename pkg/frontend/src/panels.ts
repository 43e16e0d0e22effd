// Side panel and overlays: profile pickers, the custom-profile
// builder, route summary, legend, hover popover, and the message
// strips. Plain DOM rebuilt per render; values shown come straight
// off service responses held in the store.

import { ProfileDoc } from "./api.js";
import { rampColor } from "./colors.js";
import { BASELINE_ID, Store } from "./state.js";

function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

export class Panels {
  readonly root: HTMLElement;
  private customOverrides: Record<string, number> = {};

  constructor(private readonly store: Store, container: HTMLElement) {
    this.root = container;
  }

  render(): void {
    const s = this.store.state;
    this.root.replaceChildren();

    const header = h("div", { id: "topbar" });
    header.appendChild(h("h1", {}, "sidewalk access"));
    if (s.version) {
      header.appendChild(
        h("span", { id: "version-badge" }, `dataset ${s.version}`),
      );
    }
    if (s.backend) {
      header.appendChild(h("span", { id: "backend-badge" }, s.backend));
    }
    this.root.appendChild(header);

    if (s.banner) {
      const banner = h("div", { id: "banner", role: "alert" }, s.banner);
      const close = h("button", { id: "banner-dismiss" }, "dismiss");
      close.addEventListener("click", () => this.store.dismissBanner());
      banner.appendChild(close);
      this.root.appendChild(banner);
    }
    if (s.notice) {
      this.root.appendChild(h("div", { id: "notice" }, s.notice));
    }

    this.root.appendChild(this.profileList(s.profiles, s.selected));
    this.root.appendChild(this.customForm(s.profiles));
    this.root.appendChild(this.layerControls());
    this.root.appendChild(this.legend());
    this.root.appendChild(this.summary());
    this.root.appendChild(this.popover());
  }

  private profileList(profiles: ProfileDoc[], selected: string[]): HTMLElement {
    const box = h("section", { id: "profile-list" });
    box.appendChild(h("h2", {}, "profiles"));
    for (const p of profiles) {
      const row = h("label", { class: "profile-row" });
      const cb = h("input", {
        type: "checkbox",
        "data-profile-id": p.profile_id,
      });
      if (selected.includes(p.profile_id)) cb.setAttribute("checked", "");
      (cb as HTMLInputElement).checked = selected.includes(p.profile_id);
      cb.addEventListener("change", () =>
        this.store.toggleProfile(p.profile_id),
      );
      row.appendChild(cb);
      const sw = h("span", { class: "swatch" });
      sw.style.background = this.store.colorFor(p.profile_id);
      row.appendChild(sw);
      row.appendChild(h("span", { class: "profile-name" }, p.profile_id));
      if (p.provenance.kind === "custom") {
        row.appendChild(h("em", { class: "custom-tag" }, "custom"));
      }
      box.appendChild(row);
    }
    const base = h("label", { class: "profile-row baseline-row" });
    const cb = h("input", { type: "checkbox", id: "baseline-toggle" });
    (cb as HTMLInputElement).checked = this.store.state.showBaseline;
    cb.addEventListener("change", () => this.store.toggleBaseline());
    base.appendChild(cb);
    const sw = h("span", { class: "swatch" });
    sw.style.background = this.store.colorFor(BASELINE_ID);
    base.appendChild(sw);
    base.appendChild(h("span", { class: "profile-name" }, "shortest baseline"));
    box.appendChild(base);
    return box;
  }

  private customForm(profiles: ProfileDoc[]): HTMLElement {
    const box = h("section", { id: "custom-form" });
    box.appendChild(h("h2", {}, "custom profile"));
    const idInput = h("input", {
      id: "custom-id",
      type: "text",
      placeholder: "profile id",
    }) as HTMLInputElement;
    box.appendChild(idInput);

    const baseSelect = h("select", { id: "custom-base" }) as HTMLSelectElement;
    for (const p of profiles) {
      if (p.provenance.kind !== "custom") {
        baseSelect.appendChild(
          h("option", { value: p.profile_id }, p.profile_id),
        );
      }
    }
    box.appendChild(baseSelect);

    const sliders = h("div", { id: "custom-sliders" });
    const baseDoc = () =>
      profiles.find((p) => p.profile_id === baseSelect.value) ?? profiles[0];
    const renderSliders = () => {
      sliders.replaceChildren();
      this.customOverrides = {};
      const doc = baseDoc();
      if (!doc) return;
      for (const [labelType, value] of Object.entries(doc.confidence)) {
        const row = h("label", { class: "slider-row" });
        row.appendChild(h("span", { class: "slider-name" }, labelType));
        const input = h("input", {
          type: "range",
          min: "0",
          max: "1",
          step: "0.05",
          value: String(value),
          "data-label-type": labelType,
        }) as HTMLInputElement;
        input.addEventListener("input", () => {
          this.customOverrides[labelType] = Number(input.value);
          out.textContent = input.value;
        });
        const out = h("span", { class: "slider-value" }, String(value));
        row.appendChild(input);
        row.appendChild(out);
        sliders.appendChild(row);
      }
    };
    baseSelect.addEventListener("change", renderSliders);
    renderSliders();
    box.appendChild(sliders);

    const create = h("button", { id: "custom-create" }, "create and select");
    create.addEventListener("click", () => {
      const id = idInput.value.trim();
      const base = baseSelect.value;
      if (!id) return;
      void this.store.createCustomProfile(id, base, { ...this.customOverrides });
    });
    box.appendChild(create);
    return box;
  }

  private layerControls(): HTMLElement {
    const box = h("section", { id: "layer-controls" });
    box.appendChild(h("h2", {}, "score layer"));
    for (const level of ["segments", "neighborhoods"] as const) {
      const btn = h(
        "button",
        {
          class:
            this.store.state.layer === level ? "layer-btn active" : "layer-btn",
          "data-layer": level,
        },
        level,
      );
      btn.addEventListener("click", () => this.store.setLayer(level));
      box.appendChild(btn);
    }
    if (this.store.state.layer !== "off") {
      const pid = this.store.state.selected[0] ?? "";
      box.appendChild(
        h("div", { id: "layer-profile" }, `colored for ${pid}`),
      );
      const ramp = h("div", { id: "ramp-legend" });
      for (const v of [0, 0.25, 0.5, 0.75, 1]) {
        const cell = h("span", { class: "ramp-cell" }, v.toFixed(2));
        cell.style.background = rampColor(v);
        ramp.appendChild(cell);
      }
      box.appendChild(ramp);
    }
    return box;
  }

  private legend(): HTMLElement {
    const s = this.store.state;
    const box = h("section", { id: "legend" });
    const shown = s.showBaseline ? [BASELINE_ID, ...s.selected] : s.selected;
    const entries = shown.filter((id) => s.routes[id]);
    if (entries.length === 0) return box;
    box.appendChild(h("h2", {}, "routes"));
    for (const id of entries) {
      const row = h("div", { class: "legend-entry", "data-profile-id": id });
      const sw = h("span", { class: "swatch" });
      sw.style.background = (s.routes[id] as { color: string }).color;
      row.appendChild(sw);
      row.appendChild(h("span", {}, id));
      box.appendChild(row);
    }
    return box;
  }

  private summary(): HTMLElement {
    const s = this.store.state;
    const box = h("section", { id: "summary" });
    const ids = s.showBaseline ? [BASELINE_ID, ...s.selected] : s.selected;
    const any = ids.some((id) => s.routes[id] || s.routeErrors[id]);
    if (!any) return box;
    box.appendChild(h("h2", {}, "route summary"));
    for (const id of ids) {
      const r = s.routes[id];
      const e = s.routeErrors[id];
      if (!r && !e) continue;
      const row = h("div", { class: "summary-row", "data-profile-id": id });
      row.appendChild(h("span", { class: "summary-name" }, id));
      if (r) {
        row.appendChild(
          h("span", { class: "len" }, `${r.lengthM.toFixed(1)} m`),
        );
        row.appendChild(
          h("span", { class: "wt" }, `weighted ${r.weightedM.toFixed(1)}`),
        );
        row.appendChild(
          h("span", { class: "barriers" }, `${r.barriers.length} barriers`),
        );
      } else if (e) {
        row.appendChild(
          h(
            "span",
            { class: "route-error" },
            `no accessible route (${e.kind})`,
          ),
        );
      }
      box.appendChild(row);
    }
    return box;
  }

  private popover(): HTMLElement {
    const hov = this.store.state.hover;
    const box = h("div", { id: "popover" });
    if (!hov) {
      box.setAttribute("hidden", "");
      return box;
    }
    box.appendChild(h("strong", {}, hov.title));
    box.appendChild(
      h(
        "div",
        { class: "pop-score" },
        hov.score === null ? "not scored" : `score ${hov.score.toFixed(3)}`,
      ),
    );
    if (hov.penalty !== null) {
      box.appendChild(
        h("div", { class: "pop-penalty" }, `penalty ${hov.penalty.toFixed(3)}`),
      );
    }
    if (hov.labels.length > 0) {
      const ul = h("ul", { class: "pop-labels" });
      for (const l of hov.labels) {
        ul.appendChild(h("li", {}, `${l.label_type} (${l.severity})`));
      }
      box.appendChild(ul);
    }
    return box;
  }
}
