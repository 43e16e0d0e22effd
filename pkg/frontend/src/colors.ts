// Profile color encoding. The canonical groups keep fixed colors that
// match the figure conventions people already know (yellow baseline,
// teal cane, purple motorized); custom profiles draw from a spare
// palette in creation order so a profile never changes color while
// it stays selected.

export const PROFILE_COLORS: Record<string, string> = {
  shortest: "#eab308",
  walking_cane: "#0d9488",
  walker: "#b45309",
  mobility_scooter: "#be185d",
  manual_wheelchair: "#1d4ed8",
  motorized_wheelchair: "#7c3aed",
};

const SPARE = ["#0ea5e9", "#65a30d", "#dc2626", "#475569", "#d97706", "#0f766e"];

export class ColorAssigner {
  private assigned = new Map<string, string>();
  private next = 0;

  colorFor(profileId: string): string {
    const fixed = PROFILE_COLORS[profileId];
    if (fixed !== undefined) return fixed;
    let c = this.assigned.get(profileId);
    if (c === undefined) {
      c = SPARE[this.next % SPARE.length] as string;
      this.next += 1;
      this.assigned.set(profileId, c);
    }
    return c;
  }
}

/** Red (0) through yellow to green (1); scores outside [0,1] are clamped. */
export function rampColor(score: number): string {
  const s = Math.min(1, Math.max(0, score));
  return `hsl(${Math.round(s * 120)}, 72%, 42%)`;
}
