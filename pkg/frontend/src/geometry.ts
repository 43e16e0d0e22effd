// Planar projection for the map viewport. Equirectangular with the
// longitude axis compressed by cos(mid latitude) keeps local shapes
// close enough to true for a neighborhood-scale network; no number
// shown to the user comes from here, only pixel positions.

export interface Bbox {
  minLon: number;
  minLat: number;
  maxLon: number;
  maxLat: number;
}

export function bboxOfLines(lines: [number, number][][]): Bbox {
  let minLon = Infinity;
  let minLat = Infinity;
  let maxLon = -Infinity;
  let maxLat = -Infinity;
  for (const line of lines) {
    for (const [lon, lat] of line) {
      if (lon < minLon) minLon = lon;
      if (lon > maxLon) maxLon = lon;
      if (lat < minLat) minLat = lat;
      if (lat > maxLat) maxLat = lat;
    }
  }
  return { minLon, minLat, maxLon, maxLat };
}

export class Projector {
  private readonly kx: number;
  private readonly ky: number;
  private readonly ox: number;
  private readonly oy: number;

  constructor(
    bbox: Bbox,
    readonly width: number,
    readonly height: number,
    pad = 24,
  ) {
    const midLat = (bbox.minLat + bbox.maxLat) / 2;
    const cos = Math.cos((midLat * Math.PI) / 180);
    const spanX = Math.max((bbox.maxLon - bbox.minLon) * cos, 1e-9);
    const spanY = Math.max(bbox.maxLat - bbox.minLat, 1e-9);
    const scale = Math.min(
      (width - 2 * pad) / spanX,
      (height - 2 * pad) / spanY,
    );
    this.kx = scale * cos;
    this.ky = scale;
    // center the network in the viewport
    this.ox = (width - spanX * scale) / 2 - bbox.minLon * this.kx;
    this.oy = (height - spanY * scale) / 2 + bbox.maxLat * this.ky;
  }

  toXY(lon: number, lat: number): [number, number] {
    return [lon * this.kx + this.ox, this.oy - lat * this.ky];
  }

  toLonLat(x: number, y: number): [number, number] {
    return [(x - this.ox) / this.kx, (this.oy - y) / this.ky];
  }

  pathD(coords: [number, number][]): string {
    return coords
      .map(([lon, lat], i) => {
        const [x, y] = this.toXY(lon, lat);
        return `${i === 0 ? "M" : "L"}${x.toFixed(1)} ${y.toFixed(1)}`;
      })
      .join(" ");
  }

  ringPoints(ring: [number, number][]): string {
    return ring
      .map(([lon, lat]) => {
        const [x, y] = this.toXY(lon, lat);
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
  }
}
