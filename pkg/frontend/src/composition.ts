import type { SolvePoint } from "./types.js";

export interface BarSegment {
  asset: string;
  share: number;
}

export interface Bar {
  key: string;
  label: string;
  segments: BarSegment[];
  outlined: boolean;
  hhi: number;
}

/** Bar data straight from a server point; shares are used as returned. */
export function barFromPoint(
  key: string,
  label: string,
  point: SolvePoint,
  assetLabels: string[],
  outlined = false,
): Bar {
  return {
    key,
    label,
    segments: assetLabels.map((asset, i) => ({
      asset,
      share: point.shares[i] ?? 0,
    })),
    outlined,
    hhi: point.hhi,
  };
}

export function barTotal(bar: Bar): number {
  return bar.segments.reduce((acc, s) => acc + s.share, 0);
}
