// Tolerance-rectangle semantics. The rectangle lives in the risk-vs-profit
// plane around a baseline optimum: moving right allows more risk, moving up
// demands more profit. Positive deltas mean "may degrade", negative deltas
// "must improve". The upper-left quadrant (both must improve) is never
// sampled; it maps to zone null and the UI greys it out.

export type Zone = "s1" | "s2" | "s3";

export interface DragTolerance {
  zone: Zone | null;
  dp: number;
  dr: number;
}

function clampUnit(v: number): number {
  return Math.max(-1, Math.min(1, v));
}

/**
 * Map a drag offset inside the rectangle to a tolerance pair.
 *
 * @param dx rightward offset as a fraction of the half-width, in [-1, 1]
 * @param dy upward offset as a fraction of the half-height, in [-1, 1]
 * @param a  profit half-width (max fractional degradation)
 * @param b  risk half-width
 */
export function toleranceFromOffset(
  dx: number,
  dy: number,
  a: number,
  b: number,
): DragTolerance {
  const dr = clampUnit(dx) * b;
  const dp = -clampUnit(dy) * a;
  let zone: Zone | null = null;
  if (dp > 0 && dr > 0) zone = "s1";
  else if (dp < 0 && dr > 0) zone = "s2";
  else if (dp > 0 && dr < 0) zone = "s3";
  return { zone, dp, dr };
}

export const ZONE_COLORS: Record<Zone, string> = {
  s1: "#1f78b4",
  s2: "#33a02c",
  s3: "#e0a800",
};

export function zoneDescription(zone: Zone | null): string {
  switch (zone) {
    case "s1":
      return "s1: profit and risk may both degrade";
    case "s2":
      return "s2: profit must improve, risk may degrade";
    case "s3":
      return "s3: risk must improve, profit may degrade";
    default:
      return "both metrics must improve: outside the frontier, not sampled";
  }
}
