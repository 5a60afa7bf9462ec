// Plot-coordinate mapping only: every displayed number comes from the
// server, the client merely places points on screen.

export interface MetricPoint {
  roi: number;
  risk: number;
}

export interface Bounds {
  roiMin: number;
  roiMax: number;
  riskMin: number;
  riskMax: number;
}

export function computeBounds(groups: MetricPoint[][]): Bounds | null {
  const all = groups.flat();
  if (all.length === 0) return null;
  let roiMin = Infinity;
  let roiMax = -Infinity;
  let riskMin = Infinity;
  let riskMax = -Infinity;
  for (const p of all) {
    roiMin = Math.min(roiMin, p.roi);
    roiMax = Math.max(roiMax, p.roi);
    riskMin = Math.min(riskMin, p.risk);
    riskMax = Math.max(riskMax, p.risk);
  }
  return { roiMin, roiMax, riskMin, riskMax };
}

/** Affine map onto [0, 1]; a degenerate axis pins everything at 0.5. */
export function toUnit(value: number, lo: number, hi: number): number {
  if (hi === lo) return 0.5;
  return (value - lo) / (hi - lo);
}

export function padBounds(bounds: Bounds, fraction = 0.08): Bounds {
  const roiPad = (bounds.roiMax - bounds.roiMin || 1e-6) * fraction;
  const riskPad = (bounds.riskMax - bounds.riskMin || 1e-6) * fraction;
  return {
    roiMin: bounds.roiMin - roiPad,
    roiMax: bounds.roiMax + roiPad,
    riskMin: bounds.riskMin - riskPad,
    riskMax: bounds.riskMax + riskPad,
  };
}
