// Round-trip against a live solve API. Set E2E_SERVER (for example
// http://127.0.0.1:8787) after starting the backend:
//   divopt serve --scenarios scenarios.json --port 8787
// Skipped when the variable is unset so unit runs stay offline.

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { barFromPoint, barTotal } from "../src/composition.js";
import { toleranceFromOffset } from "../src/zones.js";
import type { PenaltyPoint, Universe } from "../src/types.js";

const server = process.env.E2E_SERVER;
const suite = server ? describe : describe.skip;

suite("live server round-trip", () => {
  const api = new ApiClient(server ?? "");

  it("loads the universe with labelled assets", { timeout: 30_000 }, async () => {
    const universe: Universe = await api.universe();
    expect(universe.n).toBeGreaterThan(0);
    expect(universe.m).toBeGreaterThan(0);
    for (const asset of universe.assets) {
      expect(asset.label).toMatch(/^T\d+_C\d+_(Secured|Merchant)$/);
    }
  });

  it("raising w_d from 0 to 0.9 yields a strictly lower-HHI composition", { timeout: 120_000 }, async () => {
    const universe = await api.universe();
    const labels = universe.assets.map((a) => a.label);
    const w = universe.w_grid[Math.floor(universe.w_grid.length / 2)];
    const at0: PenaltyPoint = await api.solvePenalty(w, 0.0);
    const at09: PenaltyPoint = await api.solvePenalty(w, 0.9);
    expect(at09.hhi).toBeLessThan(at0.hhi);
    const bar0 = barFromPoint("wd0", "wd=0", at0, labels);
    const bar9 = barFromPoint("wd9", "wd=0.9", at09, labels);
    expect(barTotal(bar0)).toBeCloseTo(1, 6);
    expect(barTotal(bar9)).toBeCloseTo(1, 6);
    expect(bar9.hhi).toBeLessThan(bar0.hhi);
  });

  it("dragging into s2 produces a request with dp < 0 and the server honors it", { timeout: 120_000 }, async () => {
    const universe = await api.universe();
    const w = universe.w_grid[0];
    // up-right drag: profit must improve, risk may degrade
    const tol = toleranceFromOffset(0.6, 0.5, 0.1, 0.1);
    expect(tol.zone).toBe("s2");
    expect(tol.dp).toBeLessThan(0);
    expect(tol.dr).toBeGreaterThan(0);
    const body = { w, dp: tol.dp, dr: tol.dr };
    expect(body.dp).toBeLessThan(0);
    const response = await api.solveConstrained(body);
    expect(response.dp).toBeCloseTo(tol.dp, 12);
    expect(response.dr).toBeCloseTo(tol.dr, 12);
    expect(typeof response.feasible).toBe("boolean");
    if (response.feasible) {
      // a feasible s2 answer must actually improve on the baseline ROI
      expect(response.roi).toBeGreaterThanOrEqual(
        response.baseline.roi * (1 - tol.dp) - 1e-6,
      );
    }
  });
});
