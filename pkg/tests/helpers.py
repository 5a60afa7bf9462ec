"""Independent oracles: brute force, enumeration, and dense-grid checks.

These deliberately avoid the library's own evaluation paths wherever the
value under test could share a bug with them.
"""

from __future__ import annotations

import math

import numpy as np


def roi_recompute(x, returns, investments) -> float:
    """Spreadsheet-style expected ROI: plain Python loops and fsum."""
    m = len(returns)
    total = 0.0
    for s in range(m):
        num = math.fsum(float(x[i]) * float(returns[s][i]) for i in range(len(x)))
        den = math.fsum(float(x[i]) * float(investments[s][i]) for i in range(len(x)))
        total += num / den
    return total / m


def lower_tail_mean_bruteforce(values, beta) -> float:
    """Tail mean via explicit atom-by-atom accumulation."""
    v = sorted(float(t) for t in values)
    m = len(v)
    mass = (1.0 - beta) * m
    total, weight = 0.0, 0.0
    for t in v:
        take = min(1.0, mass - weight)
        if take <= 0:
            break
        total += take * t
        weight += take
    return total / weight


def risk_alpha_grid(f_values, beta, refine=2001) -> float:
    """CVaR-deviation via dense minimization of the auxiliary function.

    The grid contains every loss atom (the minimum of the piecewise-linear
    function sits on one) plus a uniform sweep and a refinement around the
    empirical tail quantile.
    """
    f = np.asarray(f_values, dtype=float)
    losses = -f
    lo, hi = losses.min(), losses.max()
    span = max(hi - lo, 1e-12)
    q = np.quantile(losses, beta)
    grid = np.concatenate(
        [
            losses,
            np.linspace(lo - span, hi + span, refine),
            q + span * np.linspace(-1e-3, 1e-3, 401),
        ]
    )
    vals = grid[:, None] + np.maximum(losses[None, :] - grid[:, None], 0.0).mean(
        axis=1, keepdims=True
    ) / (1.0 - beta)
    return float(f.mean() + vals.min())


def f_beta_breakpoints(f_values, beta):
    """All values of the auxiliary function at its breakpoints (losses)."""
    losses = -np.asarray(f_values, dtype=float)
    out = {}
    for alpha in losses:
        out[float(alpha)] = float(
            alpha + np.maximum(losses - alpha, 0.0).mean() / (1.0 - beta)
        )
    return out


def simplex_grid(n: int, steps: int) -> np.ndarray:
    """All share vectors with components k/steps summing to 1 (n <= 3)."""
    if n == 1:
        return np.array([[1.0]])
    if n == 2:
        a = np.arange(steps + 1)
        return np.stack([a, steps - a], axis=1) / steps
    if n == 3:
        rows = []
        for i in range(steps + 1):
            for j in range(steps + 1 - i):
                rows.append((i, j, steps - i - j))
        return np.array(rows, dtype=float) / steps
    raise ValueError("grid oracle supports n <= 3 only")


def exact_metrics_on_grid(shares, returns, investments, beta):
    """Vectorized exact (roi, risk, hhi) for every row of a share grid."""
    sr = shares @ returns.T
    si = shares @ investments.T
    f = sr / si
    roi = f.mean(axis=1)
    m = f.shape[1]
    mass = (1.0 - beta) * m
    full = int(math.floor(mass))
    frac = mass - full
    sorted_f = np.sort(f, axis=1)
    tail = sorted_f[:, :full].sum(axis=1)
    weight = float(full)
    if full < m and frac > 0:
        tail = tail + frac * sorted_f[:, full]
        weight += frac
    risk = roi - tail / weight
    hhi = (shares**2).sum(axis=1)
    return roi, risk, hhi


def pareto_bruteforce(points):
    """O(n^2) pairwise dominance filter."""
    kept = []
    for p in points:
        dominated = False
        for q in points:
            if q is p:
                continue
            if (
                q.roi >= p.roi
                and q.risk <= p.risk
                and (q.roi > p.roi or q.risk < p.risk)
            ):
                dominated = True
                break
        if not dominated:
            kept.append(p)
    return kept


def projection_lambda_scan(v, budget, caps, samples=200001):
    """Dense scan over the shift multiplier; returns the best feasible point."""
    v = np.asarray(v, dtype=float)
    caps = np.asarray(caps, dtype=float)
    lo = float((v - caps).min()) - 1.0
    hi = float(v.max()) + 1.0
    best, best_gap = None, math.inf
    for lam in np.linspace(lo, hi, samples):
        x = np.clip(v - lam, 0.0, caps)
        gap = abs(x.sum() - budget)
        if gap < best_gap:
            best, best_gap = x, gap
    return best
