"""Frontier sweeps, Pareto filtering, and plot-ready normalization."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import DivoptError, ValidationError
from .scenario import ScenarioSet


@dataclass(frozen=True)
class FrontierPoint:
    """One solved instance with exact metrics and its strategy tag."""

    w: float | None
    x: np.ndarray
    budget: float
    roi: float
    risk: float
    hhi: float
    strategy: str = "baseline"
    feasible: bool = True
    converged: bool = True

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        x.setflags(write=False)

    @property
    def shares(self) -> np.ndarray:
        return self.x / self.budget


@dataclass(frozen=True)
class Bounds:
    roi_min: float
    roi_max: float
    risk_min: float
    risk_max: float


@dataclass(frozen=True)
class Frontier:
    points: tuple[FrontierPoint, ...]
    bounds: Bounds
    failures: tuple[tuple[float, str], ...] = ()


def point_from_result(w, result, strategy: str = "baseline", feasible: bool = True) -> FrontierPoint:
    """Build a FrontierPoint from a strategy result (exact metrics only)."""
    return FrontierPoint(
        w=w,
        x=result.portfolio.x,
        budget=result.portfolio.budget,
        roi=result.metrics.roi,
        risk=result.metrics.risk,
        hhi=result.metrics.hhi,
        strategy=strategy,
        feasible=feasible,
        converged=result.solution.converged,
    )


def compute_bounds(points: Sequence) -> Bounds:
    rois = [p.roi for p in points]
    risks = [p.risk for p in points]
    return Bounds(min(rois), max(rois), min(risks), max(risks))


def sweep_w(
    w_list: Sequence[float], template, scenarios: ScenarioSet
) -> Frontier:
    """One baseline point per w, ordered by w descending.

    Per-point solver failures are recorded on the frontier and the sweep
    continues.
    """
    from .strategies import solve_baseline

    w_values = list(w_list)
    if not w_values:
        raise ValidationError("w_list must be non-empty")
    for w in w_values:
        if not 0 <= w <= 1:
            raise ValidationError(f"w must lie in [0, 1], got {w}")

    points: list[FrontierPoint] = []
    failures: list[tuple[float, str]] = []
    for w in sorted(w_values, reverse=True):
        try:
            result = solve_baseline(replace(template, w=w), scenarios)
        except DivoptError as exc:
            failures.append((w, f"{type(exc).__name__}: {exc}"))
            continue
        points.append(point_from_result(w, result))
    if not points:
        raise ValidationError(
            "every point of the sweep failed: "
            + "; ".join(msg for _, msg in failures)
        )
    return Frontier(points=tuple(points), bounds=compute_bounds(points), failures=tuple(failures))


def pareto_filter(points: Sequence) -> list:
    """Non-dominated subset in the (roi up, risk down) sense, order preserved.

    A point is kept iff no other point has roi >= and risk <= with at least
    one strict inequality.
    """
    items = list(points)
    n = len(items)
    if n == 0:
        return []
    order = sorted(range(n), key=lambda i: (-items[i].roi, items[i].risk))
    keep = [False] * n
    best_risk = float("inf")
    i = 0
    while i < len(order):
        j = i
        roi = items[order[i]].roi
        while j < len(order) and items[order[j]].roi == roi:
            j += 1
        group = order[i:j]
        group_min = min(items[k].risk for k in group)
        if group_min < best_risk:
            for k in group:
                if items[k].risk == group_min:
                    keep[k] = True
            best_risk = group_min
        i = j
    return [items[k] for k in range(n) if keep[k]]


def _axis_map(lo: float, hi: float):
    if hi == lo:
        return lambda _v: 0.5
    span = hi - lo
    return lambda v: (v - lo) / span


def normalize(*point_sets: Sequence) -> list[list[tuple[float, float]]]:
    """Affine (roi, risk) -> [0, 1]^2 over the union of all displayed sets.

    Returns one coordinate list per input set, aligned with its points.  An
    axis with a single distinct value maps everything to 0.5.
    """
    union = [p for group in point_sets for p in group]
    if not union:
        return [[] for _ in point_sets]
    bounds = compute_bounds(union)
    roi_map = _axis_map(bounds.roi_min, bounds.roi_max)
    risk_map = _axis_map(bounds.risk_min, bounds.risk_max)
    return [
        [(roi_map(p.roi), risk_map(p.risk)) for p in group] for group in point_sets
    ]


def frontier_csv(points: Sequence[FrontierPoint]) -> str:
    """Deterministic CSV export with normalized coordinates."""
    coords = normalize(points)[0] if points else []
    lines = ["w,roi,risk,hhi,norm_roi,norm_risk,strategy,feasible"]
    for p, (u, v) in zip(points, coords):
        w_text = "" if p.w is None else repr(float(p.w))
        lines.append(
            ",".join(
                [
                    w_text,
                    repr(float(p.roi)),
                    repr(float(p.risk)),
                    repr(float(p.hhi)),
                    repr(float(u)),
                    repr(float(v)),
                    p.strategy,
                    "true" if p.feasible else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def frontier_json(points: Sequence[FrontierPoint], labels: Sequence[str] | None = None) -> dict:
    coords = normalize(points)[0] if points else []
    records = []
    for p, (u, v) in zip(points, coords):
        records.append(
            {
                "w": None if p.w is None else float(p.w),
                "x": [float(v_) for v_ in p.x],
                "budget": float(p.budget),
                "shares": [float(s) for s in p.shares],
                "roi": float(p.roi),
                "risk": float(p.risk),
                "hhi": float(p.hhi),
                "norm_roi": float(u),
                "norm_risk": float(v),
                "strategy": p.strategy,
                "feasible": bool(p.feasible),
                "converged": bool(p.converged),
            }
        )
    doc: dict = {"points": records}
    if labels is not None:
        doc["labels"] = list(labels)
    return doc


def frontier_json_text(points: Sequence[FrontierPoint], labels: Sequence[str] | None = None) -> str:
    return json.dumps(frontier_json(points, labels), indent=2, sort_keys=True) + "\n"
