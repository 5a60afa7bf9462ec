"""Exact portfolio performance metrics.

Everything here is a pure function of immutable inputs: per-scenario ROI,
expected ROI, CVaR-deviation risk (sort-based, no optimization), the HHI
concentration index, the two penalty/constraint scaling terms, and the
single-asset ROI upper bound.

Risk conventions
----------------
LOWER_TAIL (default): ``Risk = ROI - LowerTailMean``, the gap between the
expected ROI and the mean of the worst ``1 - beta`` probability mass of the
per-scenario ROI distribution.  Always >= 0.

AS_PRINTED: ``Risk = ROI - UpperTailMean`` (the auxiliary function applied
to ROI values directly rather than to losses).  Always <= 0; provided for
side-by-side comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ScaleError, ValidationError
from .scenario import ScenarioSet

BUDGET_RTOL = 1e-9


class TailConvention(Enum):
    LOWER_TAIL = "lower_tail"
    AS_PRINTED = "as_printed"


@dataclass(frozen=True)
class Portfolio:
    """Decision vector in production units, summing to the budget."""

    x: np.ndarray
    budget: float

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        if x.ndim != 1 or x.size == 0:
            raise ValidationError("portfolio vector must be a non-empty 1-d array")
        if not np.all(np.isfinite(x)):
            raise ValidationError("portfolio vector contains a non-finite entry")
        if np.any(x < 0):
            i = int(np.argmin(x))
            raise ValidationError(f"negative allocation x[{i}] = {x[i]}")
        if not self.budget > 0:
            raise ValidationError(f"budget must be > 0, got {self.budget}")
        total = float(x.sum())
        if abs(total - self.budget) > BUDGET_RTOL * self.budget:
            raise ValidationError(
                f"allocations sum to {total!r}, expected budget {self.budget!r}"
            )
        x.setflags(write=False)

    @property
    def n_assets(self) -> int:
        return self.x.size

    @property
    def shares(self) -> np.ndarray:
        return self.x / self.budget

    @classmethod
    def uniform(cls, n: int, budget: float) -> "Portfolio":
        return cls(np.full(n, budget / n), budget)

    @classmethod
    def concentrated(cls, n: int, index: int, budget: float) -> "Portfolio":
        x = np.zeros(n)
        x[index] = budget
        return cls(x, budget)


@dataclass(frozen=True)
class RiskSpec:
    """Confidence level, tail convention, and softplus smoothing scale."""

    beta: float = 0.9
    convention: TailConvention = TailConvention.LOWER_TAIL
    smoothing_tau: float = 1e-4

    def __post_init__(self) -> None:
        if not 0 < self.beta < 1:
            raise ValidationError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.smoothing_tau > 0:
            raise ValidationError(f"smoothing_tau must be > 0, got {self.smoothing_tau}")


@dataclass(frozen=True)
class MetricTriple:
    roi: float
    risk: float
    hhi: float


def scenario_roi(portfolio: Portfolio, scenarios: ScenarioSet) -> np.ndarray:
    """Per-scenario ROI: weighted return over weighted investment."""
    x = portfolio.x
    if x.size != scenarios.n_assets:
        raise ValidationError(
            f"portfolio has {x.size} assets, scenario set has {scenarios.n_assets}"
        )
    if not x.sum() > 0:
        raise ValidationError("undefined ratio: portfolio allocates zero production")
    return (scenarios.returns @ x) / (scenarios.investments @ x)


def expected_roi(portfolio: Portfolio, scenarios: ScenarioSet) -> float:
    return float(scenario_roi(portfolio, scenarios).mean())


def lower_tail_mean(values: np.ndarray, beta: float) -> float:
    """Mean of the worst ``1 - beta`` probability mass of equiprobable values.

    When ``(1 - beta) * m`` is fractional the boundary scenario enters with
    the leftover weight, so the tail mean is continuous in beta.
    """
    v = np.sort(np.asarray(values, dtype=float))
    m = v.size
    mass = (1.0 - beta) * m
    full = min(int(math.floor(mass)), m)
    frac = mass - full
    if full >= m:
        full, frac = m, 0.0
    total = float(v[:full].sum())
    weight = float(full)
    if frac > 0:
        total += frac * float(v[full])
        weight += frac
    if weight == 0.0:
        # tail mass underflowed to zero: the tail degenerates to the minimum
        return float(v[0])
    return total / weight


def upper_tail_mean(values: np.ndarray, beta: float) -> float:
    """Mean of the best ``1 - beta`` probability mass of equiprobable values."""
    return -lower_tail_mean(-np.asarray(values, dtype=float), beta)


def cvar_deviation_exact(
    portfolio: Portfolio, scenarios: ScenarioSet, risk: RiskSpec
) -> float:
    """Sort-based CVaR-deviation of the per-scenario ROI distribution."""
    f = scenario_roi(portfolio, scenarios)
    roi = float(f.mean())
    if risk.convention is TailConvention.LOWER_TAIL:
        return roi - lower_tail_mean(f, risk.beta)
    return roi - upper_tail_mean(f, risk.beta)


def f_beta(
    portfolio: Portfolio, alpha: float, scenarios: ScenarioSet, risk: RiskSpec
) -> float:
    """Exact auxiliary function of the scalar ``alpha``.

    Piecewise linear and convex in alpha; its minimum over alpha recovers
    the tail mean used by :func:`cvar_deviation_exact`.
    """
    f = scenario_roi(portfolio, scenarios)
    if risk.convention is TailConvention.LOWER_TAIL:
        excess = np.maximum(-f - alpha, 0.0)
    else:
        excess = np.maximum(f - alpha, 0.0)
    return float(alpha + excess.mean() / (1.0 - risk.beta))


def hhi(portfolio: Portfolio) -> float:
    """Sum of squared shares: 1/n at uniform allocation, 1 when concentrated."""
    p = portfolio.shares
    return float(p @ p)


def evaluate(portfolio: Portfolio, scenarios: ScenarioSet, risk: RiskSpec) -> MetricTriple:
    """Exact (ROI, Risk, HHI) triple for reporting."""
    f = scenario_roi(portfolio, scenarios)
    roi = float(f.mean())
    if risk.convention is TailConvention.LOWER_TAIL:
        risk_value = roi - lower_tail_mean(f, risk.beta)
    else:
        risk_value = roi - upper_tail_mean(f, risk.beta)
    return MetricTriple(roi=roi, risk=risk_value, hhi=hhi(portfolio))


def theta1(
    mean_abs_roi: float, mean_abs_risk: float, mean_abs_hhi: float, w: float
) -> float:
    """Penalty rescaling from the mean metric magnitudes of the baseline front.

    Note the weighting as printed pairs ``w`` with the ROI mean and ``1 - w``
    with the risk mean, the reverse of the pairing in the weighted objective
    itself; implemented verbatim.
    """
    if not 0 <= w <= 1:
        raise ValidationError(f"w must lie in [0, 1], got {w}")
    if not mean_abs_hhi > 0:
        raise ScaleError(f"mean |HHI| must be > 0, got {mean_abs_hhi}")
    return (w * mean_abs_roi + (1.0 - w) * mean_abs_risk) / mean_abs_hhi


def theta2(baseline: MetricTriple) -> float:
    """Constraint-mode rescaling: HHI over the ROI-minus-risk gap at the optimum."""
    gap = baseline.roi - baseline.risk
    if abs(gap) <= 1e-12 * abs(baseline.roi) or gap == 0.0:
        raise ScaleError(
            f"ROI - Risk gap {gap!r} too small to scale the auxiliary term"
        )
    return baseline.hhi / gap


def roi_upper_bound(scenarios: ScenarioSet) -> tuple[float, int]:
    """Best mean per-asset ROI ratio and its argmax (ties: lowest index).

    Expected ROI of any feasible portfolio never exceeds this bound; the
    bound is attained by concentrating the whole budget on the argmax asset.
    """
    means = scenarios.mean_ratios()
    j = int(np.argmax(means))
    return float(means[j]), j
