"""The three optimization schemes and the tolerance-pair heuristic.

* baseline: maximize the weighted ROI/risk trade-off;
* penalty: baseline plus a rescaled HHI term controlled by ``w_d``;
* constrained: minimize HHI around a baseline optimum, keeping ROI and
  risk within fractional tolerances (positive = allowed degradation,
  negative = required improvement).

Inside the solver the risk term is the smoothed auxiliary function of
``(x, alpha)``; every reported number is recomputed with the exact
evaluators from :mod:`divopt.metrics`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ScaleError, ValidationError
from .metrics import (
    MetricTriple,
    Portfolio,
    RiskSpec,
    TailConvention,
    evaluate,
    theta1,
    theta2,
)
from .scenario import ScenarioSet
from .solver import (
    ConstraintSet,
    Problem,
    SmoothConstraint,
    Solution,
    SolverConfig,
    minimize,
    sigmoid,
    softplus,
)

DEFAULT_W_GRID: tuple[float, ...] = (1.0, 0.8, 0.6, 0.4, 0.2)
DEFAULT_ZONE_COUNTS: tuple[int, int, int] = (4, 2, 2)

EXACT_FEASIBILITY_TOL = 1e-6
ACTIVE_SLACK_REL = 0.01

# perturbation solves start at the baseline optimum, so the smoothing
# continuation buys nothing there; a single stiff stage is equally accurate
# and several times faster
CONSTRAINED_SOLVER = SolverConfig(tau_schedule=(1e-5,))


@dataclass(frozen=True)
class BaselineRequest:
    """One weighted trade-off solve."""

    w: float
    constraints: ConstraintSet
    risk: RiskSpec = RiskSpec()
    solver: SolverConfig = SolverConfig()

    def __post_init__(self) -> None:
        if not 0 <= self.w <= 1:
            raise ValidationError(f"w must lie in [0, 1], got {self.w}")


@dataclass(frozen=True)
class PenaltyRequest:
    """Baseline request extended with the HHI penalty weight."""

    base: BaselineRequest
    w_d: float
    theta1: float | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.w_d <= 1:
            raise ValidationError(f"w_d must lie in [0, 1], got {self.w_d}")
        if self.theta1 is not None and not self.theta1 >= 0:
            raise ValidationError(f"theta1 must be >= 0, got {self.theta1}")


@dataclass(frozen=True)
class ConstrainedDivRequest:
    """Diversification solve around a baseline optimum.

    ``dp`` / ``dr`` are signed fractional tolerances: positive values allow
    the metric to degrade by that fraction, negative values require an
    improvement.
    """

    baseline: Portfolio
    baseline_metrics: MetricTriple
    dp: float
    dr: float
    constraints: ConstraintSet
    risk: RiskSpec = RiskSpec()
    solver: SolverConfig = CONSTRAINED_SOLVER
    w_r: float = 1e-3
    theta2: float | None = None

    def __post_init__(self) -> None:
        if not -1 < self.dp < 1:
            raise ValidationError(f"dp must lie in (-1, 1), got {self.dp}")
        if not -1 < self.dr < 1:
            raise ValidationError(f"dr must lie in (-1, 1), got {self.dr}")
        if not self.w_r > 0:
            raise ValidationError(f"w_r must be > 0, got {self.w_r}")


@dataclass(frozen=True)
class ToleranceRectangle:
    """Sampling geometry for tolerance pairs around a frontier point.

    Zones: s1 lets both metrics degrade, s2 requires a profit improvement
    while risk may degrade, s3 requires a risk improvement while profit may
    degrade.  The fourth quadrant (both must improve) is never sampled.
    """

    profit_halfwidth: float = 0.1
    risk_halfwidth: float = 0.1
    counts: tuple[int, int, int] = DEFAULT_ZONE_COUNTS
    seed: int = 0
    center: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not 0 < self.profit_halfwidth < 1:
            raise ValidationError(
                f"profit_halfwidth must lie in (0, 1), got {self.profit_halfwidth}"
            )
        if not 0 < self.risk_halfwidth < 1:
            raise ValidationError(
                f"risk_halfwidth must lie in (0, 1), got {self.risk_halfwidth}"
            )
        if len(self.counts) != 3 or any(c < 0 for c in self.counts):
            raise ValidationError(f"counts must be three non-negative ints, got {self.counts}")


@dataclass(frozen=True)
class TolerancePair:
    zone: str
    dp: float
    dr: float


@dataclass(frozen=True)
class StrategyResult:
    solution: Solution
    portfolio: Portfolio
    metrics: MetricTriple


@dataclass(frozen=True)
class ConstrainedResult(StrategyResult):
    feasible: bool
    constraint_report: dict
    source: str = "solver"


@dataclass(frozen=True)
class PerturbationRun:
    w: float
    pair: TolerancePair
    result: ConstrainedResult | None = None
    error: str | None = None


@dataclass(frozen=True)
class BaselineSweep:
    """Baselines over a w grid plus non-dominated metric means."""

    results: tuple[tuple[float, StrategyResult], ...]
    mean_abs_roi: float
    mean_abs_risk: float
    mean_abs_hhi: float

    def theta1_for(self, w: float) -> float:
        return theta1(self.mean_abs_roi, self.mean_abs_risk, self.mean_abs_hhi, w)

    def result_for(self, w: float) -> StrategyResult:
        for grid_w, result in self.results:
            if grid_w == w:
                return result
        raise KeyError(f"w={w} not in sweep grid")


def _f_range(scenarios: ScenarioSet) -> float:
    ratios = scenarios.ratios
    span = float(ratios.max() - ratios.min())
    return max(span, 1e-9)


def _require_lower_tail(risk: RiskSpec, what: str) -> None:
    if risk.convention is not TailConvention.LOWER_TAIL:
        raise ValidationError(
            f"{what} requires the lower-tail risk convention; the as-printed "
            "form is available from the exact evaluators only"
        )


def _alpha_init(scenarios: ScenarioSet, beta: float) -> Callable[[np.ndarray], float]:
    R, I = scenarios.returns, scenarios.investments

    def init(x: np.ndarray) -> float:
        f = (R @ x) / (I @ x)
        return float(np.quantile(-f, beta))

    return init


def _weighted_functions(
    w: float,
    wd_theta: float,
    scenarios: ScenarioSet,
    beta: float,
    budget: float,
    with_alpha: bool,
):
    R, I = scenarios.returns, scenarios.investments
    n = scenarios.n_assets
    inv_tail = 1.0 / (1.0 - beta)

    def value_grad(z: np.ndarray, tau: float) -> tuple[float, np.ndarray]:
        x = z[:n]
        sr = R @ x
        si = I @ x
        f = sr / si
        G = (R - f[:, None] * I) / si[:, None]
        roi = float(f.mean())
        roi_grad = G.mean(axis=0)

        value = (1.0 - 2.0 * w) * roi
        grad_x = (1.0 - 2.0 * w) * roi_grad
        grad = np.zeros(z.size)
        if with_alpha:
            alpha = z[n]
            t = -f - alpha
            value -= w * float(alpha + softplus(t, tau).mean() * inv_tail)
            sig = sigmoid(t / tau)
            grad_x = grad_x + w * inv_tail * (sig[:, None] * G).mean(axis=0)
            grad[n] = -w * (1.0 - float(sig.mean()) * inv_tail)
        if wd_theta != 0.0:
            value -= wd_theta * float((x / budget) @ (x / budget))
            grad_x = grad_x - wd_theta * 2.0 * x / (budget * budget)
        grad[:n] = grad_x
        return value, grad

    def value_only(z: np.ndarray, tau: float) -> float:
        x = z[:n]
        f = (R @ x) / (I @ x)
        value = (1.0 - 2.0 * w) * float(f.mean())
        if with_alpha:
            alpha = z[n]
            value -= w * float(alpha + softplus(-f - alpha, tau).mean() * inv_tail)
        if wd_theta != 0.0:
            value -= wd_theta * float((x / budget) @ (x / budget))
        return value

    return value_grad, value_only


def weighted_problem(
    w: float,
    constraints: ConstraintSet,
    scenarios: ScenarioSet,
    risk: RiskSpec,
    wd_theta: float = 0.0,
) -> Problem:
    """Maximization problem for the weighted trade-off (plus HHI penalty)."""
    _require_lower_tail(risk, "the weighted-objective solve")
    with_alpha = w > 0
    value_grad, value_only = _weighted_functions(
        w, wd_theta, scenarios, risk.beta, constraints.budget, with_alpha
    )
    return Problem(
        n_assets=scenarios.n_assets,
        objective=value_grad,
        objective_value=value_only,
        constraints=constraints,
        sense="max",
        with_alpha=with_alpha,
        alpha_init=_alpha_init(scenarios, risk.beta) if with_alpha else None,
        uses_smoothing=with_alpha,
        tau_scale=_f_range(scenarios),
        name=f"weighted(w={w!r}, wd_theta={wd_theta!r})",
    )


def baseline_problem(
    request: BaselineRequest, scenarios: ScenarioSet
) -> Problem:
    return weighted_problem(request.w, request.constraints, scenarios, request.risk)


def solve_baseline(
    request: BaselineRequest, scenarios: ScenarioSet, x0: np.ndarray | None = None
) -> StrategyResult:
    """Maximize ``(1-w) ROI - w Risk`` over the constraint set."""
    problem = baseline_problem(request, scenarios)
    solution = minimize(problem, x0=x0, config=request.solver)
    portfolio = Portfolio(solution.x, request.constraints.budget)
    return StrategyResult(
        solution=solution,
        portfolio=portfolio,
        metrics=evaluate(portfolio, scenarios, request.risk),
    )


def baseline_frontier_stats(
    template: BaselineRequest,
    scenarios: ScenarioSet,
    w_grid: Sequence[float] = DEFAULT_W_GRID,
) -> BaselineSweep:
    """Solve the baseline over a w grid and average the non-dominated metrics."""
    from .frontier import pareto_filter

    results = []
    for w in w_grid:
        request = replace(template, w=w)
        results.append((w, solve_baseline(request, scenarios)))
    kept = pareto_filter([result.metrics for _, result in results])
    if not kept:
        raise ScaleError("baseline sweep produced no non-dominated points")
    return BaselineSweep(
        results=tuple(results),
        mean_abs_roi=float(np.mean([abs(t.roi) for t in kept])),
        mean_abs_risk=float(np.mean([abs(t.risk) for t in kept])),
        mean_abs_hhi=float(np.mean([abs(t.hhi) for t in kept])),
    )


def penalty_problem(
    request: PenaltyRequest, scenarios: ScenarioSet, theta1_value: float
) -> Problem:
    base = request.base
    return weighted_problem(
        base.w,
        base.constraints,
        scenarios,
        base.risk,
        wd_theta=request.w_d * theta1_value,
    )


def solve_hhi_penalty(
    request: PenaltyRequest,
    scenarios: ScenarioSet,
    x0: np.ndarray | None = None,
    sweep: BaselineSweep | None = None,
) -> StrategyResult:
    """Maximize the weighted trade-off minus ``w_d * theta1 * HHI``.

    With ``theta1`` unset it is derived from a baseline frontier sweep
    (``w_d = 0`` skips the sweep since the penalty term vanishes).
    """
    base = request.base
    if request.theta1 is not None:
        theta1_value = request.theta1
    elif request.w_d == 0.0:
        theta1_value = 0.0
    else:
        if sweep is None:
            sweep = baseline_frontier_stats(base, scenarios)
        theta1_value = sweep.theta1_for(base.w)
    problem = penalty_problem(request, scenarios, theta1_value)
    solution = minimize(problem, x0=x0, config=base.solver)
    portfolio = Portfolio(solution.x, base.constraints.budget)
    return StrategyResult(
        solution=solution,
        portfolio=portfolio,
        metrics=evaluate(portfolio, scenarios, base.risk),
    )


def _constraint_bounds(request: ConstrainedDivRequest) -> tuple[float, float]:
    star = request.baseline_metrics
    roi_floor = star.roi * (1.0 - request.dp)
    if abs(star.risk) < 1e-9:
        # multiplicative bound collapses at zero baseline risk; fall back to
        # an additive tolerance scaled by the baseline ROI magnitude
        risk_cap = star.risk + request.dr * abs(star.roi)
    else:
        risk_cap = star.risk * (1.0 + request.dr)
    return roi_floor, risk_cap


def constrained_problem(
    request: ConstrainedDivRequest, scenarios: ScenarioSet
) -> Problem:
    """Joint (x, alpha) minimization of HHI within the tolerance bounds.

    The surrogate risk ``ROI + F(x, alpha)`` upper-bounds the exact risk for
    every alpha, so the risk constraint is conservative; the small weighted
    auxiliary term pulls alpha toward the argmin where the surrogate is
    tight.
    """
    R, I = scenarios.returns, scenarios.investments
    n = scenarios.n_assets
    beta = request.risk.beta
    inv_tail = 1.0 / (1.0 - beta)
    budget = request.constraints.budget
    as_printed = request.risk.convention is TailConvention.AS_PRINTED
    theta2_value = request.theta2 if request.theta2 is not None else theta2(request.baseline_metrics)
    pull = request.w_r * (theta2_value if as_printed else abs(theta2_value))
    roi_floor, risk_cap = _constraint_bounds(request)
    roi_scale = max(1.0, abs(roi_floor))
    risk_scale = max(1.0, abs(risk_cap))

    # objective and both constraints are evaluated back to back at the same
    # point inside the solver; a one-slot memo shares the ratio work
    _memo: dict = {"key": None}

    def core(z: np.ndarray):
        key = z.tobytes()
        if _memo["key"] == key:
            return _memo["value"]
        x = z[:n]
        alpha = z[n]
        sr = R @ x
        si = I @ x
        f = sr / si
        G = (R - f[:, None] * I) / si[:, None]
        _memo["key"] = key
        _memo["value"] = (x, alpha, f, G)
        return _memo["value"]

    def f_of(z: np.ndarray) -> np.ndarray:
        key = z.tobytes()
        if _memo["key"] == key:
            return _memo["value"][2]
        x = z[:n]
        return (R @ x) / (I @ x)

    def aux_value(f: np.ndarray, alpha: float, tau: float) -> float:
        t = (f - alpha) if as_printed else (-f - alpha)
        return float(alpha + softplus(t, tau).mean() * inv_tail)

    _aux_memo: dict = {"key": None}

    def aux_value_grad(z: np.ndarray, tau: float):
        key = (z.tobytes(), tau)
        if _aux_memo["key"] == key:
            return _aux_memo["value"]
        _, alpha, f, G = core(z)
        t = (f - alpha) if as_printed else (-f - alpha)
        value = float(alpha + softplus(t, tau).mean() * inv_tail)
        sig = sigmoid(t / tau)
        sign = 1.0 if as_printed else -1.0
        grad = np.zeros(z.size)
        grad[:n] = sign * inv_tail * (sig[:, None] * G).mean(axis=0)
        grad[n] = 1.0 - float(sig.mean()) * inv_tail
        _aux_memo["key"] = key
        _aux_memo["value"] = (value, grad, f, G)
        return _aux_memo["value"]

    aux_sign = -1.0 if as_printed else 1.0

    def objective(z: np.ndarray, tau: float) -> tuple[float, np.ndarray]:
        x = z[:n]
        aux, aux_grad, _, _ = aux_value_grad(z, tau)
        shares = x / budget
        value = float(shares @ shares) + aux_sign * pull * aux
        grad = aux_sign * pull * aux_grad
        grad[:n] += 2.0 * x / (budget * budget)
        return value, grad

    def objective_value(z: np.ndarray, tau: float) -> float:
        shares = z[:n] / budget
        return float(shares @ shares) + aux_sign * pull * aux_value(f_of(z), z[n], tau)

    def g_roi(z: np.ndarray, tau: float) -> tuple[float, np.ndarray]:
        _, _, f, G = core(z)
        roi = float(f.mean())
        grad = np.zeros(z.size)
        grad[:n] = -G.mean(axis=0) / roi_scale
        return (roi_floor - roi) / roi_scale, grad

    def g_roi_value(z: np.ndarray, tau: float) -> float:
        return (roi_floor - float(f_of(z).mean())) / roi_scale

    def g_risk(z: np.ndarray, tau: float) -> tuple[float, np.ndarray]:
        _, _, f, G = core(z)
        roi = float(f.mean())
        aux, aux_grad, _, _ = aux_value_grad(z, tau)
        grad = np.zeros(z.size)
        grad[:n] = G.mean(axis=0) / risk_scale
        value = (roi + aux_sign * aux - risk_cap) / risk_scale
        return value, grad + aux_sign * aux_grad / risk_scale

    def g_risk_value(z: np.ndarray, tau: float) -> float:
        f = f_of(z)
        roi = float(f.mean())
        return (roi + aux_sign * aux_value(f, z[n], tau) - risk_cap) / risk_scale

    alpha_bounds = None
    if as_printed:
        ratios = scenarios.ratios
        span = float(ratios.max() - ratios.min()) or 1.0
        alpha_bounds = (float(ratios.min()) - span, float(ratios.max()) + span)

    return Problem(
        n_assets=n,
        objective=objective,
        objective_value=objective_value,
        constraints=request.constraints,
        sense="min",
        with_alpha=True,
        alpha_bounds=alpha_bounds,
        alpha_init=_alpha_init(scenarios, beta),
        inequalities=(
            SmoothConstraint("roi_floor", g_roi, value=g_roi_value),
            SmoothConstraint("risk_cap", g_risk, value=g_risk_value),
        ),
        uses_smoothing=True,
        tau_scale=_f_range(scenarios),
        name=f"constrained(dp={request.dp!r}, dr={request.dr!r})",
    )


def _exact_bounds_check(
    metrics: MetricTriple, roi_floor: float, risk_cap: float
) -> tuple[bool, bool]:
    roi_ok = metrics.roi >= roi_floor - EXACT_FEASIBILITY_TOL
    risk_ok = metrics.risk <= risk_cap + EXACT_FEASIBILITY_TOL
    return bool(roi_ok), bool(risk_ok)


def _bounds_report(metrics: MetricTriple, roi_floor: float, risk_cap: float) -> dict:
    roi_ok, risk_ok = _exact_bounds_check(metrics, roi_floor, risk_cap)
    return {
        "roi": {
            "value": metrics.roi,
            "bound": roi_floor,
            "satisfied": roi_ok,
            "active": bool(
                abs(metrics.roi - roi_floor) <= ACTIVE_SLACK_REL * max(abs(roi_floor), 1e-9)
            ),
        },
        "risk": {
            "value": metrics.risk,
            "bound": risk_cap,
            "satisfied": risk_ok,
            "active": bool(
                abs(risk_cap - metrics.risk) <= ACTIVE_SLACK_REL * max(abs(risk_cap), 1e-9)
            ),
        },
    }


def solve_hhi_constrained(
    request: ConstrainedDivRequest, scenarios: ScenarioSet
) -> ConstrainedResult:
    """Minimize HHI inside the tolerance box around the baseline optimum.

    Runs a single solver start at the baseline portfolio so the nearest
    local optimum is found.  The feasibility flag requires both the solver
    residuals and an exact-metric re-verification of the two inequalities.
    When the unperturbed baseline itself passes the exact bounds and is no
    more concentrated than the solver iterate (which happens at zero
    tolerances, where the smoothed problem is infeasible by the smoothing
    gap), the baseline is returned unchanged.
    """
    problem = constrained_problem(request, scenarios)
    config = replace(request.solver, multistart=1)
    solution = minimize(problem, x0=request.baseline.x, config=config)
    portfolio = Portfolio(solution.x, request.constraints.budget)
    exact = evaluate(portfolio, scenarios, request.risk)
    roi_floor, risk_cap = _constraint_bounds(request)

    roi_ok, risk_ok = _exact_bounds_check(exact, roi_floor, risk_cap)
    solver_ok = solution.max_violation <= config.constraint_tol
    feasible = bool(solver_ok and roi_ok and risk_ok)
    source = "solver"

    star = request.baseline_metrics
    star_ok = all(_exact_bounds_check(star, roi_floor, risk_cap))
    if star_ok and (not feasible or star.hhi <= exact.hhi):
        portfolio = request.baseline
        exact = star
        feasible = True
        source = "baseline"

    return ConstrainedResult(
        solution=solution,
        portfolio=portfolio,
        metrics=exact,
        feasible=feasible,
        constraint_report=_bounds_report(exact, roi_floor, risk_cap),
        source=source,
    )


def generate_tolerance_pairs(rect: ToleranceRectangle) -> tuple[TolerancePair, ...]:
    """Sample the requested number of (zone, dp, dr) pairs; seeded."""
    rng = np.random.default_rng(rect.seed)
    a, b = rect.profit_halfwidth, rect.risk_halfwidth
    pairs: list[TolerancePair] = []
    for _ in range(rect.counts[0]):
        dp = a * (1.0 - rng.uniform())
        dr = b * (1.0 - rng.uniform())
        pairs.append(TolerancePair("s1", float(dp), float(dr)))
    for _ in range(rect.counts[1]):
        dp = -a * (1.0 - rng.uniform())
        dr = b * (1.0 - rng.uniform())
        pairs.append(TolerancePair("s2", float(dp), float(dr)))
    for _ in range(rect.counts[2]):
        dp = a * (1.0 - rng.uniform())
        dr = -b * (1.0 - rng.uniform())
        pairs.append(TolerancePair("s3", float(dp), float(dr)))
    return tuple(pairs)


def run_perturbation_suite(
    baselines: Sequence[tuple[float, StrategyResult]],
    rect: ToleranceRectangle,
    scenarios: ScenarioSet,
    constraints: ConstraintSet,
    risk: RiskSpec = RiskSpec(),
    solver: SolverConfig = CONSTRAINED_SOLVER,
    w_r: float = 1e-3,
    max_workers: int = 1,
) -> tuple[PerturbationRun, ...]:
    """One constrained solve per (w, tolerance pair).

    The same pair list is reused for every w.  Infeasible pairs are kept in
    the output with their flag; per-run errors are captured so a single bad
    pair never aborts the suite.
    """
    pairs = generate_tolerance_pairs(rect)
    tasks: list[tuple[int, float, StrategyResult, TolerancePair]] = []
    for w, baseline in baselines:
        for pair in pairs:
            tasks.append((len(tasks), w, baseline, pair))

    def run(task) -> PerturbationRun:
        _, w, baseline, pair = task
        try:
            request = ConstrainedDivRequest(
                baseline=baseline.portfolio,
                baseline_metrics=baseline.metrics,
                dp=pair.dp,
                dr=pair.dr,
                constraints=constraints,
                risk=risk,
                solver=solver,
                w_r=w_r,
            )
            return PerturbationRun(w=w, pair=pair, result=solve_hhi_constrained(request, scenarios))
        except Exception as exc:  # noqa: BLE001 - suite must survive any single run
            return PerturbationRun(w=w, pair=pair, error=f"{type(exc).__name__}: {exc}")

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            out = list(pool.map(run, tasks))
    else:
        out = [run(task) for task in tasks]
    return tuple(out)
