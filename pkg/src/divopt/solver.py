"""Constrained nonlinear-program engine on the capped budget simplex.

The always-enforced constraints (allocations in [0, cap], summing to the
budget) are handled by exact Euclidean projection; every other inequality
(country caps, CAPEX, smooth nonlinear constraints) goes through an
augmented-Lagrangian outer loop around projected gradient descent with
Armijo backtracking.  Non-smooth tail terms are smoothed with softplus on
a decreasing scale schedule; the solve is restarted from several feasible
points because the objectives are non-convex.

Internally the engine works in share space (x / budget) so all variables
have comparable magnitude; inputs and outputs are in production units.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InfeasibleError, ValidationError

ValueGrad = tuple[float, np.ndarray]
ObjectiveFn = Callable[[np.ndarray, float], ValueGrad]
ValueFn = Callable[[np.ndarray, float], float]


def softplus(t: np.ndarray, tau: float) -> np.ndarray:
    """Smooth ReLU: ``tau * log(1 + exp(t / tau))``, overflow-safe."""
    u = t / tau
    return tau * np.log1p(np.exp(-np.abs(u))) + np.maximum(t, 0.0)


def sigmoid(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t, dtype=float)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


@dataclass(frozen=True)
class GroupCap:
    """Upper bound on total production over a group of asset indices."""

    indices: tuple[int, ...]
    cap: float
    name: str = ""

    def __post_init__(self) -> None:
        if not self.indices:
            raise ValidationError("group cap needs at least one asset index")
        if self.cap < 0:
            raise ValidationError(f"group cap must be >= 0, got {self.cap}")


@dataclass(frozen=True)
class CapexBudget:
    """Linear spending cap: unit_costs @ x <= limit."""

    unit_costs: np.ndarray
    limit: float

    def __post_init__(self) -> None:
        costs = np.asarray(self.unit_costs, dtype=float)
        object.__setattr__(self, "unit_costs", costs)
        if np.any(costs < 0):
            raise ValidationError("capex unit costs must be >= 0")
        if self.limit <= 0:
            raise ValidationError(f"capex limit must be > 0, got {self.limit}")
        costs.setflags(write=False)


@dataclass(frozen=True)
class LinearConstraint:
    """Generic row ``coefficients @ x <= bound``."""

    coefficients: np.ndarray
    bound: float
    name: str = "linear"

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", coeffs)
        coeffs.setflags(write=False)


@dataclass(frozen=True)
class ConstraintSet:
    """Budget, per-asset caps, and the linear side constraints."""

    budget: float
    asset_caps: np.ndarray | None = None
    country_caps: tuple[GroupCap, ...] = ()
    capex: CapexBudget | None = None
    extra: tuple[LinearConstraint, ...] = ()

    def __post_init__(self) -> None:
        if not self.budget > 0:
            raise ValidationError(f"budget must be > 0, got {self.budget}")
        if self.asset_caps is not None:
            caps = np.asarray(self.asset_caps, dtype=float)
            object.__setattr__(self, "asset_caps", caps)
            if np.any(caps < 0):
                raise ValidationError("asset caps must be >= 0")
            caps.setflags(write=False)

    @classmethod
    def unconstrained(cls, budget: float) -> "ConstraintSet":
        return cls(budget=budget)

    def effective_caps(self, n: int) -> np.ndarray:
        """Per-asset caps clamped to the budget (anything larger is inactive)."""
        if self.asset_caps is None:
            return np.full(n, self.budget)
        if self.asset_caps.size != n:
            raise ValidationError(
                f"asset_caps has {self.asset_caps.size} entries, expected {n}"
            )
        return np.minimum(self.asset_caps, self.budget)

    def linear_rows(self, n: int) -> list[tuple[np.ndarray, float, str]]:
        """All side constraints as (coefficients, bound, name) rows over x."""
        rows: list[tuple[np.ndarray, float, str]] = []
        for group in self.country_caps:
            coeffs = np.zeros(n)
            for i in group.indices:
                if not 0 <= i < n:
                    raise ValidationError(f"group cap index {i} out of range")
                coeffs[i] = 1.0
            rows.append((coeffs, group.cap, group.name or f"group{group.indices}"))
        if self.capex is not None:
            if self.capex.unit_costs.size != n:
                raise ValidationError(
                    f"capex cost vector has {self.capex.unit_costs.size} entries, expected {n}"
                )
            rows.append((self.capex.unit_costs.copy(), self.capex.limit, "capex"))
        for row in self.extra:
            if row.coefficients.size != n:
                raise ValidationError(
                    f"constraint {row.name!r} has {row.coefficients.size} coefficients, expected {n}"
                )
            rows.append((row.coefficients.copy(), row.bound, row.name))
        return rows

    def validate(self, n: int) -> None:
        """Cheap feasibility pre-checks on the linear structure."""
        caps = self.effective_caps(n)
        if caps.sum() < self.budget * (1 - 1e-12):
            raise InfeasibleError(
                f"asset caps sum to {caps.sum()!r}, below budget {self.budget!r}"
            )
        grouped = np.zeros(n, dtype=bool)
        reachable = 0.0
        for group in self.country_caps:
            idx = list(group.indices)
            reachable += min(group.cap, float(caps[idx].sum()))
            grouped[idx] = True
        reachable += float(caps[~grouped].sum())
        if self.country_caps and reachable < self.budget * (1 - 1e-12):
            raise InfeasibleError(
                f"country caps admit at most {reachable!r} production, "
                f"below budget {self.budget!r}"
            )
        if self.capex is not None:
            cheapest = _min_linear_on_capped_simplex(
                self.capex.unit_costs, self.budget, caps
            )
            if cheapest > self.capex.limit * (1 + 1e-12):
                raise InfeasibleError(
                    f"capex limit {self.capex.limit!r} below minimum achievable "
                    f"spend {cheapest!r}"
                )


def _min_linear_on_capped_simplex(costs: np.ndarray, budget: float, caps: np.ndarray) -> float:
    order = np.argsort(costs, kind="stable")
    remaining = budget
    total = 0.0
    for i in order:
        take = min(caps[i], remaining)
        total += take * costs[i]
        remaining -= take
        if remaining <= 0:
            break
    return total


def project_capped_simplex(
    v: np.ndarray, budget: float, caps: np.ndarray | None = None
) -> np.ndarray:
    """Euclidean projection onto ``{0 <= x <= caps, sum(x) = budget}``.

    Solves for the KKT shift multiplier exactly on the sorted breakpoint
    grid, so bounds hold exactly (clamped) and the sum matches the budget
    to machine precision.
    """
    v = np.asarray(v, dtype=float)
    n = v.size
    if caps is None:
        caps_arr = np.full(n, budget)
    else:
        caps_arr = np.minimum(np.asarray(caps, dtype=float), budget)
        if np.any(caps_arr < 0):
            raise ValidationError("caps must be >= 0")
    if caps_arr.sum() < budget * (1 - 1e-12):
        raise InfeasibleError(
            f"caps sum to {caps_arr.sum()!r}, below budget {budget!r}"
        )
    scaled = _project_shares(v / budget, caps_arr / budget)
    # rescaling can overshoot a cap by one ulp; the bounds are exact by contract
    return np.minimum(np.maximum(scaled * budget, 0.0), caps_arr)


def _project_shares(v: np.ndarray, caps: np.ndarray) -> np.ndarray:
    # sum(clip(v - lam, 0, caps)) is piecewise linear and non-increasing in
    # lam with breakpoints at v_i and v_i - caps_i; locate the segment where
    # it crosses 1 and solve the linear equation exactly
    points = np.sort(np.concatenate([v, v - caps]))
    sums = np.minimum(np.maximum(v[None, :] - points[:, None], 0.0), caps).sum(axis=1)
    k = int(np.searchsorted(-sums, -1.0, side="left"))
    if k == 0:
        lam = float(points[0])
    else:
        lo = float(points[k - 1])
        hi = float(points[min(k, points.size - 1)])
        mid = 0.5 * (lo + hi)
        free = int(np.count_nonzero(((v - caps) < mid) & (mid < v)))
        lam = lo + (float(sums[k - 1]) - 1.0) / max(free, 1)
    out = np.minimum(np.maximum(v - lam, 0.0), caps)
    total = float(out.sum())
    if abs(total - 1.0) > 1e-13:
        # one Newton polish absorbs float drift from coinciding breakpoints
        free = int(np.count_nonzero((out > 0.0) & (out < caps)))
        lam += (total - 1.0) / max(free, 1)
        out = np.minimum(np.maximum(v - lam, 0.0), caps)
    return out


@dataclass(frozen=True)
class SmoothConstraint:
    """Inequality ``fn(z, tau) <= 0`` with analytic gradient over z.

    ``value`` is an optional cheaper value-only evaluation used inside the
    line search.
    """

    name: str
    fn: ObjectiveFn
    value: ValueFn | None = None


@dataclass(frozen=True)
class Problem:
    """Differentiable objective plus its constraint set.

    ``objective(z, tau) -> (value, gradient)`` where z is the physical
    decision vector, optionally extended by the auxiliary scalar alpha.
    ``tau`` is the softplus scale currently in force (ignored by smooth
    objectives).  ``objective_value`` is an optional value-only fast path.
    """

    n_assets: int
    objective: ObjectiveFn
    constraints: ConstraintSet
    sense: str = "max"
    objective_value: ValueFn | None = None
    with_alpha: bool = False
    alpha_bounds: tuple[float, float] | None = None
    alpha_init: Callable[[np.ndarray], float] | None = None
    inequalities: tuple[SmoothConstraint, ...] = ()
    uses_smoothing: bool = True
    tau_scale: float = 1.0
    name: str = ""

    def __post_init__(self) -> None:
        if self.sense not in ("max", "min"):
            raise ValidationError(f"sense must be 'max' or 'min', got {self.sense!r}")
        if not self.tau_scale > 0:
            raise ValidationError(f"tau_scale must be > 0, got {self.tau_scale}")

    @property
    def dim(self) -> int:
        return self.n_assets + (1 if self.with_alpha else 0)


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances, step rule, penalty schedule, and multistart policy."""

    max_outer: int = 20
    max_inner: int = 600
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    max_backtracks: int = 60
    step_grow: float = 2.0
    initial_step: float = 1.0
    grad_tol: float = 1e-9
    constraint_tol: float = 1e-6
    projection_tol: float = 1e-10
    penalty_init: float = 10.0
    penalty_growth: float = 10.0
    multistart: int = 8
    seed: int = 0
    tau_schedule: tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5)
    time_limit: float | None = None
    trace_path: str | None = None
    trace_hook: Callable[[dict], None] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.multistart < 1:
            raise ValidationError(f"multistart must be >= 1, got {self.multistart}")
        if not self.tau_schedule:
            raise ValidationError("tau_schedule must be non-empty")
        for name in (
            "max_outer",
            "max_inner",
            "armijo_c",
            "backtrack_factor",
            "max_backtracks",
            "step_grow",
            "initial_step",
            "grad_tol",
            "constraint_tol",
            "projection_tol",
            "penalty_init",
            "penalty_growth",
        ):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be > 0, got {getattr(self, name)}")

    def to_dict(self) -> dict:
        return {
            "max_outer": self.max_outer,
            "max_inner": self.max_inner,
            "armijo_c": self.armijo_c,
            "backtrack_factor": self.backtrack_factor,
            "max_backtracks": self.max_backtracks,
            "step_grow": self.step_grow,
            "initial_step": self.initial_step,
            "grad_tol": self.grad_tol,
            "constraint_tol": self.constraint_tol,
            "projection_tol": self.projection_tol,
            "penalty_init": self.penalty_init,
            "penalty_growth": self.penalty_growth,
            "multistart": self.multistart,
            "seed": self.seed,
            "tau_schedule": list(self.tau_schedule),
            "time_limit": self.time_limit,
        }


@dataclass(frozen=True)
class Solution:
    """Best iterate of a solve, in problem sense, with residual report."""

    x: np.ndarray
    alpha: float | None
    objective: float
    residuals: dict[str, float]
    max_violation: float
    converged: bool
    iterations: int
    outer_iterations: int
    start_index: int
    pg_norm: float


class _Trace:
    def __init__(self, config: SolverConfig):
        self._hook = config.trace_hook
        self._path = config.trace_path
        self._handle = None
        if self._path:
            self._handle = open(self._path, "a")

    def emit(self, record: dict) -> None:
        if self._hook is not None:
            self._hook(record)
        if self._handle is not None:
            self._handle.write(json.dumps(record, sort_keys=True) + "\n")

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()

    @property
    def active(self) -> bool:
        return self._hook is not None or self._handle is not None


def minimize(
    problem: Problem,
    x0: np.ndarray | None = None,
    config: SolverConfig = SolverConfig(),
) -> Solution:
    """Solve the problem; with multistart > 1 the best local optimum wins.

    An explicit ``x0`` is always the first start (projected onto the capped
    simplex if needed); default starts are the uniform portfolio, every
    single-asset concentration, and Dirichlet draws up to the multistart
    count.  Ties between equal-objective optima break toward the lower
    concentration, then the lexicographically smaller vector.
    """
    n = problem.n_assets
    constraints = problem.constraints
    constraints.validate(n)
    budget = constraints.budget
    caps_s = constraints.effective_caps(n) / budget

    starts = _build_starts(problem, x0, caps_s, config)
    trace = _Trace(config)
    deadline = None
    if config.time_limit is not None:
        deadline = time.monotonic() + config.time_limit

    best: Solution | None = None
    try:
        for index, s0 in enumerate(starts):
            candidate = _solve_single(problem, s0, index, caps_s, config, trace, deadline)
            best = _pick(best, candidate, problem.sense, config)
            if deadline is not None and time.monotonic() > deadline:
                break
    finally:
        trace.close()
    assert best is not None
    return best


def _build_starts(
    problem: Problem,
    x0: np.ndarray | None,
    caps_s: np.ndarray,
    config: SolverConfig,
) -> list[np.ndarray]:
    n = problem.n_assets
    budget = problem.constraints.budget
    starts: list[np.ndarray] = []
    if x0 is not None:
        x0 = np.asarray(x0, dtype=float)
        if x0.size != n:
            raise ValidationError(f"x0 has {x0.size} entries, expected {n}")
        starts.append(_project_shares(x0 / budget, caps_s))
    count = max(config.multistart, len(starts))
    if len(starts) < count:
        starts.append(_project_shares(np.full(n, 1.0 / n), caps_s))
    vertex = 0
    while len(starts) < count and vertex < n:
        starts.append(_project_shares(np.eye(n)[vertex], caps_s))
        vertex += 1
    if len(starts) < count:
        rng = np.random.default_rng(config.seed)
        draws = rng.dirichlet(np.ones(n), size=count - len(starts))
        for row in draws:
            starts.append(_project_shares(row, caps_s))
    return starts[:count]


def _pick(
    best: Solution | None, candidate: Solution, sense: str, config: SolverConfig
) -> Solution:
    if best is None:
        return candidate
    tol = config.constraint_tol
    best_ok = best.max_violation <= tol
    cand_ok = candidate.max_violation <= tol
    if best_ok != cand_ok:
        return candidate if cand_ok else best
    if not best_ok:
        return candidate if candidate.max_violation < best.max_violation else best
    sign = -1.0 if sense == "max" else 1.0
    a, b = sign * candidate.objective, sign * best.objective
    obj_tol = 1e-9 * (1.0 + abs(b))
    if a < b - obj_tol:
        return candidate
    if a > b + obj_tol:
        return best
    budget = candidate.x.sum()
    cand_hhi = float(((candidate.x / budget) ** 2).sum()) if budget > 0 else math.inf
    budget_b = best.x.sum()
    best_hhi = float(((best.x / budget_b) ** 2).sum()) if budget_b > 0 else math.inf
    if cand_hhi < best_hhi - 1e-12:
        return candidate
    if cand_hhi > best_hhi + 1e-12:
        return best
    return candidate if tuple(candidate.x) < tuple(best.x) else best


class _MeritBuilder:
    """Augmented-Lagrangian merit for a fixed (mu, rho, tau) snapshot."""

    def __init__(self, problem: Problem, budget: float):
        self.problem = problem
        self.budget = budget
        self.n = problem.n_assets
        sign = -1.0 if problem.sense == "max" else 1.0
        self.sign = sign
        self._rows: list[tuple[str, ObjectiveFn, ValueFn]] = []
        for coeffs, bound, name in problem.constraints.linear_rows(self.n):
            scale = max(1.0, abs(bound))
            coeffs_s = coeffs * budget / scale
            rhs = bound / scale

            def lin_vg(z_s, tau, coeffs_s=coeffs_s, rhs=rhs):
                grad = np.zeros(z_s.size)
                grad[: self.n] = coeffs_s
                return float(coeffs_s @ z_s[: self.n] - rhs), grad

            def lin_v(z_s, tau, coeffs_s=coeffs_s, rhs=rhs):
                return float(coeffs_s @ z_s[: self.n] - rhs)

            self._rows.append((name, lin_vg, lin_v))
        for smooth in problem.inequalities:
            def sm_vg(z_s, tau, fn=smooth.fn):
                value, grad = fn(self._phys(z_s), tau)
                grad = grad.copy()
                grad[: self.n] *= budget
                return value, grad

            def sm_v(z_s, tau, fn=smooth.fn, value_fn=smooth.value):
                if value_fn is not None:
                    return value_fn(self._phys(z_s), tau)
                return fn(self._phys(z_s), tau)[0]

            self._rows.append((smooth.name, sm_vg, sm_v))

    def _phys(self, z_s: np.ndarray) -> np.ndarray:
        z = z_s.copy()
        z[: self.n] = z_s[: self.n] * self.budget
        return z

    @property
    def names(self) -> list[str]:
        return [name for name, _, _ in self._rows]

    @property
    def n_constraints(self) -> int:
        return len(self._rows)

    def objective_vg(self, z_s: np.ndarray, tau: float) -> ValueGrad:
        value, grad = self.problem.objective(self._phys(z_s), tau)
        grad = grad.copy()
        grad[: self.n] *= self.budget
        return self.sign * value, self.sign * grad

    def objective_v(self, z_s: np.ndarray, tau: float) -> float:
        if self.problem.objective_value is not None:
            return self.sign * self.problem.objective_value(self._phys(z_s), tau)
        return self.sign * self.problem.objective(self._phys(z_s), tau)[0]

    def constraint_values(self, z_s: np.ndarray, tau: float) -> np.ndarray:
        return np.array([v(z_s, tau) for _, _, v in self._rows])

    def merit_pair(self, mu: np.ndarray, rho: float, tau: float):
        def value_grad(z_s: np.ndarray) -> ValueGrad:
            value, grad = self.objective_vg(z_s, tau)
            for k, (_, vg, _) in enumerate(self._rows):
                g, g_grad = vg(z_s, tau)
                lifted = mu[k] + rho * g
                if lifted > 0:
                    value += (lifted * lifted - mu[k] * mu[k]) / (2.0 * rho)
                    grad = grad + lifted * g_grad
                else:
                    value -= mu[k] * mu[k] / (2.0 * rho)
            return value, grad

        def value_only(z_s: np.ndarray) -> float:
            value = self.objective_v(z_s, tau)
            for k, (_, _, v) in enumerate(self._rows):
                g = v(z_s, tau)
                lifted = mu[k] + rho * g
                if lifted > 0:
                    value += (lifted * lifted - mu[k] * mu[k]) / (2.0 * rho)
                else:
                    value -= mu[k] * mu[k] / (2.0 * rho)
            return value

        return value_grad, value_only


def _solve_single(
    problem: Problem,
    s0: np.ndarray,
    start_index: int,
    caps_s: np.ndarray,
    config: SolverConfig,
    trace: _Trace,
    deadline: float | None,
) -> Solution:
    n = problem.n_assets
    budget = problem.constraints.budget
    alpha_lo, alpha_hi = problem.alpha_bounds or (-math.inf, math.inf)
    builder = _MeritBuilder(problem, budget)
    n_cons = builder.n_constraints

    def project(z_s: np.ndarray) -> np.ndarray:
        out = z_s.copy()
        out[:n] = _project_shares(z_s[:n], caps_s)
        if problem.with_alpha:
            out[n] = min(max(out[n], alpha_lo), alpha_hi)
        return out

    z = np.asarray(s0, dtype=float)
    if problem.with_alpha:
        alpha0 = 0.0
        if problem.alpha_init is not None:
            alpha0 = float(problem.alpha_init(z * budget))
        z = np.append(z, min(max(alpha0, alpha_lo), alpha_hi))
    z = project(z)

    taus = config.tau_schedule if problem.uses_smoothing else (config.tau_schedule[-1],)
    total_inner = 0
    total_outer = 0
    pg_norm = math.inf
    stalled = False
    viol = 0.0
    g_values = np.zeros(n_cons)

    for stage, tau_rel in enumerate(taus):
        tau = tau_rel * problem.tau_scale
        # each smoothing stage is a fresh subproblem: restart the multiplier
        # estimates so an infeasible coarse stage cannot poison conditioning
        mu = np.zeros(n_cons)
        rho = config.penalty_init
        prev_viol = math.inf
        best_viol = math.inf
        stagnant = 0
        for outer in range(config.max_outer):
            merit_vg, merit_v = builder.merit_pair(mu, rho, tau)
            z, inner_iters, inner_done, stalled, pg_norm = _pgd(
                merit_vg, merit_v, project, z, config, trace, deadline,
                label={"start": start_index, "stage": stage, "outer": outer},
            )
            total_inner += inner_iters
            total_outer += 1

            if n_cons:
                g_values = builder.constraint_values(z, tau)
                viol = float(np.maximum(g_values, 0.0).max())
            if trace.active:
                trace.emit(
                    {
                        "start": start_index,
                        "stage": stage,
                        "outer": outer,
                        "violation": viol,
                        "pg_norm": pg_norm,
                        "penalty": rho,
                    }
                )
            if n_cons == 0:
                break
            new_mu = np.maximum(0.0, mu + rho * g_values)
            mu_step = float(np.abs(new_mu - mu).max()) if n_cons else 0.0
            mu = new_mu
            if viol <= config.constraint_tol and (
                inner_done or mu_step <= 1e-10 * (1.0 + float(np.abs(mu).max()))
            ):
                break
            # least-violation stagnation: the smoothed feasible set may be
            # empty (for instance at zero tolerances); stop grinding once the
            # violation no longer improves
            if viol > 0.9 * best_viol:
                stagnant += 1
                if stagnant >= 3:
                    break
            else:
                stagnant = 0
            best_viol = min(best_viol, viol)
            if viol > 0.5 * prev_viol:
                rho = min(rho * config.penalty_growth, 1e8)
            prev_viol = viol
            if deadline is not None and time.monotonic() > deadline:
                break
        if deadline is not None and time.monotonic() > deadline:
            break

    tau_final = taus[-1] * problem.tau_scale
    x = z[:n] * budget
    alpha = float(z[n]) if problem.with_alpha else None
    value, _ = problem.objective(
        np.append(x, alpha) if problem.with_alpha else x, tau_final
    )
    residuals = {
        name: float(g) for name, g in zip(builder.names, g_values)
    } if n_cons else {}
    inner_ok = pg_norm <= 10 * config.grad_tol or stalled
    converged = viol <= config.constraint_tol and inner_ok
    return Solution(
        x=x,
        alpha=alpha,
        objective=float(value),
        residuals=residuals,
        max_violation=viol,
        converged=bool(converged),
        iterations=total_inner,
        outer_iterations=total_outer,
        start_index=start_index,
        pg_norm=float(pg_norm),
    )


def _pgd(
    merit_vg: Callable[[np.ndarray], ValueGrad],
    merit_v: Callable[[np.ndarray], float],
    project: Callable[[np.ndarray], np.ndarray],
    z0: np.ndarray,
    config: SolverConfig,
    trace: _Trace,
    deadline: float | None,
    label: dict,
) -> tuple[np.ndarray, int, bool, bool, float]:
    """Projected gradient descent: Barzilai-Borwein steps, Armijo backtracking.

    Returns (z, iterations, converged, stalled, pg_norm): ``converged`` means
    the unit-step projected-gradient norm met the tolerance, ``stalled``
    that no further descent was representable (line-search failure at float
    precision), which the caller also treats as done.
    """
    z = project(z0)
    value, grad = merit_vg(z)
    step = config.initial_step
    converged = False
    stalled = False
    pg_norm = math.inf
    iterations = 0
    window_value = value
    window_at = 0

    for it in range(config.max_inner):
        iterations = it + 1
        probe = project(z - grad) - z
        pg_norm = float(np.linalg.norm(probe))
        if pg_norm <= config.grad_tol:
            converged = True
            break
        accepted = False
        first_try = True
        t = step
        z_new = z
        value_new = value
        for _ in range(config.max_backtracks):
            z_new = project(z - t * grad)
            d = z_new - z
            descent = float(grad @ d)
            if descent > -1e-18:
                break
            value_new = merit_v(z_new)
            if value_new <= value + config.armijo_c * descent:
                accepted = True
                break
            t *= config.backtrack_factor
            first_try = False
        if not accepted:
            stalled = True
            break
        if trace.active:
            trace.emit({**label, "inner": it, "merit": float(value_new)})
        _, grad_new = merit_vg(z_new)
        # spectral (Barzilai-Borwein) step proposal for the next iteration
        s = z_new - z
        y = grad_new - grad
        sy = float(s @ y)
        if sy > 1e-30:
            step = min(max(float(s @ s) / sy, 1e-12), 1e8)
        else:
            step = min(t * config.step_grow, 1e8) if first_try else t
        z, value, grad = z_new, value_new, grad_new
        # crawl guard: give up once a 25-iteration window improves the merit
        # by less than anything our tolerances could resolve
        if it - window_at >= 25:
            if window_value - value <= 1e-10 * (1.0 + abs(value)):
                stalled = True
                break
            window_value = value
            window_at = it
        if deadline is not None and time.monotonic() > deadline:
            break
    return z, iterations, converged or stalled, stalled, pg_norm


def check_gradient(
    problem: Problem,
    z: np.ndarray,
    h: float = 1e-6,
    tau: float | None = None,
) -> float:
    """Max relative mismatch between analytic and central-difference gradients.

    ``z`` must be strictly interior (all allocations positive); steps are
    scaled per coordinate by ``max(1, |z_i|)``.
    """
    z = np.asarray(z, dtype=float)
    if tau is None:
        tau = 1e-2 * problem.tau_scale
    _, grad = problem.objective(z, tau)
    worst = 0.0
    for i in range(z.size):
        hi = h * max(1.0, abs(z[i]))
        zp = z.copy()
        zp[i] += hi
        zm = z.copy()
        zm[i] -= hi
        fp, _ = problem.objective(zp, tau)
        fm, _ = problem.objective(zm, tau)
        fd = (fp - fm) / (2.0 * hi)
        err = abs(grad[i] - fd) / (abs(grad[i]) + 1e-12)
        worst = max(worst, err)
    return worst
