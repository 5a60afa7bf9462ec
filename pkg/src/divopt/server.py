"""HTTP/JSON facade over the solve strategies for the interactive explorer.

The server holds one immutable scenario set.  Responses are pure functions
of (dataset, request body, server seed); baseline solves are cached per
(w, beta) so penalty and constrained requests reuse them for the scaling
terms.  Solves run synchronously under a per-request time budget; an
over-budget solve returns its best iterate with ``converged = false``
rather than an error.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .errors import DivoptError, ScaleError
from .metrics import RiskSpec
from .scenario import ScenarioSet
from .solver import ConstraintSet, SolverConfig
from .strategies import (
    DEFAULT_W_GRID,
    BaselineRequest,
    BaselineSweep,
    ConstrainedDivRequest,
    CONSTRAINED_SOLVER,
    PenaltyRequest,
    StrategyResult,
    baseline_frontier_stats,
    solve_baseline,
    solve_hhi_constrained,
    solve_hhi_penalty,
)


class BaselineBody(BaseModel):
    w: float = Field(ge=0.0, le=1.0)
    beta: float | None = Field(default=None, gt=0.0, lt=1.0)


class PenaltyBody(BaselineBody):
    w_d: float = Field(ge=0.0, le=1.0)


class ConstrainedBody(BaselineBody):
    dp: float = Field(gt=-1.0, lt=1.0)
    dr: float = Field(gt=-1.0, lt=1.0)
    w_r: float = Field(default=1e-3, gt=0.0)


@dataclass
class _State:
    scenarios: ScenarioSet | None
    constraints: ConstraintSet
    beta: float
    solver: SolverConfig
    constrained_solver: SolverConfig
    w_grid: tuple[float, ...]
    sweeps: dict[tuple, BaselineSweep] = field(default_factory=dict)
    baselines: dict[tuple, StrategyResult] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def risk(self, beta: float | None) -> RiskSpec:
        return RiskSpec(beta=self.beta if beta is None else beta)

    def dataset(self) -> ScenarioSet:
        if self.scenarios is None:
            raise HTTPException(
                status_code=409,
                detail=(
                    "no scenario dataset loaded; restart the server with "
                    "--scenarios pointing at a scenario JSON file"
                ),
            )
        return self.scenarios

    def baseline_for(self, w: float, beta: float | None) -> StrategyResult:
        risk = self.risk(beta)
        key = (w, risk.beta)
        with self.lock:
            if key not in self.baselines:
                request = BaselineRequest(
                    w=w, constraints=self.constraints, risk=risk, solver=self.solver
                )
                self.baselines[key] = solve_baseline(request, self.dataset())
            return self.baselines[key]

    def sweep_for(self, beta: float | None) -> BaselineSweep:
        risk = self.risk(beta)
        key = (self.w_grid, risk.beta)
        with self.lock:
            if key not in self.sweeps:
                template = BaselineRequest(
                    w=self.w_grid[0],
                    constraints=self.constraints,
                    risk=risk,
                    solver=self.solver,
                )
                sweep = baseline_frontier_stats(template, self.dataset(), self.w_grid)
                self.sweeps[key] = sweep
                for w, result in sweep.results:
                    self.baselines.setdefault((w, risk.beta), result)
            return self.sweeps[key]


def _point_payload(w: float, result: StrategyResult, strategy: str, **extra) -> dict:
    portfolio = result.portfolio
    payload = {
        "w": w,
        "x": [float(v) for v in portfolio.x],
        "shares": [float(v) for v in portfolio.shares],
        "budget": float(portfolio.budget),
        "roi": result.metrics.roi,
        "risk": result.metrics.risk,
        "hhi": result.metrics.hhi,
        "strategy": strategy,
        "converged": bool(result.solution.converged),
        "alpha": result.solution.alpha,
        "feasible": True,
    }
    payload.update(extra)
    return payload


def create_app(
    scenarios: ScenarioSet | None,
    *,
    budget: float = 100.0,
    beta: float = 0.9,
    seed: int = 0,
    time_budget: float | None = 10.0,
    w_grid: tuple[float, ...] = DEFAULT_W_GRID,
    constraints: ConstraintSet | None = None,
    static_dir: str | None = None,
) -> FastAPI:
    solver = replace(SolverConfig(seed=seed), time_limit=time_budget)
    constrained_solver = replace(
        CONSTRAINED_SOLVER, seed=seed, time_limit=time_budget
    )
    state = _State(
        scenarios=scenarios,
        constraints=constraints or ConstraintSet.unconstrained(budget),
        beta=beta,
        solver=solver,
        constrained_solver=constrained_solver,
        w_grid=tuple(w_grid),
    )
    app = FastAPI(title="divopt", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/universe")
    def universe() -> dict:
        data = state.dataset()
        means = data.mean_ratios()
        return {
            "n": data.n_assets,
            "m": data.n_scenarios,
            "budget": float(state.constraints.budget),
            "beta": state.beta,
            "w_grid": list(state.w_grid),
            "assets": [
                {
                    "id": asset.id,
                    "label": asset.label,
                    "technology": asset.technology,
                    "country": asset.country,
                    "category": asset.category.value,
                    "mean_roi_ratio": float(means[asset.id]),
                }
                for asset in data.assets
            ],
        }

    @app.post("/api/solve/baseline")
    def solve_baseline_endpoint(body: BaselineBody) -> dict:
        data = state.dataset()
        try:
            result = state.baseline_for(body.w, body.beta)
        except DivoptError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return _point_payload(body.w, result, "baseline")

    @app.post("/api/solve/penalty")
    def solve_penalty_endpoint(body: PenaltyBody) -> dict:
        data = state.dataset()
        risk = state.risk(body.beta)
        try:
            sweep = state.sweep_for(body.beta)
            request = PenaltyRequest(
                base=BaselineRequest(
                    w=body.w, constraints=state.constraints, risk=risk, solver=state.solver
                ),
                w_d=body.w_d,
            )
            result = solve_hhi_penalty(request, data, sweep=sweep)
        except DivoptError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        theta = 0.0 if body.w_d == 0.0 else sweep.theta1_for(body.w)
        return _point_payload(
            body.w, result, f"penalty(wd={body.w_d:g})", w_d=body.w_d, theta1=theta
        )

    @app.post("/api/solve/constrained")
    def solve_constrained_endpoint(body: ConstrainedBody) -> dict:
        data = state.dataset()
        risk = state.risk(body.beta)
        baseline = state.baseline_for(body.w, body.beta)
        try:
            request = ConstrainedDivRequest(
                baseline=baseline.portfolio,
                baseline_metrics=baseline.metrics,
                dp=body.dp,
                dr=body.dr,
                constraints=state.constraints,
                risk=risk,
                solver=state.constrained_solver,
                w_r=body.w_r,
            )
            result = solve_hhi_constrained(request, data)
        except ScaleError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except DivoptError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return _point_payload(
            body.w,
            result,
            f"constrained(dp={body.dp:g},dr={body.dr:g})",
            feasible=result.feasible,
            dp=body.dp,
            dr=body.dr,
            source=result.source,
            constraints=result.constraint_report,
            baseline={
                "roi": baseline.metrics.roi,
                "risk": baseline.metrics.risk,
                "hhi": baseline.metrics.hhi,
            },
        )

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
