"""Batch command-line interface.

Commands reproduce the full study end to end: generate a synthetic
scenario set, sweep the baseline frontier, run both diversification
strategies, and evaluate portfolios.  Every command is a pure function of
its inputs, flags, and seeds: artifacts (JSON, CSV, SVG) are byte-identical
across reruns and each output directory carries a manifest with the full
configuration echo.

Exit codes: 0 success (including reported-infeasible pairs), 2 usage,
3 data error, 4 solver non-convergence on a required baseline.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DivoptError
from .frontier import (
    FrontierPoint,
    frontier_csv,
    frontier_json_text,
    normalize,
    point_from_result,
    sweep_w,
)
from .metrics import Portfolio, RiskSpec, evaluate
from .scenario import (
    CategoryDispersion,
    GeneratorSpec,
    ScenarioSet,
    generate_synthetic,
    load,
    save,
)
from .solver import CapexBudget, ConstraintSet, GroupCap, SolverConfig
from .strategies import (
    CONSTRAINED_SOLVER,
    DEFAULT_ZONE_COUNTS,
    BaselineRequest,
    PenaltyRequest,
    ToleranceRectangle,
    baseline_frontier_stats,
    run_perturbation_suite,
    solve_hhi_penalty,
)
from .svgplot import BarColumn, ScatterGroup, scatter_svg, stacked_bars_svg

USAGE_ERROR = 2
DATA_ERROR = 3
SOLVER_ERROR = 4


class UsageError(Exception):
    """Bad flags or a missing config file; maps to exit code 2."""


class SolverFailure(Exception):
    """A required baseline did not converge; maps to exit code 4."""


def _parse_float_list(text: str, flag: str) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError(f"{flag} must list at least one value")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _parse_kv(text: str, flag: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise UsageError(f"{flag}: expected key=value, got {chunk!r}")
        key, value = chunk.split("=", 1)
        try:
            out[key.strip()] = float(value)
        except ValueError as exc:
            raise UsageError(f"{flag}: {exc}") from exc
    return out


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float) and math.isinf(value):
        return None
    return value


def _dump_json(doc) -> str:
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


class _OutputDir:
    """Collects written files so the manifest can list them with hashes."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []

    def write(self, name: str, text: str) -> Path:
        path = self.root / name
        path.write_text(text)
        self.files.append(name)
        return path

    def manifest(self, command: str, provenance: dict) -> None:
        entries = []
        for name in sorted(self.files):
            digest = hashlib.sha256((self.root / name).read_bytes()).hexdigest()
            entries.append({"path": name, "sha256": digest})
        doc = {
            "command": command,
            "divopt_version": __version__,
            "provenance": provenance,
            "files": entries,
        }
        (self.root / "manifest.json").write_text(_dump_json(doc))


def _generator_spec_from(args) -> GeneratorSpec:
    values: dict = {}
    if args.spec:
        path = Path(args.spec)
        if not path.exists():
            raise UsageError(f"spec file not found: {path}")
        parser = configparser.ConfigParser()
        parser.read(path)
        uni = parser["universe"] if parser.has_section("universe") else {}
        values["n_technologies"] = int(uni.get("technologies", 3))
        values["n_countries"] = int(uni.get("countries", 2))
        values["n_scenarios"] = int(uni.get("scenarios", 100))
        if parser.has_section("universe"):
            if "roi_low" in uni or "roi_high" in uni:
                values["roi_band"] = (float(uni.get("roi_low", 0.06)), float(uni.get("roi_high", 0.22)))
            if "capex_low" in uni or "capex_high" in uni:
                values["capex_band"] = (
                    float(uni.get("capex_low", 0.8)),
                    float(uni.get("capex_high", 1.25)),
                )
        for section, key in (("secured", "secured"), ("merchant", "merchant")):
            if parser.has_section(section):
                sec = parser[section]
                values[key] = CategoryDispersion(
                    return_sigma=float(sec.get("return_sigma")),
                    investment_sigma=float(sec.get("investment_sigma")),
                )
        if parser.has_option("universe", "seed"):
            values["seed"] = int(parser["universe"]["seed"])
    for flag, key in (
        ("technologies", "n_technologies"),
        ("countries", "n_countries"),
        ("scenarios", "n_scenarios"),
    ):
        if getattr(args, flag) is not None:
            values[key] = getattr(args, flag)
    if args.seed is not None:
        values["seed"] = args.seed
    return GeneratorSpec(**values)


def _constraints_from(args, scenarios: ScenarioSet) -> ConstraintSet:
    n = scenarios.n_assets
    budget = args.budget
    asset_caps = None
    if args.asset_cap:
        caps = _parse_float_list(args.asset_cap, "--asset-cap")
        if len(caps) == 1:
            asset_caps = np.full(n, caps[0])
        elif len(caps) == n:
            asset_caps = np.array(caps)
        else:
            raise UsageError(
                f"--asset-cap needs 1 or {n} values, got {len(caps)}"
            )
    country_caps: list[GroupCap] = []
    if args.country_cap:
        for key, cap in _parse_kv(args.country_cap, "--country-cap").items():
            country = int(key)
            indices = tuple(
                i for i, a in enumerate(scenarios.assets) if a.country == country
            )
            if not indices:
                raise UsageError(f"--country-cap: no assets in country {country}")
            country_caps.append(GroupCap(indices=indices, cap=cap, name=f"country{country}"))
    capex = None
    if args.capex_limit is not None:
        kappa = scenarios.investments.mean(axis=0)
        capex = CapexBudget(unit_costs=kappa, limit=args.capex_limit)
    return ConstraintSet(
        budget=budget,
        asset_caps=asset_caps,
        country_caps=tuple(country_caps),
        capex=capex,
    )


def _solver_config(args) -> SolverConfig:
    config = SolverConfig(seed=args.solver_seed)
    if getattr(args, "trace", None):
        config = replace(config, trace_path=args.trace)
    return config


def _point_record(point: FrontierPoint, labels) -> dict:
    return {
        "w": point.w,
        "x": point.x,
        "shares": point.shares,
        "budget": point.budget,
        "labels": list(labels),
        "roi": point.roi,
        "risk": point.risk,
        "hhi": point.hhi,
        "strategy": point.strategy,
        "feasible": point.feasible,
        "converged": point.converged,
    }


def _composition_columns(points, labels, outlined_first=False) -> list[BarColumn]:
    columns = []
    for idx, point in enumerate(points):
        shares = [(labels[i], float(s)) for i, s in enumerate(point.shares)]
        title = f"w={point.w:g}" if point.w is not None else f"#{idx}"
        columns.append(BarColumn(label=title, shares=shares, outlined=outlined_first and idx == 0))
    return columns


def cmd_generate(args) -> int:
    spec = _generator_spec_from(args)
    scenarios = generate_synthetic(spec)
    out = _OutputDir(args.out)
    save(scenarios, out.root / "scenarios.json")
    out.files.append("scenarios.json")
    if args.csv:
        save(scenarios, out.root / "scenarios")
        out.files.extend(["scenarios.returns.csv", "scenarios.investments.csv"])
    out.manifest(
        "generate",
        {
            "seed": spec.seed,
            "generator": {
                "n_technologies": spec.n_technologies,
                "n_countries": spec.n_countries,
                "n_scenarios": spec.n_scenarios,
                "roi_band": list(spec.roi_band),
                "capex_band": list(spec.capex_band),
                "secured": [spec.secured.return_sigma, spec.secured.investment_sigma],
                "merchant": [spec.merchant.return_sigma, spec.merchant.investment_sigma],
            },
        },
    )
    print(f"wrote {scenarios.n_assets} assets x {scenarios.n_scenarios} scenarios to {out.root}")
    return 0


def _require_converged(points) -> None:
    bad = [p for p in points if not p.converged]
    if bad:
        tags = ", ".join(f"w={p.w:g}" for p in bad)
        raise SolverFailure(f"baseline solve did not converge for {tags}")


def cmd_frontier(args) -> int:
    scenarios = load(args.scenarios)
    w_list = _parse_float_list(args.w, "--w")
    constraints = _constraints_from(args, scenarios)
    risk = RiskSpec(beta=args.beta)
    template = BaselineRequest(
        w=w_list[0], constraints=constraints, risk=risk, solver=_solver_config(args)
    )
    frontier = sweep_w(w_list, template, scenarios)
    _require_converged(frontier.points)

    out = _OutputDir(args.out)
    out.write("frontier.csv", frontier_csv(frontier.points))
    out.write("frontier.json", frontier_json_text(frontier.points, scenarios.labels))
    coords = normalize(frontier.points)[0]
    group = ScatterGroup(
        label="baseline",
        points=[(v, u) for u, v in coords],
        color="#16324f",
        line=True,
    )
    out.write("frontier.svg", scatter_svg([group], title="Efficient frontier"))
    out.write(
        "composition.svg",
        stacked_bars_svg(
            _composition_columns(frontier.points, scenarios.labels),
            title="Baseline portfolio composition",
        ),
    )
    out.manifest(
        "frontier",
        {
            "scenarios": str(args.scenarios),
            "w": w_list,
            "beta": args.beta,
            "budget": args.budget,
            "solver": _solver_config(args).to_dict(),
        },
    )
    print(f"wrote {len(frontier.points)}-point frontier to {out.root}")
    return 0


def cmd_diversify_penalty(args) -> int:
    scenarios = load(args.scenarios)
    w_list = _parse_float_list(args.w, "--w")
    wd_list = _parse_float_list(args.wd, "--wd")
    for wd in wd_list:
        if not 0 <= wd <= 1:
            raise UsageError(f"--wd values must lie in [0, 1], got {wd}")
    constraints = _constraints_from(args, scenarios)
    risk = RiskSpec(beta=args.beta)
    solver = _solver_config(args)
    template = BaselineRequest(w=w_list[0], constraints=constraints, risk=risk, solver=solver)

    sweep = baseline_frontier_stats(template, scenarios, w_grid=tuple(sorted(w_list, reverse=True)))
    _require_converged(
        [point_from_result(w, res) for w, res in sweep.results]
    )

    points: dict[tuple[float, float], FrontierPoint] = {}
    for w in sorted(w_list, reverse=True):
        base = replace(template, w=w)
        previous = None
        for wd in sorted(wd_list):
            request = PenaltyRequest(base=base, w_d=wd)
            result = solve_hhi_penalty(request, scenarios, x0=previous, sweep=sweep)
            previous = result.portfolio.x
            points[(w, wd)] = point_from_result(
                w, result, strategy=f"penalty(wd={wd:g})"
            )

    records = []
    labels = scenarios.labels
    for w in sorted(w_list, reverse=True):
        for wd in wd_list:
            record = _point_record(points[(w, wd)], labels)
            record["w_d"] = wd
            record["theta1"] = sweep.theta1_for(w)
            records.append(record)

    out = _OutputDir(args.out)
    csv_lines = ["w,wd,roi,risk,hhi," + ",".join(f"share_{l}" for l in labels)]
    for w in sorted(w_list, reverse=True):
        for wd in wd_list:
            p = points[(w, wd)]
            csv_lines.append(
                ",".join(
                    [repr(float(w)), repr(float(wd)), repr(p.roi), repr(p.risk), repr(p.hhi)]
                    + [repr(float(s)) for s in p.shares]
                )
            )
    out.write("penalty.csv", "\n".join(csv_lines) + "\n")
    out.write(
        "penalty.json",
        _dump_json(
            {
                "records": records,
                "stats": {
                    "mean_abs_roi": sweep.mean_abs_roi,
                    "mean_abs_risk": sweep.mean_abs_risk,
                    "mean_abs_hhi": sweep.mean_abs_hhi,
                },
            }
        ),
    )

    ordered_wd = sorted(wd_list)
    groups = []
    palette = ["#6a3d9a", "#33a02c", "#1f78b4", "#e6a700", "#d62728", "#444444"]
    point_sets = [
        [points[(w, wd)] for w in sorted(w_list, reverse=True)] for wd in ordered_wd
    ]
    coord_sets = normalize(*point_sets)
    for i, wd in enumerate(ordered_wd):
        groups.append(
            ScatterGroup(
                label=f"wd={wd:g}",
                points=[(v, u) for u, v in coord_sets[i]],
                color=palette[i % len(palette)],
                line=True,
            )
        )
    out.write(
        "frontier_comparison.svg",
        scatter_svg(groups, title="Frontiers by diversification weight"),
    )
    for wd in ordered_wd:
        columns = _composition_columns(
            [points[(w, wd)] for w in sorted(w_list, reverse=True)], labels
        )
        out.write(
            f"composition_wd{wd:g}.svg",
            stacked_bars_svg(columns, title=f"Composition at wd={wd:g}"),
        )
    out.manifest(
        "diversify-penalty",
        {
            "scenarios": str(args.scenarios),
            "w": w_list,
            "wd": wd_list,
            "beta": args.beta,
            "budget": args.budget,
            "solver": _solver_config(args).to_dict(),
        },
    )
    print(f"wrote {len(records)} penalty records to {out.root}")
    return 0


def cmd_diversify_constrained(args) -> int:
    scenarios = load(args.scenarios)
    w_list = _parse_float_list(args.w, "--w")
    rect_kv = _parse_kv(args.rect, "--rect")
    counts = tuple(int(c) for c in _parse_float_list(args.counts, "--counts"))
    if len(counts) != 3:
        raise UsageError(f"--counts needs exactly three values, got {len(counts)}")
    constraints = _constraints_from(args, scenarios)
    risk = RiskSpec(beta=args.beta)
    solver = _solver_config(args)
    template = BaselineRequest(w=w_list[0], constraints=constraints, risk=risk, solver=solver)

    sweep = baseline_frontier_stats(template, scenarios, w_grid=tuple(sorted(w_list, reverse=True)))
    baseline_points = [point_from_result(w, res) for w, res in sweep.results]
    _require_converged(baseline_points)

    rect = ToleranceRectangle(
        profit_halfwidth=rect_kv.get("a", 0.1),
        risk_halfwidth=rect_kv.get("b", 0.1),
        counts=counts,  # type: ignore[arg-type]
        seed=args.pair_seed,
    )
    constrained_solver = replace(CONSTRAINED_SOLVER, seed=args.solver_seed)
    runs = run_perturbation_suite(
        list(sweep.results),
        rect,
        scenarios,
        constraints,
        risk=risk,
        solver=constrained_solver,
        w_r=args.wr,
        max_workers=args.jobs,
    )

    labels = scenarios.labels
    run_records = []
    for run in runs:
        record: dict = {
            "w": run.w,
            "zone": run.pair.zone,
            "dp": run.pair.dp,
            "dr": run.pair.dr,
        }
        if run.error is not None:
            record["error"] = run.error
        else:
            result = run.result
            record.update(
                {
                    "feasible": result.feasible,
                    "source": result.source,
                    "x": result.portfolio.x,
                    "shares": result.portfolio.shares,
                    "roi": result.metrics.roi,
                    "risk": result.metrics.risk,
                    "hhi": result.metrics.hhi,
                    "constraints": result.constraint_report,
                    "residuals": result.solution.residuals,
                    "converged": result.solution.converged,
                }
            )
        run_records.append(record)

    out = _OutputDir(args.out)
    out.write(
        "suite.json",
        _dump_json(
            {
                "baselines": [_point_record(p, labels) for p in baseline_points],
                "rectangle": {
                    "a": rect.profit_halfwidth,
                    "b": rect.risk_halfwidth,
                    "counts": list(rect.counts),
                    "seed": rect.seed,
                },
                "w_r": args.wr,
                "runs": run_records,
                "solver": constrained_solver.to_dict(),
            }
        ),
    )

    zone_colors = {"s1": "#1f78b4", "s2": "#33a02c", "s3": "#e6a700"}
    cloud_points: dict[str, list[FrontierPoint]] = {"s1": [], "s2": [], "s3": []}
    infeasible: list[FrontierPoint] = []
    for run in runs:
        if run.error is not None or run.result is None:
            continue
        point = point_from_result(
            run.w,
            run.result,
            strategy=f"constrained(dp={run.pair.dp:g},dr={run.pair.dr:g},zone={run.pair.zone})",
            feasible=run.result.feasible,
        )
        if run.result.feasible:
            cloud_points[run.pair.zone].append(point)
        else:
            infeasible.append(point)

    plot_sets = [baseline_points] + [cloud_points[z] for z in ("s1", "s2", "s3")] + [infeasible]
    coords = normalize(*plot_sets)
    groups = [
        ScatterGroup(
            label="baseline",
            points=[(v, u) for u, v in coords[0]],
            color="#111111",
            line=True,
            marker_size=6.0,
        )
    ]
    for i, zone in enumerate(("s1", "s2", "s3")):
        groups.append(
            ScatterGroup(
                label=f"zone {zone}",
                points=[(v, u) for u, v in coords[1 + i]],
                color=zone_colors[zone],
            )
        )
    groups.append(
        ScatterGroup(
            label="infeasible",
            points=[(v, u) for u, v in coords[4]],
            color="#d62728",
            hollow=True,
        )
    )
    out.write(
        "cloud.svg",
        scatter_svg(groups, title="Baseline optima and diversified perturbations"),
    )

    for w, base_result in sweep.results:
        columns = [
            BarColumn(
                label="optimal",
                shares=[(labels[i], float(s)) for i, s in enumerate(base_result.portfolio.shares)],
                outlined=True,
            )
        ]
        for run in runs:
            if run.w != w or run.error is not None or not run.result.feasible:
                continue
            columns.append(
                BarColumn(
                    label=f"{run.pair.zone}",
                    shares=[
                        (labels[i], float(s))
                        for i, s in enumerate(run.result.portfolio.shares)
                    ],
                )
            )
        out.write(
            f"composition_w{w:g}.svg",
            stacked_bars_svg(columns, title=f"Perturbed portfolios at w={w:g}"),
        )

    out.manifest(
        "diversify-constrained",
        {
            "scenarios": str(args.scenarios),
            "w": w_list,
            "rect": {"a": rect.profit_halfwidth, "b": rect.risk_halfwidth},
            "counts": list(counts),
            "wr": args.wr,
            "pair_seed": args.pair_seed,
            "beta": args.beta,
            "budget": args.budget,
            "solver": constrained_solver.to_dict(),
        },
    )
    n_feasible = sum(1 for r in runs if r.result is not None and r.result.feasible)
    print(
        f"wrote suite with {len(runs)} runs ({n_feasible} feasible) to {out.root}"
    )
    return 0


def cmd_evaluate(args) -> int:
    scenarios = load(args.scenarios)
    path = Path(args.portfolio)
    if not path.exists():
        raise FileNotFoundError(f"portfolio file not found: {path}")
    doc = json.loads(path.read_text())
    x = np.asarray(doc["x"], dtype=float)
    budget = float(doc.get("budget", x.sum()))
    portfolio = Portfolio(x, budget)
    triple = evaluate(portfolio, scenarios, RiskSpec(beta=args.beta))
    text = _dump_json({"roi": triple.roi, "risk": triple.risk, "hhi": triple.hhi})
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    scenarios = load(args.scenarios) if args.scenarios else None
    app = create_app(
        scenarios,
        budget=args.budget,
        beta=args.beta,
        seed=args.solver_seed,
        time_budget=args.time_budget,
        static_dir=args.static,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divopt",
        description="Scenario-based portfolio optimization with diversification control.",
    )
    parser.add_argument("--version", action="version", version=f"divopt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic scenario set")
    gen.add_argument("--spec", help="INI config with [universe]/[secured]/[merchant] sections")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--technologies", type=int, default=None)
    gen.add_argument("--countries", type=int, default=None)
    gen.add_argument("--scenarios", type=int, default=None)
    gen.add_argument("--csv", action="store_true", help="also write the CSV matrix pair")
    gen.add_argument("--out", required=True)
    gen.set_defaults(handler=cmd_generate)

    def add_common(p):
        p.add_argument("--scenarios", required=True, help="scenario JSON file")
        p.add_argument("--beta", type=float, default=0.9)
        p.add_argument("--budget", type=float, default=100.0)
        p.add_argument("--asset-cap", default=None, help="per-asset cap (one value or comma list)")
        p.add_argument("--country-cap", default=None, help="country=cap pairs, e.g. 1=60,2=70")
        p.add_argument("--capex-limit", type=float, default=None)
        p.add_argument("--solver-seed", type=int, default=0)
        p.add_argument("--trace", default=None, help="JSON-lines solver trace path")
        p.add_argument("--out", required=True)

    fro = sub.add_parser("frontier", help="baseline frontier sweep")
    add_common(fro)
    fro.add_argument("--w", default="1,0.8,0.6,0.4,0.2")
    fro.set_defaults(handler=cmd_frontier)

    pen = sub.add_parser("diversify-penalty", help="HHI-penalty sweep over (w, wd)")
    add_common(pen)
    pen.add_argument("--w", default="1,0.8,0.6,0.4,0.2")
    pen.add_argument("--wd", default="0,0.2,0.5,0.9")
    pen.set_defaults(handler=cmd_diversify_penalty)

    con = sub.add_parser(
        "diversify-constrained", help="tolerance-pair perturbation suite"
    )
    add_common(con)
    con.add_argument("--w", default="1,0.8,0.6,0.4,0.2")
    con.add_argument("--rect", default="a=0.1,b=0.1")
    con.add_argument(
        "--counts",
        default=",".join(str(c) for c in DEFAULT_ZONE_COUNTS),
        help="pairs per zone s1,s2,s3",
    )
    con.add_argument("--wr", type=float, default=1e-3)
    con.add_argument("--pair-seed", type=int, default=0)
    con.add_argument("--jobs", type=int, default=1)
    con.set_defaults(handler=cmd_diversify_constrained)

    ev = sub.add_parser("evaluate", help="exact metrics of a portfolio file")
    ev.add_argument("--scenarios", required=True)
    ev.add_argument("--portfolio", required=True, help='JSON {"x": [...], "budget": B}')
    ev.add_argument("--beta", type=float, default=0.9)
    ev.add_argument("--out", default=None)
    ev.set_defaults(handler=cmd_evaluate)

    srv = sub.add_parser("serve", help="run the HTTP/JSON solve API")
    srv.add_argument("--scenarios", default=None)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8787)
    srv.add_argument("--beta", type=float, default=0.9)
    srv.add_argument("--budget", type=float, default=100.0)
    srv.add_argument("--solver-seed", type=int, default=0)
    srv.add_argument("--time-budget", type=float, default=10.0)
    srv.add_argument("--static", default=None, help="directory of web UI assets to serve at /")
    srv.set_defaults(handler=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else USAGE_ERROR
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return SOLVER_ERROR
    except (FileNotFoundError, DivoptError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input ({exc})", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
