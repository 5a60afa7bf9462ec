"""divopt: scenario-based portfolio optimization with diversification control.

Physical decision variables (production units on a budget simplex), the
nonlinear per-scenario ROI metric, CVaR-deviation risk, and two HHI-based
diversification strategies with a tolerance-pair perturbation heuristic.
"""

from .errors import (
    DataFormatError,
    DivoptError,
    InfeasibleError,
    ScaleError,
    ValidationError,
)
from .metrics import (
    MetricTriple,
    Portfolio,
    RiskSpec,
    TailConvention,
    cvar_deviation_exact,
    evaluate,
    expected_roi,
    f_beta,
    hhi,
    lower_tail_mean,
    roi_upper_bound,
    scenario_roi,
    theta1,
    theta2,
    upper_tail_mean,
)
from .scenario import (
    Asset,
    Category,
    CategoryDispersion,
    GeneratorSpec,
    ScenarioSet,
    asset_label,
    generate_synthetic,
    load,
    save,
)
from .solver import (
    CapexBudget,
    ConstraintSet,
    GroupCap,
    LinearConstraint,
    Problem,
    SmoothConstraint,
    Solution,
    SolverConfig,
    check_gradient,
    minimize,
    project_capped_simplex,
)
from .strategies import (
    DEFAULT_W_GRID,
    BaselineRequest,
    BaselineSweep,
    ConstrainedDivRequest,
    ConstrainedResult,
    PenaltyRequest,
    PerturbationRun,
    StrategyResult,
    TolerancePair,
    ToleranceRectangle,
    baseline_frontier_stats,
    generate_tolerance_pairs,
    run_perturbation_suite,
    solve_baseline,
    solve_hhi_constrained,
    solve_hhi_penalty,
)
from .frontier import (
    Frontier,
    FrontierPoint,
    frontier_csv,
    frontier_json,
    normalize,
    pareto_filter,
    sweep_w,
)

__version__ = "0.1.0"

__all__ = [
    "Asset",
    "BaselineRequest",
    "BaselineSweep",
    "CapexBudget",
    "Category",
    "CategoryDispersion",
    "ConstrainedDivRequest",
    "ConstrainedResult",
    "ConstraintSet",
    "DEFAULT_W_GRID",
    "DataFormatError",
    "DivoptError",
    "Frontier",
    "FrontierPoint",
    "GeneratorSpec",
    "GroupCap",
    "InfeasibleError",
    "LinearConstraint",
    "MetricTriple",
    "PenaltyRequest",
    "PerturbationRun",
    "Portfolio",
    "Problem",
    "RiskSpec",
    "ScaleError",
    "ScenarioSet",
    "SmoothConstraint",
    "Solution",
    "SolverConfig",
    "StrategyResult",
    "TailConvention",
    "TolerancePair",
    "ToleranceRectangle",
    "ValidationError",
    "asset_label",
    "baseline_frontier_stats",
    "check_gradient",
    "cvar_deviation_exact",
    "evaluate",
    "expected_roi",
    "f_beta",
    "frontier_csv",
    "frontier_json",
    "generate_synthetic",
    "generate_tolerance_pairs",
    "hhi",
    "load",
    "lower_tail_mean",
    "minimize",
    "normalize",
    "pareto_filter",
    "project_capped_simplex",
    "roi_upper_bound",
    "run_perturbation_suite",
    "save",
    "scenario_roi",
    "solve_baseline",
    "solve_hhi_constrained",
    "solve_hhi_penalty",
    "sweep_w",
    "theta1",
    "theta2",
    "upper_tail_mean",
]
