import numpy as np
import pytest

from divopt import (
    BaselineRequest,
    ConstraintSet,
    GeneratorSpec,
    RiskSpec,
    baseline_frontier_stats,
    generate_synthetic,
)

BUDGET = 100.0


@pytest.fixture(scope="session")
def pinned_scenarios():
    """The desk-scale instance used throughout: n=6, m=100, seed 42."""
    return generate_synthetic(GeneratorSpec(seed=42))


@pytest.fixture(scope="session")
def unconstrained():
    return ConstraintSet.unconstrained(BUDGET)


@pytest.fixture(scope="session")
def risk_spec():
    return RiskSpec()


@pytest.fixture(scope="session")
def pinned_sweep(pinned_scenarios, unconstrained):
    """Baseline solves over the default five-point w grid, shared for speed."""
    template = BaselineRequest(w=0.5, constraints=unconstrained)
    return baseline_frontier_stats(template, pinned_scenarios)


def tiny_scenarios(returns, investments, categories=None):
    """Hand-built ScenarioSet for metric examples; assets labelled T{i}_C1."""
    from divopt import Asset, Category, ScenarioSet

    returns = np.asarray(returns, dtype=float)
    n = returns.shape[1]
    if categories is None:
        categories = [Category.SECURED] * n
    assets = tuple(
        Asset(id=i, technology=i + 1, country=1, category=categories[i])
        for i in range(n)
    )
    return ScenarioSet(assets, returns, np.asarray(investments, dtype=float))
