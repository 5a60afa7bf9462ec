import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divopt import (
    MetricTriple,
    Portfolio,
    RiskSpec,
    ScaleError,
    TailConvention,
    ValidationError,
    cvar_deviation_exact,
    evaluate,
    expected_roi,
    f_beta,
    hhi,
    roi_upper_bound,
    scenario_roi,
    theta1,
    theta2,
)
from divopt.solver import softplus

from .conftest import BUDGET, tiny_scenarios
from .helpers import (
    risk_alpha_grid,
    f_beta_breakpoints,
    lower_tail_mean_bruteforce,
    roi_recompute,
    simplex_grid,
)


def single_asset_set(ratios):
    """n=1 set whose per-scenario ROI equals the given ratios."""
    ratios = np.asarray(ratios, dtype=float)
    return tiny_scenarios(ratios[:, None], np.ones((ratios.size, 1)))


class TestScenarioRoi:
    def test_direct_arithmetic(self):
        scenarios = tiny_scenarios([[2.0, 4.0]], [[1.0, 3.0]])
        p = Portfolio(np.array([1.0, 1.0]), 2.0)
        assert scenario_roi(p, scenarios) == pytest.approx([1.5], abs=0)

    def test_scale_invariance(self):
        scenarios = tiny_scenarios([[2.0, 4.0], [1.0, 2.0]], [[1.0, 3.0], [2.0, 1.0]])
        p1 = Portfolio(np.array([1.0, 3.0]), 4.0)
        p2 = Portfolio(np.array([2.5, 7.5]), 10.0)
        assert scenario_roi(p1, scenarios) == pytest.approx(
            scenario_roi(p2, scenarios), rel=1e-15
        )

    def test_single_asset_identity(self):
        ratios = np.array([0.5, 1.25, 2.0])
        p = Portfolio(np.array([3.0]), 3.0)
        assert scenario_roi(p, single_asset_set(ratios)) == pytest.approx(ratios, rel=1e-15)

    def test_zero_portfolio_rejected(self):
        with pytest.raises(ValidationError):
            Portfolio(np.array([0.0, 0.0]), 0.0)


class TestExpectedRoi:
    def test_mean_of_values(self):
        p = Portfolio(np.array([1.0]), 1.0)
        assert expected_roi(p, single_asset_set([1, 2, 3, 4])) == pytest.approx(2.5, abs=0)

    def test_single_scenario(self):
        p = Portfolio(np.array([1.0]), 1.0)
        assert expected_roi(p, single_asset_set([1.7])) == pytest.approx(1.7, abs=0)

    def test_matches_independent_recomputation(self, pinned_scenarios):
        p = Portfolio.uniform(pinned_scenarios.n_assets, BUDGET)
        expected = roi_recompute(p.x, pinned_scenarios.returns, pinned_scenarios.investments)
        assert expected_roi(p, pinned_scenarios) == pytest.approx(expected, rel=1e-12)


class TestCvarDeviation:
    def test_quarter_tail(self):
        p = Portfolio(np.array([1.0]), 1.0)
        spec = RiskSpec(beta=0.75)
        # worst 25% of {1,2,3,4} is the single value 1; mean 2.5
        assert cvar_deviation_exact(p, single_asset_set([1, 2, 3, 4]), spec) == pytest.approx(
            1.5, abs=1e-15
        )

    def test_beta_to_zero_gives_zero_risk(self):
        p = Portfolio(np.array([1.0]), 1.0)
        spec = RiskSpec(beta=1e-12)
        assert cvar_deviation_exact(p, single_asset_set([1, 2, 3, 4]), spec) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_single_scenario_zero_risk(self):
        p = Portfolio(np.array([1.0]), 1.0)
        for beta in (0.1, 0.5, 0.9):
            assert cvar_deviation_exact(
                p, single_asset_set([2.2]), RiskSpec(beta=beta)
            ) == pytest.approx(0.0, abs=1e-12)

    def test_matches_alpha_grid_on_random_portfolios(self, pinned_scenarios, risk_spec):
        rng = np.random.default_rng(11)
        for _ in range(50):
            shares = rng.dirichlet(np.ones(pinned_scenarios.n_assets))
            p = Portfolio(shares * BUDGET, BUDGET)
            exact = cvar_deviation_exact(p, pinned_scenarios, risk_spec)
            oracle = risk_alpha_grid(scenario_roi(p, pinned_scenarios), risk_spec.beta)
            assert exact == pytest.approx(oracle, abs=1e-8)
            assert exact >= -1e-9

    def test_matches_bruteforce_tail_at_fractional_mass(self):
        values = [0.5, 1.0, 1.5, 4.0, 2.0, 3.0, 0.25]
        p = Portfolio(np.array([1.0]), 1.0)
        spec = RiskSpec(beta=0.8)  # (1-beta)*m = 1.4 scenarios
        expected = float(np.mean(values)) - lower_tail_mean_bruteforce(values, 0.8)
        assert cvar_deviation_exact(p, single_asset_set(values), spec) == pytest.approx(
            expected, rel=1e-14
        )

    def test_as_printed_is_nonpositive(self, pinned_scenarios):
        spec = RiskSpec(beta=0.9, convention=TailConvention.AS_PRINTED)
        p = Portfolio.uniform(pinned_scenarios.n_assets, BUDGET)
        assert cvar_deviation_exact(p, pinned_scenarios, spec) <= 0.0

    def test_tail_mass_underflow_degenerates_to_minimum(self):
        from divopt import lower_tail_mean

        values = np.array([3.0, 1.0, 2.0])
        assert lower_tail_mean(values, 1.0) == 1.0


class TestFBeta:
    def test_breakpoint_example(self):
        p = Portfolio(np.array([1.0]), 1.0)
        scenarios = single_asset_set([1.0, 2.0])
        spec = RiskSpec(beta=0.5)
        assert f_beta(p, -1.0, scenarios, spec) == pytest.approx(-1.0, abs=0)
        # -1 is also the minimum over the breakpoints
        values = f_beta_breakpoints([1.0, 2.0], 0.5)
        assert min(values.values()) == pytest.approx(-1.0, abs=0)

    def test_large_alpha_asymptote(self):
        p = Portfolio(np.array([1.0]), 1.0)
        scenarios = single_asset_set([1.0, 2.0])
        spec = RiskSpec(beta=0.5)
        assert f_beta(p, 1e6, scenarios, spec) == pytest.approx(1e6, rel=1e-12)

    def test_dominates_minimum(self, pinned_scenarios, risk_spec):
        rng = np.random.default_rng(5)
        p = Portfolio(rng.dirichlet(np.ones(6)) * BUDGET, BUDGET)
        roi = expected_roi(p, pinned_scenarios)
        risk = cvar_deviation_exact(p, pinned_scenarios, risk_spec)
        for alpha in rng.uniform(-0.5, 0.5, size=20):
            assert roi + f_beta(p, float(alpha), pinned_scenarios, risk_spec) >= risk - 1e-12


class TestHhi:
    def test_full_concentration(self):
        assert hhi(Portfolio(np.array([BUDGET, 0, 0, 0]), BUDGET)) == pytest.approx(1.0, abs=0)

    def test_uniform_four(self):
        assert hhi(Portfolio.uniform(4, BUDGET)) == pytest.approx(0.25, abs=1e-15)

    def test_uniform_five_is_one_over_n(self):
        assert hhi(Portfolio.uniform(5, BUDGET)) == pytest.approx(0.2, abs=1e-15)

    @given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_bounds(self, n, seed):
        shares = np.random.default_rng(seed).dirichlet(np.ones(n))
        value = hhi(Portfolio(shares * BUDGET, BUDGET))
        assert 1.0 / n - 1e-12 <= value <= 1.0 + 1e-12


class TestThetas:
    def test_theta1_formula(self):
        assert theta1(0.2, 0.1, 0.5, w=0.5) == pytest.approx(0.3, rel=1e-15)

    def test_theta1_endpoints(self):
        assert theta1(0.2, 0.1, 0.5, w=1.0) == pytest.approx(0.4, rel=1e-15)
        assert theta1(0.2, 0.1, 0.5, w=0.0) == pytest.approx(0.2, rel=1e-15)

    def test_theta1_zero_hhi_mean(self):
        with pytest.raises(ScaleError):
            theta1(0.2, 0.1, 0.0, w=0.5)

    def test_theta2_formula(self):
        assert theta2(MetricTriple(roi=0.4, risk=0.1, hhi=0.6)) == pytest.approx(2.0, rel=1e-15)

    def test_theta2_zero_risk(self):
        assert theta2(MetricTriple(roi=0.4, risk=0.0, hhi=0.6)) == pytest.approx(1.5, rel=1e-15)

    def test_theta2_degenerate_gap(self):
        with pytest.raises(ScaleError):
            theta2(MetricTriple(roi=0.4, risk=0.4, hhi=0.6))


class TestRoiUpperBound:
    def test_single_asset(self):
        scenarios = single_asset_set([1.0, 3.0])
        bound, j = roi_upper_bound(scenarios)
        assert bound == pytest.approx(2.0, abs=0)
        assert j == 0
        assert expected_roi(Portfolio(np.array([5.0]), 5.0), scenarios) == pytest.approx(bound)

    def test_grid_never_exceeds_bound(self, pinned_scenarios, risk_spec):
        sub = pinned_scenarios.subset([0, 1, 2])
        bound, _ = roi_upper_bound(sub)
        shares = simplex_grid(3, 100)
        sr = shares @ sub.returns.T
        si = shares @ sub.investments.T
        roi = (sr / si).mean(axis=1)
        assert roi.max() <= bound + 1e-12

    def test_concentrated_attains_bound(self, pinned_scenarios):
        bound, j = roi_upper_bound(pinned_scenarios)
        p = Portfolio.concentrated(pinned_scenarios.n_assets, j, BUDGET)
        assert expected_roi(p, pinned_scenarios) == pytest.approx(bound, rel=1e-14)

    def test_dominates_random_portfolios(self, pinned_scenarios):
        bound, _ = roi_upper_bound(pinned_scenarios)
        rng = np.random.default_rng(100)
        shares = rng.dirichlet(np.ones(6), size=1000)
        sr = shares @ pinned_scenarios.returns.T
        si = shares @ pinned_scenarios.investments.T
        roi = (sr / si).mean(axis=1)
        assert roi.max() <= bound + 1e-12

    def test_tie_breaks_to_lowest_index(self):
        scenarios = tiny_scenarios([[2.0, 2.0]], [[1.0, 1.0]])
        _, j = roi_upper_bound(scenarios)
        assert j == 0


class TestSmoothingBound:
    def test_softplus_gap_bound(self, pinned_scenarios, risk_spec):
        rng = np.random.default_rng(9)
        p = Portfolio(rng.dirichlet(np.ones(6)) * BUDGET, BUDGET)
        f = scenario_roi(p, pinned_scenarios)
        for tau in (1e-2, 1e-3, 1e-4):
            for alpha in rng.uniform(-0.4, 0.1, size=10):
                t = -f - alpha
                exact = float(alpha + np.maximum(t, 0.0).mean() / (1 - risk_spec.beta))
                smooth = float(alpha + softplus(t, tau).mean() / (1 - risk_spec.beta))
                assert 0.0 <= smooth - exact <= tau * math.log(2) / (1 - risk_spec.beta) + 1e-15


class TestEvaluate:
    def test_triple_consistency(self, pinned_scenarios, risk_spec):
        p = Portfolio.uniform(6, BUDGET)
        triple = evaluate(p, pinned_scenarios, risk_spec)
        assert triple.roi == pytest.approx(expected_roi(p, pinned_scenarios), abs=0)
        assert triple.risk == pytest.approx(
            cvar_deviation_exact(p, pinned_scenarios, risk_spec), abs=0
        )
        assert triple.hhi == pytest.approx(hhi(p), abs=0)

    def test_metric_scale_invariance(self, pinned_scenarios, risk_spec):
        rng = np.random.default_rng(4)
        shares = rng.dirichlet(np.ones(6))
        a = evaluate(Portfolio(shares * 10.0, 10.0), pinned_scenarios, risk_spec)
        b = evaluate(Portfolio(shares * 2500.0, 2500.0), pinned_scenarios, risk_spec)
        assert a.roi == pytest.approx(b.roi, rel=1e-12)
        assert a.risk == pytest.approx(b.risk, rel=1e-10)
        assert a.hhi == pytest.approx(b.hhi, rel=1e-12)
