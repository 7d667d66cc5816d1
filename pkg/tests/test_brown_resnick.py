import math

import numpy as np
import pytest

from besselbr.brown_resnick import (
    BRTruncationSpec,
    HRParams,
    TruncationError,
    extremal_coefficient,
    gumbel_cdf,
    gumbel_quantile,
    hr_bivariate_cdf,
    hr_lambda,
    sample_br,
    sample_br_batch,
)
from besselbr.numerics import StreamKey, std_normal_cdf
from besselbr.paths import make_dyadic_grid
from besselbr.stats import EmpiricalSample, ks_statistic, two_sample_ks


class TestGumbel:
    def test_at_zero(self):
        assert gumbel_cdf(0.0) == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_monotone_limits(self):
        assert gumbel_cdf(40.0) == pytest.approx(1.0, abs=1e-15)
        assert gumbel_cdf(-40.0) == pytest.approx(0.0, abs=1e-15)
        xs = np.linspace(-6, 6, 25)
        vals = [gumbel_cdf(x) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_median(self):
        assert gumbel_cdf(-math.log(math.log(2.0))) == pytest.approx(0.5, abs=1e-14)

    def test_quantile_round_trip(self):
        for p in (0.01, 0.4, 0.97):
            assert gumbel_cdf(gumbel_quantile(p)) == pytest.approx(p, abs=1e-12)


class TestHRLambda:
    def test_equal_times(self):
        assert hr_lambda(0.3, 0.3).lam == 0.0

    def test_unit_gap(self):
        assert hr_lambda(0.0, 1.0).lam == pytest.approx(0.5, abs=0)

    def test_symmetry(self):
        assert hr_lambda(0.2, 0.9).lam == hr_lambda(0.9, 0.2).lam

    def test_domain(self):
        with pytest.raises(ValueError):
            hr_lambda(-0.1, 0.5)
        with pytest.raises(ValueError):
            HRParams(-1.0)


class TestHRBivariate:
    def test_complete_dependence(self):
        assert hr_bivariate_cdf(0.0, 1.0, HRParams(0.0)) == pytest.approx(
            math.exp(-1.0), abs=1e-15
        )

    def test_independence(self):
        assert hr_bivariate_cdf(0.0, 0.0, HRParams(math.inf)) == pytest.approx(
            math.exp(-2.0), abs=1e-15
        )

    def test_diagonal_value(self):
        # F(0, 0) = exp(-2 Phi(1/2)); reference via the error function
        phi_half = 0.5 * (1.0 + math.erf(0.5 / math.sqrt(2.0)))
        assert hr_bivariate_cdf(0.0, 0.0, HRParams(0.5)) == pytest.approx(
            math.exp(-2.0 * phi_half), abs=1e-14
        )
        assert hr_bivariate_cdf(0.0, 0.0, HRParams(0.5)) == pytest.approx(0.2509, abs=2e-4)

    @pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 1.0])
    @pytest.mark.parametrize("x", [-1.0, 0.0, 2.0])
    def test_diagonal_matches_extremal_coefficient(self, lam, x):
        p = HRParams(lam)
        theta = extremal_coefficient(p)
        assert hr_bivariate_cdf(x, x, p) == pytest.approx(
            math.exp(theta * math.log(gumbel_cdf(x))), abs=1e-12
        )

    def test_monotone_and_frechet_bounds(self):
        levels = np.linspace(-2.0, 3.0, 5)
        for lam in (0.0, 0.3, 0.8, 5.0):
            p = HRParams(lam)
            for x in levels:
                for y in levels:
                    f = hr_bivariate_cdf(x, y, p)
                    assert f <= min(gumbel_cdf(x), gumbel_cdf(y)) + 1e-15
                    assert f >= gumbel_cdf(x) * gumbel_cdf(y) - 1e-15
                    # nondecreasing in each argument
                    assert hr_bivariate_cdf(x + 0.5, y, p) >= f - 1e-15
                    assert hr_bivariate_cdf(x, y + 0.5, p) >= f - 1e-15


class TestExtremalCoefficient:
    def test_limits(self):
        assert extremal_coefficient(HRParams(0.0)) == 1.0
        assert extremal_coefficient(HRParams(math.inf)) == 2.0

    def test_half(self):
        assert extremal_coefficient(HRParams(0.5)) == pytest.approx(
            2.0 * std_normal_cdf(0.5), abs=1e-14
        )
        assert extremal_coefficient(HRParams(0.5)) == pytest.approx(1.38292, abs=1e-5)

    def test_range(self):
        for lam in (0.0, 0.1, 1.0, 3.0, 10.0):
            assert 1.0 <= extremal_coefficient(HRParams(lam)) <= 2.0


class TestTruncationSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            BRTruncationSpec(epsilon=0.0)
        with pytest.raises(ValueError):
            BRTruncationSpec(epsilon=1.0)
        with pytest.raises(ValueError):
            BRTruncationSpec(max_points=0)


@pytest.fixture(scope="module")
def br_batch_k4():
    grid = make_dyadic_grid(4)
    return grid, sample_br_batch(grid, BRTruncationSpec(epsilon=1e-4), StreamKey(2026), 5000)


class TestSampleBR:
    def test_determinism(self):
        grid = make_dyadic_grid(4)
        key = StreamKey(5, replicate_index=11)
        spec = BRTruncationSpec()
        a = sample_br(grid, spec, key)
        b = sample_br(grid, spec, key)
        assert a.values.tobytes() == b.values.tobytes()

    def test_point_budget_exhaustion(self):
        grid = make_dyadic_grid(2)
        with pytest.raises(TruncationError) as err:
            sample_br(grid, BRTruncationSpec(epsilon=1e-12, max_points=3), StreamKey(6))
        partial = err.value.partial
        assert partial.values.shape == grid.points.shape

    def test_marginals_are_gumbel(self, br_batch_k4):
        grid, batch = br_batch_k4
        for t in (0.0, 0.5, 1.0):
            ks = ks_statistic(EmpiricalSample(batch[:, grid.index_of(t)]), gumbel_cdf)
            assert ks <= 0.026

    def test_stationarity(self, br_batch_k4):
        grid, batch = br_batch_k4
        ks = two_sample_ks(EmpiricalSample(batch[:, 0]), EmpiricalSample(batch[:, -1]))
        assert ks <= 0.033

    def test_max_stability_of_marginals(self, br_batch_k4):
        # max of two independent copies minus ln 2 is again Gumbel
        grid, batch = br_batch_k4
        col = grid.index_of(1.0)
        other = sample_br_batch(
            grid, BRTruncationSpec(epsilon=1e-4), StreamKey(2027), 5000
        )[:, col]
        combined = np.maximum(batch[:, col], other) - math.log(2.0)
        reference = np.array(
            [gumbel_quantile(p) for p in StreamKey(2028).generator().random(5000)]
        )
        ks = two_sample_ks(EmpiricalSample(combined), EmpiricalSample(reference))
        assert ks <= 0.033

    def test_agrees_with_hr_bivariate(self, br_batch_k4):
        grid, batch = br_batch_k4
        pairs = batch[:, [grid.index_of(0.0), grid.index_of(1.0)]]
        params = hr_lambda(0.0, 1.0)
        worst = 0.0
        for x in (-1.0, 0.0, 1.0):
            for y in (-1.0, 0.0, 1.0):
                emp = float(np.mean((pairs[:, 0] <= x) & (pairs[:, 1] <= y)))
                worst = max(worst, abs(emp - hr_bivariate_cdf(x, y, params)))
        assert worst <= 0.04  # 5000 replicates; the acceptance suite re-runs this at 1e4

    def test_epsilon_insensitivity_quick(self):
        grid = make_dyadic_grid(4)
        col = grid.index_of(1.0)
        loose = sample_br_batch(grid, BRTruncationSpec(epsilon=1e-3), StreamKey(2030), 2000)[:, col]
        tight = sample_br_batch(grid, BRTruncationSpec(epsilon=1e-6), StreamKey(2031), 2000)[:, col]
        assert two_sample_ks(EmpiricalSample(loose), EmpiricalSample(tight)) <= 0.052
