import math

import numpy as np
import pytest

from besselbr.numerics import StreamKey
from besselbr.paths import SamplePath, TimeGrid, make_dyadic_grid
from besselbr.rescale import (
    bessel_constants,
    generic_constants,
    local_bessel_batch,
    local_bessel_split_batch,
    local_bessel_times,
    local_scalar_times,
    max_process,
    sample_local_bessel,
    sample_local_scalar,
    scalar_constants,
)
from besselbr.stats import EmpiricalSample, ks_statistic, two_sample_ks
from besselbr.tails import chi_square_tail, scalar_product_tail_params

N_REPLICATES = 10**5
KS_1PCT = 0.006


class TestBesselConstants:
    def test_m2_collapses_to_two_log_n(self):
        for n in (2, 10, 10**4, 10**9):
            consts = bessel_constants(n, 2)
            assert consts.a == 2.0
            assert consts.b == pytest.approx(2.0 * math.log(n), abs=1e-12)

    def test_real_count_accepted(self):
        assert bessel_constants(math.e**2, 2).b == pytest.approx(4.0, abs=1e-12)

    def test_m4_value(self):
        # independent evaluation of the defining formula with the math module
        expected = 2 * math.log(1e4) + 2 * math.log(math.log(1e4)) - 2 * math.lgamma(2.0)
        consts = bessel_constants(10**4, 4)
        assert consts.b == pytest.approx(expected, abs=1e-12)
        assert consts.b == pytest.approx(22.86133435668806, abs=1e-9)

    def test_count_validation(self):
        with pytest.raises(ValueError):
            bessel_constants(1, 2)

    def test_b_increasing_in_n(self):
        for m in (1, 2, 3, 5):
            bs = [bessel_constants(n, m).b for n in (3, 5, 10, 10**2, 10**4, 10**8)]
            assert all(y > x for x, y in zip(bs, bs[1:]))


class TestScalarConstants:
    def test_m2_gives_exact_laplace_intensity(self):
        # n * P(Laplace > s + b) must be exp(-s) exactly; this identity pins
        # the centering constant, including its ln 2 term
        for n in (2, 10, 10**4):
            b = scalar_constants(n, 2).b
            for s in (-0.5, 0.0, 1.0, 3.0):
                assert n * 0.5 * math.exp(-(s + b)) == pytest.approx(math.exp(-s), abs=1e-12)

    def test_m2_closed_form(self):
        for n in (2, 100, 10**6):
            assert scalar_constants(n, 2).b == pytest.approx(
                math.log(n) - math.log(2.0), abs=1e-12
            )

    def test_matches_generic_from_product_tail(self):
        for m in range(1, 7):
            K, c, beta = scalar_product_tail_params(m)
            for n in (10**2, 10**6):
                expected = generic_constants(K, c, beta, n)
                got = scalar_constants(n, m)
                assert got.a == pytest.approx(expected.a, abs=1e-12)
                assert got.b == pytest.approx(expected.b, abs=1e-12)

    def test_count_validation(self):
        with pytest.raises(ValueError):
            scalar_constants(1.5, 2)


class TestGenericConstants:
    def test_unit_parameters(self):
        consts = generic_constants(1.0, 1.0, 0.0, 50)
        assert consts.a == 1.0
        assert consts.b == pytest.approx(math.log(50), abs=1e-14)

    def test_scaled_rate(self):
        consts = generic_constants(1.0, 2.0, 0.0, math.e**2)
        assert consts.a == pytest.approx(0.5, abs=1e-14)
        assert consts.b == pytest.approx(1.0, abs=1e-12)

    def test_reproduces_bessel_from_chi_square_tail(self):
        from besselbr.tails import chi_square_tail_params

        for m in (1, 2, 3, 4):
            K, c, beta = chi_square_tail_params(m)
            for n in (10**2, 10**6):
                expected = generic_constants(K, c, beta, n)
                got = bessel_constants(n, m)
                assert got.a == pytest.approx(expected.a, abs=1e-12)
                assert got.b == pytest.approx(expected.b, abs=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            generic_constants(0.0, 1.0, 0.0, 10)
        with pytest.raises(ValueError):
            generic_constants(1.0, -2.0, 0.0, 10)

    def test_at_rederives(self):
        consts = bessel_constants(100, 3)
        assert consts.at(10**4) == bessel_constants(10**4, 3)
        gen = generic_constants(0.5, 2.0, 1.0, 100)
        assert gen.at(10**5) == generic_constants(0.5, 2.0, 1.0, 10**5)


class TestExactIntensityIdentity:
    def test_chi_square_m2(self):
        # n * P(chi2_2 > 2s + b_n) = exp(-s), machine-exact for every n
        for n in (2, 10, 10**3, 10**6):
            b = bessel_constants(n, 2).b
            for s in (-1.0, 0.0, 3.0, 10.0):
                if 2 * s + b < 0:
                    continue
                value = n * chi_square_tail(2, 2.0 * s + b)
                assert value == pytest.approx(math.exp(-s), abs=1e-12)


class TestLocalTimes:
    def test_bessel_window(self):
        ts = np.linspace(0.0, 1.0, 11)
        b = bessel_constants(10**4, 2).b
        phys = local_bessel_times(ts, 10**4, 2)
        assert np.allclose(phys, 1.0 + ts / b, rtol=0, atol=0)
        assert phys[0] == 1.0 and phys[-1] == pytest.approx(1.0 + 1.0 / b)

    def test_scalar_window(self):
        ts = np.linspace(0.0, 1.0, 11)
        b = scalar_constants(10**4, 2).b
        phys = local_scalar_times(ts, 10**4, 2)
        assert np.allclose(phys, 1.0 + ts / (2.0 * b), rtol=0, atol=0)
        assert np.all((phys >= 1.0) & (phys <= 1.0 + 1.0 / (2.0 * b)))


@pytest.fixture(scope="module")
def local_bessel_at_zero():
    grid = TimeGrid([0.0, 1.0])
    key = StreamKey(606)
    n, m = 10**4, 2
    return np.array(
        [sample_local_bessel(grid, n, m, key.with_replicate(r)).values[0] for r in range(N_REPLICATES)]
    ), bessel_constants(n, m).b


class TestLocalBessel:
    def test_marginal_at_zero_is_chi_square(self, local_bessel_at_zero):
        values, b = local_bessel_at_zero
        recovered = 2.0 * values + b
        ks = ks_statistic(EmpiricalSample(recovered), lambda x: 1.0 - np.exp(-x / 2.0))
        assert ks <= KS_1PCT

    def test_determinism(self):
        grid = make_dyadic_grid(3)
        key = StreamKey(31, replicate_index=2)
        a = sample_local_bessel(grid, 1000, 2, key)
        b = sample_local_bessel(grid, 1000, 2, key)
        assert a.values.tobytes() == b.values.tobytes()

    def test_batch_matches_path_sampler_in_law(self):
        # the vectorised batch sampler and the per-path sampler are separate
        # code paths for the same law; compare them at t = 1
        grid = TimeGrid([0.0, 1.0])
        key = StreamKey(632)
        n, m, reps = 10**3, 3, 2 * 10**4
        from_paths = np.array(
            [sample_local_bessel(grid, n, m, key.with_replicate(r)).values[1] for r in range(reps)]
        )
        from_batch = local_bessel_batch(np.array([1.0]), n, m, StreamKey(633), reps)[:, 0]
        assert two_sample_ks(EmpiricalSample(from_paths), EmpiricalSample(from_batch)) <= 0.017


class TestLocalScalar:
    def test_marginal_at_zero_is_laplace(self):
        grid = TimeGrid([0.0, 1.0])
        key = StreamKey(707)
        n, m = 10**4, 2
        b = scalar_constants(n, m).b
        values = np.array(
            [
                sample_local_scalar(grid, n, m, key.with_replicate(r)).values[0]
                for r in range(N_REPLICATES)
            ]
        )
        recovered = values + b
        cdf = lambda x: np.where(x >= 0, 1.0 - 0.5 * np.exp(-x), 0.5 * np.exp(np.minimum(x, 0)))
        assert ks_statistic(EmpiricalSample(recovered), cdf) <= KS_1PCT

    def test_determinism(self):
        grid = make_dyadic_grid(2)
        key = StreamKey(41)
        a = sample_local_scalar(grid, 500, 2, key)
        b = sample_local_scalar(grid, 500, 2, key)
        assert a.values.tobytes() == b.values.tobytes()


class TestDecompositionIdentity:
    def test_direct_and_split_samplers_agree_in_law(self):
        # quick version of the full cross-check (the acceptance suite runs it
        # at 1e5 replicates); two-sample 1% critical at 3e4 is ~0.0133
        ts = np.array([0.5, 1.0])
        direct = local_bessel_batch(ts, 10**4, 2, StreamKey(808), 3 * 10**4)
        split = local_bessel_split_batch(ts, 10**4, 2, StreamKey(809), 3 * 10**4)
        for j in range(2):
            ks = two_sample_ks(EmpiricalSample(direct[:, j]), EmpiricalSample(split[:, j]))
            assert ks <= 0.014


class TestMaxProcess:
    def test_single_path_identity(self):
        grid = make_dyadic_grid(2)
        path = SamplePath(grid, np.arange(len(grid), dtype=float))
        out = max_process([path])
        assert np.array_equal(out.values, path.values)

    def test_two_constant_paths(self):
        grid = make_dyadic_grid(1)
        low = SamplePath(grid, np.full(3, 1.0))
        high = SamplePath(grid, np.full(3, 2.0))
        assert np.array_equal(max_process([low, high]).values, high.values)

    def test_adding_a_path_never_decreases(self):
        grid = make_dyadic_grid(3)
        key = StreamKey(17)
        from besselbr.paths import sample_bm

        paths = [sample_bm(grid, key.with_replicate(r)) for r in range(5)]
        base = max_process(paths[:3]).values
        extended = max_process(paths).values
        assert np.all(extended >= base)

    def test_permutation_invariance(self):
        grid = make_dyadic_grid(3)
        key = StreamKey(18)
        from besselbr.paths import sample_bm

        paths = [sample_bm(grid, key.with_replicate(r)) for r in range(6)]
        forward = max_process(paths).values.tobytes()
        backward = max_process(paths[::-1]).values.tobytes()
        shuffled = max_process([paths[i] for i in (3, 0, 5, 1, 4, 2)]).values.tobytes()
        assert forward == backward == shuffled

    def test_usage_errors(self):
        with pytest.raises(ValueError):
            max_process([])
        a = SamplePath(make_dyadic_grid(1), np.zeros(3))
        b = SamplePath(make_dyadic_grid(2), np.zeros(5))
        with pytest.raises(ValueError):
            max_process([a, b])
