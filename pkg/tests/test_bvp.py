import math
import warnings

import numpy as np
import pytest

from neartoeplitz.bvp import (
    BvpProblem,
    RhsKind,
    expected_rate,
    fisher_rhs,
    fixed_point_solve,
    lipschitz_constant,
    tridiagonal_solve,
)
from neartoeplitz.errors import Diverged, SingularMatrix, UnboundedRange
from neartoeplitz.inverse import NearToeplitzSpec, infinity_norm_exact, inverse_dense
from neartoeplitz.oracle import build_matrix

TABLE5 = NearToeplitzSpec(20, 4.0, 4.0)
TABLE6 = NearToeplitzSpec(50, -4.0, -4.0)


class TestSolve:
    def test_examples(self):
        np.testing.assert_allclose(tridiagonal_solve(NearToeplitzSpec(3, 2.5, 1.5), np.ones(3)), [2, 2, 2], rtol=1e-14)
        spec = NearToeplitzSpec(3, 2.5, 2.5)
        np.testing.assert_allclose(tridiagonal_solve(spec, [1.0, 0, 0]), inverse_dense(spec)[:, 0], rtol=1e-14)
        spec = NearToeplitzSpec(4, -4.0, -4.0)
        x = np.arange(1.0, 5.0)
        np.testing.assert_allclose(tridiagonal_solve(spec, build_matrix(spec) @ x), x, rtol=1e-14)

    @pytest.mark.parametrize("spec", [NearToeplitzSpec(n, b, bt) for n in (5, 33, 64) for b, bt in ((2.1, 0.3), (-3.0, -1.0), (10.0, 15.0))])
    def test_agrees_with_inverse(self, spec):
        rhs = np.random.default_rng(spec.n).standard_normal(spec.n)
        x = tridiagonal_solve(spec, rhs)
        np.testing.assert_allclose(x, inverse_dense(spec) @ rhs, rtol=0, atol=1e-9 * np.abs(x).max())
        assert np.max(np.abs(build_matrix(spec) @ x - rhs)) <= 1e-10 * np.max(np.abs(rhs))

    def test_shape(self):
        with pytest.raises(ValueError):
            tridiagonal_solve(TABLE5, np.ones(3))

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            tridiagonal_solve(NearToeplitzSpec(3, 2.5, 0.0), np.ones(3))


class TestRhs:
    def test_fisher(self):
        np.testing.assert_array_equal(fisher_rhs([0.0, 0.0], 5), [0.0, 0.0])
        np.testing.assert_array_equal(fisher_rhs([0.5], 2), [0.5])
        np.testing.assert_array_equal(fisher_rhs([1.0], 7), [0.0])

    def test_lipschitz(self):
        assert lipschitz_constant(RhsKind.FISHER, 2) == 2
        assert lipschitz_constant("fisher", 1) == 1
        assert lipschitz_constant(RhsKind.GELFAND_BRATU, 1) == pytest.approx(math.e, rel=1e-15)
        assert lipschitz_constant(RhsKind.FISHER, 1, (0.25, 0.5)) == 0.5
        with pytest.raises(UnboundedRange):
            lipschitz_constant(RhsKind.GELFAND_BRATU, 1, (0.0, math.inf))


class TestProblem:
    def test_validation(self):
        with pytest.raises(ValueError):
            BvpProblem(TABLE5, 0.0, 1.0)
        with pytest.raises(ValueError):
            BvpProblem(TABLE5, 1.0, -1.0)
        with pytest.raises(ValueError):
            BvpProblem(TABLE5, 1.0, 1.0, c_hat=0.0)

    @pytest.mark.parametrize("k,rate", [(1, 0.005), (32, 0.16)])
    def test_expected_rate_table5(self, k, rate):
        assert expected_rate(BvpProblem(TABLE5, 2.0, k)) == pytest.approx(rate, rel=1e-2)

    def test_expected_rate_table6(self):
        assert expected_rate(BvpProblem(TABLE6, 1.0, 1)) == pytest.approx(0.0002, rel=1e-2)


class TestFixedPoint:
    def test_table5_row(self):
        r = fixed_point_solve(BvpProblem(TABLE5, 2.0, 1.0))
        assert r.converged
        assert r.numerical_rate == pytest.approx(0.0048, rel=0.2)
        assert abs(r.iterations - 4) <= 2

    def test_zero_start(self):
        r = fixed_point_solve(BvpProblem(TABLE5, 2.0, 1.0), u0=np.zeros(20))
        assert r.converged and r.iterations == 1
        np.testing.assert_array_equal(r.solution, np.zeros(20))

    def test_table6_row(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            r = fixed_point_solve(BvpProblem(TABLE6, 1.0, 81.0))
        assert r.converged
        assert abs(r.iterations - 5) <= 2
        assert r.numerical_rate <= r.expected_rate

    def test_warns_outside_unit_interval(self):
        with pytest.warns(RuntimeWarning, match="left"):
            fixed_point_solve(BvpProblem(TABLE6, 1.0, 1.0))

    def test_contraction_law(self):
        for k in (0.5, 4.0, 32.0):
            problem = BvpProblem(TABLE5, 2.0, k)
            r = fixed_point_solve(problem)
            cap = problem.h**2 * r.lipschitz * infinity_norm_exact(TABLE5) + 1e-9
            assert max(r.ratios) <= cap
            assert r.numerical_rate <= r.expected_rate + 1e-6

    def test_rate_scales_linearly(self):
        rates = [fixed_point_solve(BvpProblem(TABLE5, 2.0, k)).numerical_rate for k in (1, 2, 4, 8, 16, 32)]
        per_k = np.array(rates) / np.array([1, 2, 4, 8, 16, 32])
        assert per_k.max() / per_k.min() <= 1.05

    def test_diverges(self):
        # h^2 k ||T^-1|| >> 1
        problem = BvpProblem(NearToeplitzSpec(10, 2.1, 2.1), 10.0, 50.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            with pytest.raises(Diverged):
                fixed_point_solve(problem, u0=np.full(10, 0.3))

    def test_max_iter(self):
        r = fixed_point_solve(BvpProblem(TABLE5, 2.0, 32.0), tol=1e-300, max_iter=3)
        assert not r.converged and r.iterations == 3

    def test_c_hat_rescales(self):
        # T_hat = 2 T_tilde halves the effective step, hence the rate
        base = fixed_point_solve(BvpProblem(TABLE5, 2.0, 8.0))
        scaled = fixed_point_solve(BvpProblem(TABLE5, 2.0, 8.0, c_hat=-2.0))
        assert scaled.numerical_rate == pytest.approx(base.numerical_rate / 2, rel=0.05)
        assert scaled.expected_rate == pytest.approx(base.expected_rate / 2, rel=1e-12)

    def test_bratu(self):
        problem = BvpProblem(TABLE5, 1.0, 1.0, RhsKind.GELFAND_BRATU)
        r = fixed_point_solve(problem, u0=np.zeros(20))
        assert r.converged
        assert np.all(r.solution > 0)
