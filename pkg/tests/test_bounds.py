import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from neartoeplitz.bounds import (
    BoundCase,
    RowsumCase,
    classify,
    inf_norm_upper_bound,
    predicted_sign_pattern,
    rowsum_bounds,
    rowsum_margins,
    sample_b_tilde,
)
from neartoeplitz.errors import CaseOutOfScope, SingularMatrix
from neartoeplitz.gamma import gamma, gamma_ratio
from neartoeplitz.inverse import NearToeplitzSpec, infinity_norm_exact, inverse_dense, is_nonsingular, rowsums


def half_ratio(n, b):
    return gamma_ratio((n + 1) / 2, n + 1, abs(b))


class TestNormBound:
    def test_table5_spec(self):
        r = inf_norm_upper_bound(NearToeplitzSpec(20, 4.0, 4.0))
        assert r.case_id is BoundCase.B_POS_GT
        expected = 0.5 * (1 - 1.5 * half_ratio(20, 4.0))
        assert r.bound == pytest.approx(expected, rel=1e-14)
        assert r.bound == pytest.approx(0.5, rel=1e-5)

    @pytest.mark.parametrize("n", [3, 10, 40])
    def test_eq_case(self, n):
        r = inf_norm_upper_bound(NearToeplitzSpec(n, 2.5, 1.5))
        assert (r.case_id, r.bound) == (BoundCase.B_POS_EQ, 2.0)

    def test_table6_spec(self):
        r = inf_norm_upper_bound(NearToeplitzSpec(50, -4.0, -4.0))
        assert r.case_id is BoundCase.B_NEG_LT
        assert r.bound == pytest.approx(0.5, rel=1e-12)

    def test_mid_case(self):
        r = inf_norm_upper_bound(NearToeplitzSpec(9, 4.0, 1.0))
        assert (r.case_id, r.bound) == (BoundCase.B_POS_MID, 2.5)

    def test_sub_case_matches_raw_formula(self):
        n, b, bt = 10, 3.0, 0.09
        beta = bt - b
        g = lambda k: gamma(k, b)
        k = beta / ((g(n + 1) + beta * g(n)) ** 2 - (beta * g(1)) ** 2)
        raw = (
            (g(n + 1) - 2 * gamma((n + 1) / 2, b)) / ((b - 2) * g(n + 1))
            + abs(k) / (b - 2) * (g(n) + g(1)) * (g(n + 1) - g(n) - g(1))
            + abs(k * beta) / (b - 2) * g(n - 1) * g(n + 1)
        )
        r = inf_norm_upper_bound(NearToeplitzSpec(n, b, bt))
        assert r.case_id is BoundCase.B_POS_SUB
        assert r.bound == pytest.approx(raw, rel=1e-10)

    @pytest.mark.parametrize("n", [5, 6, 11, 20])
    def test_negative_sub_case_matches_signed_formula(self, n):
        # the b < -2, b_tilde > -1 bound written with signed gammas; the
        # gamma_{(n+1)/2}/gamma_{n+1} ratio is taken with |b| as for every b < -2 bound
        b, bt = -3.0, 0.3
        beta = bt - b
        g = lambda k: gamma(k, b)
        k = -beta / ((g(n + 1) + beta * g(n)) ** 2 - (beta * g(1)) ** 2)
        literal = (
            -(1 - 2 * half_ratio(n, b)) / (b + 2)
            - abs(k) / (b + 2) * ((-1) ** (n + 1) * g(n) + g(1)) * ((-1) ** n * (g(n + 1) + g(n)) - g(1))
            - abs(k * beta) / (b + 2) * g(n - 1) * g(n + 1)
        )
        r = inf_norm_upper_bound(NearToeplitzSpec(n, b, bt))
        assert r.case_id is BoundCase.B_NEG_SUP
        assert r.bound == pytest.approx(literal, rel=1e-10)

    @pytest.mark.parametrize("n", [5, 8])
    def test_negative_upper_bound_1_literal(self, n):
        b = -3.5
        rho = half_ratio(n, b)
        cases = {
            -4.0: (2 * (1 + 4.0 + b) * (b + 1) / -4.0 * rho - 1) / (b + 2),
            b + 1: -1 / (b + 2),
            -1.5: (1 - b) / (-1.5 * b - 2),
        }
        for bt, expected in cases.items():
            assert inf_norm_upper_bound(NearToeplitzSpec(n, b, bt)).bound == pytest.approx(expected, rel=1e-13)

    def test_singular_raises(self):
        with pytest.raises(SingularMatrix):
            inf_norm_upper_bound(NearToeplitzSpec(3, 2.5, 0.8))

    @settings(max_examples=300, deadline=None)
    @given(
        st.integers(3, 60),
        st.one_of(st.floats(2.05, 12.0), st.floats(-12.0, -2.05)),
        st.floats(-8.0, 10.0),
    )
    def test_dominance(self, n, b, bt):
        spec = NearToeplitzSpec(n, b, bt)
        assume(is_nonsingular(spec, 1e-3))
        r = inf_norm_upper_bound(spec)
        assert math.isfinite(r.bound)
        assert r.bound >= infinity_norm_exact(spec) - 1e-9


class TestClassify:
    @pytest.mark.parametrize(
        "b,bt,case",
        [
            (4.0, 3.5, BoundCase.B_POS_GT),
            (4.0, 3.0, BoundCase.B_POS_EQ),
            (4.0, 1.0, BoundCase.B_POS_MID),
            (4.0, 0.999, BoundCase.B_POS_SUB),
            (-4.0, -2.0, BoundCase.B_NEG_MID),
            (-4.0, -3.0, BoundCase.B_NEG_EQ),
            (-4.0, -1.0, BoundCase.B_NEG_MID),
            (-4.0, -0.999, BoundCase.B_NEG_SUP),
            (-4.0, -5.0, BoundCase.B_NEG_LT),
        ],
    )
    def test_edges(self, b, bt, case):
        assert classify(NearToeplitzSpec(7, b, bt)) is case

    @given(st.one_of(st.floats(2.05, 12.0), st.floats(-12.0, -2.05)), st.floats(-20.0, 20.0))
    def test_partition(self, b, bt):
        # exactly one predicate holds
        plus_b, plus_bt = abs(b), bt if b > 0 else -bt
        preds = {
            BoundCase.B_POS_GT: plus_bt > plus_b - 1 and not math.isclose(plus_bt, plus_b - 1, rel_tol=1e-12),
            BoundCase.B_POS_EQ: math.isclose(plus_bt, plus_b - 1, rel_tol=1e-12),
            BoundCase.B_POS_MID: 1 <= plus_bt < plus_b - 1 and not math.isclose(plus_bt, plus_b - 1, rel_tol=1e-12),
            BoundCase.B_POS_SUB: plus_bt < 1,
        }
        assert sum(preds.values()) == 1
        assert classify(NearToeplitzSpec(5, b, bt)).positive is next(c for c, v in preds.items() if v)


class TestRowsumBounds:
    def test_case_ii(self):
        rb = rowsum_bounds(NearToeplitzSpec(5, 2.5, 1.5))
        assert (rb.lower, rb.upper, rb.case_id) == (2.0, 2.0, RowsumCase.II)

    def test_case_i(self):
        rb = rowsum_bounds(NearToeplitzSpec(5, 4.0, 5.0))
        assert rb.case_id is RowsumCase.I
        assert rb.lower == pytest.approx(0.25, rel=1e-15)
        assert rb.upper == pytest.approx(0.5 * (1 - 2 * 2 * 3 / 5 * half_ratio(5, 4.0)), rel=1e-14)

    def test_case_iii(self):
        rb = rowsum_bounds(NearToeplitzSpec(5, 4.0, 1.0))
        assert rb.case_id is RowsumCase.III
        assert rb.upper == pytest.approx(2.5, rel=1e-15)

    def test_case_iv(self):
        b = 4.0
        r1 = 2 + math.sqrt(3)
        r2 = 1 / r1
        rb = rowsum_bounds(NearToeplitzSpec(7, b, -1.0))
        assert rb.case_id is RowsumCase.IV
        assert rb.lower == pytest.approx((r1 - 1) / ((b - 2) * (-1 - r2)), rel=1e-14)

    @pytest.mark.parametrize("bt", [0.3, 0.5, 0.2679492])
    def test_gap_is_out_of_scope(self, bt):
        with pytest.raises(CaseOutOfScope):
            rowsum_bounds(NearToeplitzSpec(7, 4.0, bt))

    def test_negative_b_out_of_scope(self):
        with pytest.raises(CaseOutOfScope):
            rowsum_bounds(NearToeplitzSpec(7, -4.0, -4.0))

    @pytest.mark.parametrize("bt", [6.0, 2.0, -0.5, -3.0])
    def test_margins_are_differences(self, bt):
        spec = NearToeplitzSpec(9, 2.5, bt)
        rb = rowsum_bounds(spec)
        lo, up = rowsum_margins(spec)
        r = rowsums(spec)
        np.testing.assert_allclose(lo, r - rb.lower, atol=1e-13)
        np.testing.assert_allclose(up, rb.upper - r, atol=1e-13)


class TestSignPattern:
    def test_positive(self):
        spec = NearToeplitzSpec(4, 3.0, 2.0)
        np.testing.assert_array_equal(predicted_sign_pattern(spec), np.ones((4, 4)))
        assert np.all(inverse_dense(spec) > 0)

    def test_checkerboard(self):
        spec = NearToeplitzSpec(4, -3.0, -2.0)
        pattern = predicted_sign_pattern(spec)
        np.testing.assert_array_equal(np.sign(inverse_dense(spec)), pattern)
        assert pattern[0, 0] == -1 and pattern[1, 0] == 1

    def test_toeplitz(self):
        assert np.all(predicted_sign_pattern(NearToeplitzSpec(3, 2.5, 2.5)) == 1)

    @pytest.mark.parametrize("b,bt", [(3.0, 0.5), (-3.0, -0.5), (3.0, -2.0)])
    def test_out_of_scope(self, b, bt):
        with pytest.raises(CaseOutOfScope):
            predicted_sign_pattern(NearToeplitzSpec(5, b, bt))


class TestSampling:
    @pytest.mark.parametrize("case", list(BoundCase))
    def test_samples_fall_in_case(self, case):
        b = 3.0 if case.positive is case else -3.0
        rng = np.random.default_rng(7)
        for n in (3, 10, 33):
            for bt in sample_b_tilde(case, n, b, 20, rng):
                spec = NearToeplitzSpec(n, b, float(bt))
                assert classify(spec) is case
                assert is_nonsingular(spec, 0.05)

    def test_deterministic(self):
        a = sample_b_tilde(BoundCase.B_POS_SUB, 9, 2.5, 5, np.random.default_rng(3))
        b = sample_b_tilde(BoundCase.B_POS_SUB, 9, 2.5, 5, np.random.default_rng(3))
        np.testing.assert_array_equal(a, b)

    def test_wrong_sign(self):
        with pytest.raises(ValueError):
            sample_b_tilde(BoundCase.B_NEG_LT, 9, 2.5, 5, np.random.default_rng(3))
