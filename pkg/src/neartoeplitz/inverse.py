"""Closed-form inverse of the near-Toeplitz matrix tridiag(-1, b, -1) with corners b_tilde.

The inverse is the rank-2 (Sherman-Morrison) update of the Toeplitz inverse.
For b > 2 and i >= j the entries factor as

    t_ij = C (gamma_{n+1-i} + beta gamma_{n-i}) (gamma_j + beta gamma_{j-1}),  beta = b_tilde - b

Every quantity is evaluated in ratio form, normalised by gamma_{n+1}, so nothing
overflows for large n.  Matrices with b < -2 are mapped to the b > 2 case
through ``t_ij = (-1)**(i-j-1) * t_ij(+)`` where ``(+)`` denotes the matrix with
``b -> -b`` and ``b_tilde -> -b_tilde``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.signal import lfilter

from .errors import CaseOutOfScope, IndexOutOfRange, SingularMatrix
from .gamma import _check_b, decay, plus_ratio, scaled_sum_gamma_squares

__all__ = [
    "DEFAULT_SINGULARITY_TOL",
    "NearToeplitzSpec",
    "InverseFactors",
    "SingularThresholds",
    "inverse_factors",
    "singular_thresholds",
    "is_nonsingular",
    "toeplitz_inverse_entry",
    "toeplitz_trace",
    "inverse_entry",
    "inverse_dense",
    "trace",
    "rowsum",
    "rowsums",
    "rowsum_excess",
    "capacitance_determinant",
    "rowsum_extrema",
    "row_abs_sums",
    "infinity_norm_exact",
]

DEFAULT_SINGULARITY_TOL = 1e-9


@dataclass(frozen=True)
class NearToeplitzSpec:
    """The n x n matrix tridiag(-1, b, -1) with both corner entries set to b_tilde."""

    n: int
    b: float
    b_tilde: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 3:
            raise ValueError(f"n must be an integer >= 3, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "b", _check_b(self.b))
        b_tilde = float(self.b_tilde)
        if not math.isfinite(b_tilde):
            raise ValueError(f"b_tilde must be finite, got {self.b_tilde!r}")
        object.__setattr__(self, "b_tilde", b_tilde)

    @property
    def beta(self) -> float:
        return self.b_tilde - self.b

    def reflected(self) -> "NearToeplitzSpec":
        return NearToeplitzSpec(self.n, -self.b, -self.b_tilde)

    def positive(self) -> "NearToeplitzSpec":
        """The b > 2 representative of this spec (itself when b > 2)."""
        return self if self.b > 0 else self.reflected()


class _Frame:
    """Normalised gamma machinery for a spec with b > 2."""

    def __init__(self, spec: NearToeplitzSpec):
        assert spec.b > 0
        self.n = spec.n
        self.b = spec.b
        self.beta = spec.beta
        self.theta = math.acosh(spec.b / 2.0)

    def g(self, k):
        """gamma_k / gamma_{n+1}."""
        return plus_ratio(k, self.n + 1, self.theta)

    def w(self, k):
        """(gamma_k + beta gamma_{k-1}) / gamma_k."""
        k = np.asarray(k, dtype=float)
        return 1.0 + self.beta * plus_ratio(k - 1, k, self.theta)

    @cached_property
    def delta(self) -> float:
        gn, g1 = float(self.g(self.n)), float(self.g(1))
        return (1.0 + self.beta * (gn + g1)) * (1.0 + self.beta * (gn - g1))

    @cached_property
    def norm_const(self) -> float:
        """1 / (s(1) s(n+1) delta), the common factor of every entry."""
        return 1.0 / (float(decay(1, self.theta)) * float(decay(self.n + 1, self.theta)) * self.delta)

    def lower_entries(self, i, j):
        """Entries (i, j) with i >= j, broadcasting over arrays."""
        i = np.asarray(i, dtype=float)
        j = np.asarray(j, dtype=float)
        n1 = self.n + 1
        head = np.exp((j - i - 1.0) * self.theta) * decay(j, self.theta) * decay(n1 - i, self.theta)
        return head * self.w(n1 - i) * self.w(j) * self.norm_const


def _signed_ratio(spec: NearToeplitzSpec, j, k):
    """gamma_j / gamma_k for the spec's own b (integer indices)."""
    value = plus_ratio(j, k, math.acosh(abs(spec.b) / 2.0))
    if spec.b < 0:
        value = value * np.where((np.asarray(j) - np.asarray(k)) % 2, -1.0, 1.0)
    return value


def _log_gamma_plus(k: int, theta: float) -> float:
    x = k * theta
    return x + math.log(-math.expm1(-2.0 * x))


@dataclass(frozen=True)
class InverseFactors:
    """Sherman-Morrison scalars and the compact-form constants.

    ``C``, ``K`` and ``K2`` carry inverse powers of gamma_{n+1} and underflow to
    zero for very large n; the ratio-form routines never use them.
    """

    beta: float
    m11: float
    m12: float
    delta: float
    C: float
    K: float
    K1: float
    K2: float


def _m_pair(spec: NearToeplitzSpec) -> tuple[float, float]:
    n, beta = spec.n, spec.beta
    m11 = 1.0 + beta * float(_signed_ratio(spec, n, n + 1))
    m12 = beta * float(_signed_ratio(spec, 1, n + 1))
    return m11, m12


def capacitance_determinant(spec: NearToeplitzSpec) -> float:
    """Delta = m11^2 - m12^2; zero exactly at the singular corner values."""
    m11, m12 = _m_pair(spec)
    return (m11 + m12) * (m11 - m12)


def inverse_factors(spec: NearToeplitzSpec) -> InverseFactors:
    n, beta = spec.n, spec.beta
    theta = math.acosh(abs(spec.b) / 2.0)
    m11, m12 = _m_pair(spec)
    delta = (m11 + m12) * (m11 - m12)
    sign = -1.0 if (spec.b < 0 and n % 2) else 1.0
    inv_gn1 = sign * math.exp(-_log_gamma_plus(n + 1, theta))
    gamma1 = math.sqrt((spec.b - 2.0) * (spec.b + 2.0))
    if delta == 0.0:
        raise SingularMatrix(f"capacitance determinant vanishes for {spec}")
    return InverseFactors(
        beta=beta,
        m11=m11,
        m12=m12,
        delta=delta,
        C=inv_gn1 / (gamma1 * delta),
        K=beta * inv_gn1 * inv_gn1 / delta,
        K1=(m11 * m11 + m12 * m12) / delta,
        K2=beta * m11 * inv_gn1 / delta,
    )


@dataclass(frozen=True)
class SingularThresholds:
    """Corner values at which the matrix is singular."""

    b_tilde_1: float
    b_tilde_2: float
    separation: float  # |b_tilde_1 - b_tilde_2|, resolved even when the two round to the same double


def singular_thresholds(spec: NearToeplitzSpec) -> SingularThresholds:
    """b_tilde_1 = b - g_{n+1}/(g_n + g_1) and b_tilde_2 = b - g_{n+1}/(g_n - g_1).

    Evaluated as (g_{n-1} +- g_2)/(g_n +- g_1), which follows from the
    three-term recurrence and keeps b_tilde_2 exactly 0 at n = 3.  Their
    difference is 2 g_{n+1} g_1 / (g_n^2 - g_1^2) in magnitude.
    """
    n = spec.n
    lo = float(_signed_ratio(spec, n - 1, n))
    two = float(_signed_ratio(spec, 2, n))
    one = float(_signed_ratio(spec, 1, n))
    up = abs(float(_signed_ratio(spec, n + 1, n)))
    sep = 2.0 * up * abs(one) / (1.0 - one * one)
    return SingularThresholds((lo + two) / (1.0 + one), (lo - two) / (1.0 - one), sep)


def _distance_to_singular(spec: NearToeplitzSpec) -> float:
    th = singular_thresholds(spec)
    return min(abs(spec.b_tilde - th.b_tilde_1), abs(spec.b_tilde - th.b_tilde_2))


def is_nonsingular(spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> bool:
    return _distance_to_singular(spec) > tol


def _require_nonsingular(spec: NearToeplitzSpec, tol: float) -> None:
    if not is_nonsingular(spec, tol):
        th = singular_thresholds(spec)
        raise SingularMatrix(
            f"b_tilde={spec.b_tilde!r} is within {tol:g} of a singular corner value "
            f"({th.b_tilde_1!r}, {th.b_tilde_2!r}) for n={spec.n}, b={spec.b!r}"
        )


def _check_ij(i, j, n: int) -> tuple[int, int]:
    for name, v in (("i", i), ("j", j)):
        if int(v) != v or not 1 <= v <= n:
            raise IndexOutOfRange(f"{name}={v!r} outside 1..{n}")
    return int(i), int(j)


def _sign_map(i: int, j: int) -> float:
    return -1.0 if (i - j - 1) % 2 else 1.0


def _entry(i: int, j: int, spec: NearToeplitzSpec) -> float:
    if i < j:
        i, j = j, i
    value = float(_Frame(spec.positive()).lower_entries(i, j))
    return value if spec.b > 0 else _sign_map(i, j) * value


def toeplitz_inverse_entry(i: int, j: int, n: int, b: float) -> float:
    """Entry (i, j) of the inverse of the pure Toeplitz matrix tridiag(-1, b, -1)."""
    spec = NearToeplitzSpec(n, b, b)
    i, j = _check_ij(i, j, n)
    return _entry(i, j, spec)


def inverse_entry(i: int, j: int, spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> float:
    i, j = _check_ij(i, j, spec.n)
    _require_nonsingular(spec, tol)
    return _entry(i, j, spec)


def inverse_dense(spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> np.ndarray:
    """The full inverse as an (n, n) array, built from the compact form."""
    _require_nonsingular(spec, tol)
    n = spec.n
    idx = np.arange(1, n + 1)
    ii, jj = np.meshgrid(idx, idx, indexing="ij")
    low = np.minimum(ii, jj)
    high = np.maximum(ii, jj)
    out = _Frame(spec.positive()).lower_entries(high, low)
    if spec.b < 0:
        out = out * np.where((ii - jj - 1) % 2, -1.0, 1.0)
    return out


def toeplitz_trace(n: int, b: float) -> float:
    """Trace of tridiag(-1, b, -1)^{-1}, b > 2.

    (n+1)/gamma_1 * (1 + 2 r2^(n+1)/gamma_{n+1}) - b/(b^2-4), where the bracket
    equals coth((n+1) theta).
    """
    if n < 1 or b <= 2:
        raise ValueError("toeplitz_trace needs n >= 1 and b > 2")
    theta = math.acosh(b / 2.0)
    gamma1 = math.sqrt((b - 2.0) * (b + 2.0))
    return (n + 1) / gamma1 / math.tanh((n + 1) * theta) - b / (gamma1 * gamma1)


def trace(spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> float:
    """Closed-form trace K1 * Tr(T^-1) - K2 * sum_i(gamma_i^2 + gamma_{n+1-i}^2)/gamma_{n+1}."""
    _require_nonsingular(spec, tol)
    plus = spec.positive()
    f = _Frame(plus)
    n, beta = plus.n, plus.beta
    p = 1.0 + beta * float(f.g(n))
    e = beta * float(f.g(1))
    delta = f.delta
    k1 = (p * p + e * e) / delta
    # K2 * S / gamma_{n+1} with both gamma_{n+1} factors cancelled
    k2_s = beta * p / delta * scaled_sum_gamma_squares(n, plus.b)
    value = k1 * toeplitz_trace(n, plus.b) - k2_s
    return value if spec.b > 0 else -value


def _excess(spec: NearToeplitzSpec, i) -> np.ndarray:
    n, b, beta = spec.n, spec.b, spec.beta
    num = _signed_ratio(spec, i, n + 1) + _signed_ratio(spec, n + 1 - i, n + 1)
    den = 1.0 + beta * float(_signed_ratio(spec, n, n + 1) + _signed_ratio(spec, 1, n + 1))
    return (b - spec.b_tilde - 1.0) / (b - 2.0) * num / den


def rowsum_excess(spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> np.ndarray:
    """R(i) - 1/(b-2) for every row.

    Kept separate because it decays like r1^(-min(i, n+1-i)) and is lost to
    rounding once added to 1/(b-2).
    """
    _require_nonsingular(spec, tol)
    return _excess(spec, np.arange(1, spec.n + 1))


def rowsums(spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> np.ndarray:
    """Signed row sums R(1..n).

    R(i) = 1/(b-2) + (b - b_tilde - 1)/(b-2) * (g_i + g_{n+1-i}) / (1 + beta (g_n + g_1)),
    g_k = gamma_k / gamma_{n+1}; valid for both signs of b.
    """
    return 1.0 / (spec.b - 2.0) + rowsum_excess(spec, tol)


def rowsum(i: int, spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> float:
    i, _ = _check_ij(i, 1, spec.n)
    _require_nonsingular(spec, tol)
    return 1.0 / (spec.b - 2.0) + float(_excess(spec, i))


def _middle_rows(n: int) -> tuple[int, ...]:
    return ((n + 1) // 2,) if n % 2 else (n // 2, n // 2 + 1)


def rowsum_extrema(
    spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL, eq_tol: float = 1e-12
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Rows where the row sum is maximal and minimal, by case analysis on b_tilde.

    The sum is symmetric about (n+1)/2 and monotone on each half, so the
    extrema sit at the ends {1, n} or the middle row(s).  Returns
    ``(argmax_rows, argmin_rows)``; a constant row sum reports every row for both.
    """
    if spec.b < 0:
        raise CaseOutOfScope("row sum extrema are classified for b > 2 only")
    _require_nonsingular(spec, tol)
    n, b, bt = spec.n, spec.b, spec.b_tilde
    ends, middle = (1, n), _middle_rows(n)
    if abs(bt - (b - 1.0)) <= eq_tol * max(1.0, abs(b)):
        rows = tuple(range(1, n + 1))
        return rows, rows
    b1 = singular_thresholds(spec).b_tilde_1
    if bt > b - 1.0:
        return middle, ends
    if b1 < bt < b - 1.0:
        return ends, middle
    if bt < b1:
        return middle, ends
    raise CaseOutOfScope(f"b_tilde={bt!r} sits on the singular value {b1!r}")


def row_abs_sums(spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> np.ndarray:
    """sum_j |t_ij| for every row in O(n).

    Row i splits at the diagonal into |t_i1|/gamma_1 * sum_{j<=i}|gamma_j + beta gamma_{j-1}|
    and |t_ni|/gamma_1 * sum_{j>i}|gamma_{n+1-j} + beta gamma_{n-j}|.  Both partial
    sums are the same prefix sum, accumulated in the normalised form
    Q(i) = sum_{m<=i} exp((m-i) theta) s(m) |w_m|, which is a first-order filter.
    """
    _require_nonsingular(spec, tol)
    plus = spec.positive()
    f = _Frame(plus)
    n, theta = plus.n, f.theta
    m = np.arange(1, n + 1)
    s = decay(m, theta)
    aw = np.abs(f.w(m))
    q = lfilter([1.0], [1.0, -math.exp(-theta)], s * aw)
    q = np.concatenate(([0.0], q))  # q[k] = Q(k), Q(0) = 0
    rev = n + 1 - m
    left = math.exp(-theta) * decay(rev, theta) * aw[rev - 1] * q[m]
    right = math.exp(-2.0 * theta) * s * aw * q[n - m]
    return (left + right) * abs(f.norm_const)


def infinity_norm_exact(spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> float:
    """max_i sum_j |t_ij|; equal for a spec and its reflection."""
    return float(np.max(row_abs_sums(spec, tol)))
