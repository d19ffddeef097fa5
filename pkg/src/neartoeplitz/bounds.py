"""Case-dispatched upper bounds on the infinity norm of the near-Toeplitz inverse.

Four closed-form bounds cover b > 2, split by where b_tilde sits relative to
1 and b - 1.  The b < -2 cases are the same bounds applied to the reflected
matrix (b -> -b, b_tilde -> -b_tilde), whose inverse has the same absolute
entries.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import CaseOutOfScope
from .gamma import plus_ratio
from .inverse import (
    DEFAULT_SINGULARITY_TOL,
    NearToeplitzSpec,
    _Frame,
    _require_nonsingular,
    rowsum_excess,
    singular_thresholds,
)

__all__ = [
    "BoundCase",
    "BoundReport",
    "RowsumCase",
    "RowsumBounds",
    "EQ_TOL",
    "classify",
    "inf_norm_upper_bound",
    "rowsum_bounds",
    "rowsum_margins",
    "predicted_sign_pattern",
    "case_interval",
    "sample_b_tilde",
]

# relative tolerance for treating b_tilde as exactly b - 1 (or b + 1)
EQ_TOL = 1e-12


class BoundCase(enum.Enum):
    B_POS_GT = "B_POS_GT"
    B_POS_EQ = "B_POS_EQ"
    B_POS_MID = "B_POS_MID"
    B_POS_SUB = "B_POS_SUB"
    B_NEG_LT = "B_NEG_LT"
    B_NEG_EQ = "B_NEG_EQ"
    B_NEG_MID = "B_NEG_MID"
    B_NEG_SUP = "B_NEG_SUP"

    @property
    def positive(self) -> "BoundCase":
        """The b > 2 case this one reflects onto."""
        return _REFLECT.get(self, self)


_REFLECT = {
    BoundCase.B_NEG_LT: BoundCase.B_POS_GT,
    BoundCase.B_NEG_EQ: BoundCase.B_POS_EQ,
    BoundCase.B_NEG_MID: BoundCase.B_POS_MID,
    BoundCase.B_NEG_SUP: BoundCase.B_POS_SUB,
}

_INTERVALS = {
    BoundCase.B_POS_GT: "b > 2, b_tilde > b - 1",
    BoundCase.B_POS_EQ: "b > 2, b_tilde = b - 1",
    BoundCase.B_POS_MID: "b > 2, 1 <= b_tilde < b - 1",
    BoundCase.B_POS_SUB: "b > 2, b_tilde < 1",
    BoundCase.B_NEG_LT: "b < -2, b_tilde < b + 1",
    BoundCase.B_NEG_EQ: "b < -2, b_tilde = b + 1",
    BoundCase.B_NEG_MID: "b < -2, b + 1 < b_tilde <= -1",
    BoundCase.B_NEG_SUP: "b < -2, b_tilde > -1",
}


def case_interval(case: BoundCase) -> str:
    return _INTERVALS[case]


@dataclass(frozen=True)
class BoundReport:
    case_id: BoundCase
    bound: float
    interval: str


def _is_edge(b_tilde: float, edge: float, eq_tol: float) -> bool:
    return abs(b_tilde - edge) <= eq_tol * max(1.0, abs(edge))


def classify(spec: NearToeplitzSpec, eq_tol: float = EQ_TOL) -> BoundCase:
    """Which of the eight cases the (b, b_tilde) pair falls in."""
    plus = spec.positive()
    b, bt = plus.b, plus.b_tilde
    if _is_edge(bt, b - 1.0, eq_tol):
        case = BoundCase.B_POS_EQ
    elif bt > b - 1.0:
        case = BoundCase.B_POS_GT
    elif bt >= 1.0:
        case = BoundCase.B_POS_MID
    else:
        case = BoundCase.B_POS_SUB
    if spec.b > 0:
        return case
    return next(neg for neg, pos in _REFLECT.items() if pos is case)


def _half_ratio(n: int, b_plus: float) -> float:
    """gamma_{(n+1)/2} / gamma_{n+1} with the roots of |b|."""
    return float(plus_ratio((n + 1) / 2.0, n + 1, math.acosh(b_plus / 2.0)))


def _gt_bound(n: int, b: float, bt: float) -> float:
    rho = _half_ratio(n, b)
    return (1.0 - 2.0 * (1.0 + bt - b) * (b - 1.0) / bt * rho) / (b - 2.0)


def _sub_bound(plus: NearToeplitzSpec) -> float:
    """Three-term bound for b_tilde < 1, every gamma product divided by gamma_{n+1}^2."""
    f = _Frame(plus)
    n, b, beta = plus.n, plus.b, plus.beta
    gn, g1, gnm1 = (float(f.g(k)) for k in (n, 1, n - 1))
    k_scaled = beta / f.delta  # K * gamma_{n+1}^2
    rho = _half_ratio(n, b)
    return (
        (1.0 - 2.0 * rho) / (b - 2.0)
        + abs(k_scaled) * (gn + g1) * (1.0 - gn - g1) / (b - 2.0)
        + abs(k_scaled * beta) * gnm1 / (b - 2.0)
    )


def inf_norm_upper_bound(
    spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL, eq_tol: float = EQ_TOL
) -> BoundReport:
    """Upper bound on max_i sum_j |t_ij| and the case that produced it."""
    _require_nonsingular(spec, tol)
    case = classify(spec, eq_tol)
    plus = spec.positive()
    n, b, bt = plus.n, plus.b, plus.b_tilde
    pos = case.positive
    if pos is BoundCase.B_POS_GT:
        bound = _gt_bound(n, b, bt)
    elif pos is BoundCase.B_POS_EQ:
        bound = 1.0 / (b - 2.0)
    elif pos is BoundCase.B_POS_MID:
        bound = (b + 1.0) / (bt * b - 2.0)
    else:
        bound = _sub_bound(plus)
    return BoundReport(case, bound, case_interval(case))


class RowsumCase(enum.Enum):
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"


@dataclass(frozen=True)
class RowsumBounds:
    """Bounds on every row sum, stored as offsets from 1/(b-2).

    The row sums approach 1/(b-2) exponentially fast in the distance to the
    nearest end row, so the offsets carry the information that the absolute
    values lose to rounding.
    """

    base: float
    lower_excess: float
    upper_excess: float
    case_id: RowsumCase
    strict: bool = True

    @property
    def lower(self) -> float:
        return self.base + self.lower_excess

    @property
    def upper(self) -> float:
        return self.base + self.upper_excess


def rowsum_bounds(spec: NearToeplitzSpec, eq_tol: float = EQ_TOL) -> RowsumBounds:
    """Lower/upper bounds holding for every row sum, b > 2.

    Cases: (i) b_tilde > b-1, (ii) b_tilde = b-1 (exact), (iii) 2/b < b_tilde < b-1,
    (iv) b_tilde < r2.  Anything else raises CaseOutOfScope.
    """
    if spec.b < 0:
        raise CaseOutOfScope("row sum bounds are stated for b > 2 only")
    n, b, bt = spec.n, spec.b, spec.b_tilde
    base = 1.0 / (b - 2.0)
    rho = _half_ratio(n, b)
    d = b - 1.0 - bt  # sign of d decides which side of the constant case we are on
    if _is_edge(bt, b - 1.0, eq_tol):
        return RowsumBounds(base, 0.0, 0.0, RowsumCase.II, strict=False)
    if bt > b - 1.0:
        lower = d / ((bt - 1.0) * (b - 2.0))
        upper = 2.0 * d * (b - 1.0) / (bt * (b - 2.0)) * rho
        return RowsumBounds(base, lower, upper, RowsumCase.I)
    if 2.0 / b < bt < b - 1.0:
        lower = 2.0 * d * (b - 1.0) / (bt * (b - 2.0)) * rho
        upper = b * d / ((bt * b - 2.0) * (b - 2.0))
        return RowsumBounds(base, lower, upper, RowsumCase.III)
    r1 = 0.5 * (b + math.sqrt((b - 2.0) * (b + 2.0)))
    r2 = 1.0 / r1
    if bt < r2:
        lower = d / ((b - 2.0) * (bt - r2))
        upper = 2.0 * d * (b - 1.0) / ((bt - 1.0) * (b - 2.0)) * rho
        return RowsumBounds(base, lower, upper, RowsumCase.IV)
    raise CaseOutOfScope(f"no row sum bounds for b_tilde={bt!r} in [r2, 2/b] = [{r2!r}, {2.0 / b!r}] at b={b!r}")


def rowsum_margins(spec: NearToeplitzSpec, tol: float = DEFAULT_SINGULARITY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """(R(i) - lower, upper - R(i)) for every row, without cancellation.

    Both are positive wherever the row sum bounds hold strictly.  In case (iv)
    the lower margin at the end rows is proportional to r1 - gamma_{n+1}/(gamma_n + gamma_1)
    = gamma_1 (r1 - r2^n) / (gamma_n + gamma_1), which is formed directly.
    """
    rb = rowsum_bounds(spec)
    excess = rowsum_excess(spec, tol)
    lower = excess - rb.lower_excess
    upper = rb.upper_excess - excess
    if rb.case_id is RowsumCase.IV:
        n, b, beta = spec.n, spec.b, spec.beta
        theta = math.acosh(b / 2.0)
        r1 = math.exp(theta)
        g = lambda k: float(plus_ratio(k, n, theta))  # gamma_k / gamma_n
        x = float(plus_ratio(n + 1, n, theta)) / (1.0 + g(1))  # gamma_{n+1}/(gamma_n + gamma_1)
        r1_minus_x = g(1) * (r1 - math.exp(-n * theta)) / (1.0 + g(1))
        end_margin = -r1_minus_x * (1.0 + beta) / ((b - 2.0) * (x + beta) * (beta + r1))
        i = np.arange(1, n + 1)
        scale = (b - spec.b_tilde - 1.0) / (b - 2.0) / (1.0 + beta / x)
        # R(i) - R(1) = scale * [(g_i + g_{n+1-i}) - (g_1 + g_n)] with g relative to gamma_{n+1}
        gi = plus_ratio(i, n + 1, theta) + plus_ratio(n + 1 - i, n + 1, theta)
        g_end = float(plus_ratio(1, n + 1, theta) + plus_ratio(n, n + 1, theta))
        lower = scale * (gi - g_end) + end_margin
    return lower, upper


def predicted_sign_pattern(spec: NearToeplitzSpec) -> np.ndarray:
    """Entry signs (+1/-1) of the inverse where they are known in advance."""
    n = spec.n
    if spec.b > 0 and spec.b_tilde >= 1.0:
        return np.ones((n, n))
    if spec.b < 0 and spec.b_tilde <= -1.0:
        idx = np.arange(1, n + 1)
        diff = idx[:, None] - idx[None, :] - 1
        return np.where(diff % 2, -1.0, 1.0)
    raise CaseOutOfScope(f"no sign pattern is established for b={spec.b!r}, b_tilde={spec.b_tilde!r}")


def _plus_range(case: BoundCase, b: float, span: float) -> tuple[float, float]:
    pos = case.positive
    if pos is BoundCase.B_POS_GT:
        return b - 1.0, b - 1.0 + span
    if pos is BoundCase.B_POS_MID:
        return 1.0, b - 1.0
    if pos is BoundCase.B_POS_SUB:
        return 1.0 - span, 1.0
    return b - 1.0, b - 1.0


def sample_b_tilde(
    case: BoundCase,
    n: int,
    b: float,
    count: int,
    rng: np.random.Generator,
    span: float = 4.0,
    exclusion: float = 0.05,
) -> np.ndarray:
    """``count`` corner values drawn uniformly from the case interval.

    Open interval ends are never drawn.  Draws within ``exclusion`` of a
    singular corner value are rejected and redrawn.  The EQ cases have a single
    admissible value, returned ``count`` times.
    """
    if (case.positive is case) != (b > 0):
        raise ValueError(f"case {case.value} does not apply to b={b!r}")
    b_plus = abs(b)
    lo, hi = _plus_range(case, b_plus, span)
    sign = 1.0 if b > 0 else -1.0
    if lo == hi:
        return np.full(count, sign * lo)
    th = singular_thresholds(NearToeplitzSpec(n, b_plus, b_plus))
    bad = np.array([th.b_tilde_1, th.b_tilde_2])
    closed_low = case.positive is BoundCase.B_POS_MID
    out: list[float] = []
    while len(out) < count:
        x = rng.uniform(lo, hi)
        if (x == lo and not closed_low) or x == hi:
            continue
        if np.min(np.abs(x - bad)) <= exclusion:
            continue
        out.append(x)
    return sign * np.asarray(out)
