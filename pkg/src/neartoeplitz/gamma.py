"""Characteristic roots and the gamma sequence of tridiag(-1, b, -1).

For |b| > 2 the polynomial ``-r**2 + b*r - 1`` has two real roots with
``r1 * r2 == 1``, and ``gamma_k = r1**k - r2**k``.  Writing ``|b| = 2 cosh(theta)``
gives ``gamma_k = 2 sinh(k theta)`` for b > 2, and for b < -2 the sign map
``gamma_k = (-1)**(k+1) * gamma_{k,+}`` relates the sequence to the one of ``|b|``.

Raw gamma values overflow once ``k * theta`` exceeds ~709.  Everything the rest
of the package needs is a ratio of gammas, and ratios are evaluated as

    gamma_j / gamma_k = exp((j - k) theta) * s(j) / s(k),   s(m) = 1 - exp(-2 m theta)

which never forms a large intermediate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GammaOverflow, UnsupportedRegime

__all__ = [
    "ToeplitzDiagonal",
    "CharacteristicRoots",
    "GammaEvaluator",
    "characteristic_roots",
    "gamma",
    "gamma_ratio",
    "gamma_sum",
    "gamma_weighted_sum",
    "sum_gamma_squares",
    "scaled_sum_gamma_squares",
    "successive_ratios",
    "decay",
    "plus_ratio",
]


def _check_b(b: float) -> float:
    b = float(b)
    if not math.isfinite(b) or abs(b) <= 2.0:
        raise UnsupportedRegime(f"need |b| > 2 (strict diagonal dominance), got b={b!r}")
    return b


def _check_index(k) -> tuple[float, bool]:
    """Return (k, is_integer); k must be a non-negative integer or half-integer."""
    k = float(k)
    if not math.isfinite(k) or k < 0:
        raise ValueError(f"gamma index must be a finite non-negative number, got {k!r}")
    twice = 2.0 * k
    if twice != math.floor(twice):
        raise ValueError(f"gamma index must be an integer or half-integer, got {k!r}")
    return k, k == math.floor(k)


@dataclass(frozen=True)
class ToeplitzDiagonal:
    """Diagonal value b of the Toeplitz part tridiag(-1, b, -1)."""

    b: float

    def __post_init__(self):
        object.__setattr__(self, "b", _check_b(self.b))

    @property
    def b_plus(self) -> float:
        return abs(self.b)

    @property
    def sign(self) -> int:
        return 1 if self.b > 0 else -1


@dataclass(frozen=True)
class CharacteristicRoots:
    r1: float
    r2: float


def characteristic_roots(b: float) -> CharacteristicRoots:
    """Roots ``(b + sqrt(b^2-4))/2`` and ``(b - sqrt(b^2-4))/2``.

    The root of larger magnitude is formed directly and the other as its
    reciprocal, which avoids cancellation for large |b|.
    """
    b = _check_b(b)
    root = math.sqrt((b - 2.0) * (b + 2.0))
    if b > 0:
        r1 = 0.5 * (b + root)
        return CharacteristicRoots(r1, 1.0 / r1)
    r2 = 0.5 * (b - root)
    return CharacteristicRoots(1.0 / r2, r2)


def decay(k, theta: float):
    """s(k) = 1 - exp(-2 k theta); gamma_{k,+} = exp(k theta) * s(k)."""
    return -np.expm1(-2.0 * np.asarray(k, dtype=float) * theta)


def plus_ratio(j, k, theta: float):
    """gamma_{j,+} / gamma_{k,+} for the positive-root sequence, vectorized.

    Requires k > 0.  Underflows gracefully to 0 for j << k.
    """
    j = np.asarray(j, dtype=float)
    k = np.asarray(k, dtype=float)
    with np.errstate(over="raise"):
        try:
            scale = np.exp((j - k) * theta)
        except FloatingPointError as exc:
            raise GammaOverflow("gamma ratio exceeds double precision range") from exc
    return scale * decay(j, theta) / decay(k, theta)


@dataclass(frozen=True)
class GammaEvaluator:
    """Evaluates gamma_k and gamma ratios for one fixed b.

    Immutable after construction.  ``max_index`` bounds the indices served.
    """

    diagonal: ToeplitzDiagonal
    max_index: int = 10**7
    roots: CharacteristicRoots = field(init=False)
    plus_roots: CharacteristicRoots = field(init=False)
    theta: float = field(init=False)

    def __post_init__(self):
        b = self.diagonal.b
        object.__setattr__(self, "roots", characteristic_roots(b))
        object.__setattr__(self, "plus_roots", characteristic_roots(abs(b)))
        object.__setattr__(self, "theta", math.acosh(abs(b) / 2.0))

    @classmethod
    def for_b(cls, b: float, max_index: int = 10**7) -> "GammaEvaluator":
        return cls(ToeplitzDiagonal(b), max_index)

    @property
    def b(self) -> float:
        return self.diagonal.b

    def _served(self, k) -> tuple[float, bool]:
        k, is_int = _check_index(k)
        if k > self.max_index:
            raise ValueError(f"index {k} exceeds max_index={self.max_index}")
        return k, is_int

    def __call__(self, k) -> float:
        """Raw gamma_k.  Half-integer k is evaluated with the roots of |b|."""
        k, is_int = self._served(k)
        if k == 0:
            return 0.0
        r1, r2 = (self.roots.r1, self.roots.r2) if is_int else (self.plus_roots.r1, self.plus_roots.r2)
        if is_int:
            k = int(k)
        try:
            value = r1**k - r2**k
        except OverflowError as exc:
            raise GammaOverflow(f"gamma_{k} overflows for b={self.b}") from exc
        if not math.isfinite(value):
            raise GammaOverflow(f"gamma_{k} overflows for b={self.b}")
        return value

    def ratio(self, j, k) -> float:
        """gamma_j / gamma_k without forming either value."""
        j, j_int = self._served(j)
        k, k_int = self._served(k)
        if k == 0:
            raise ZeroDivisionError("gamma_0 = 0 cannot be a denominator")
        value = float(plus_ratio(j, k, self.theta))
        if self.b < 0 and j_int and k_int and (int(j) - int(k)) % 2:
            value = -value
        return value


def gamma(k, b: float) -> float:
    """gamma_k = r1**k - r2**k (gamma_0 = 0).

    Raises GammaOverflow instead of returning infinity.
    """
    return GammaEvaluator.for_b(b)(k)


def gamma_ratio(j, k, b: float) -> float:
    return GammaEvaluator.for_b(b).ratio(j, k)


def _check_count(p, name: str, minimum: int = 1) -> int:
    if int(p) != p or p < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {p!r}")
    return int(p)


def gamma_sum(p: int, b: float) -> float:
    """Sum of gamma_1..gamma_p in closed form, (gamma_{p+1} - gamma_p - gamma_1)/(b-2)."""
    p = _check_count(p, "p")
    g = GammaEvaluator.for_b(b)
    return (g(p + 1) - g(p) - g(1)) / (g.b - 2.0)


def gamma_weighted_sum(p: int, b: float) -> float:
    """Sum of k*gamma_k for k=1..p, (p*gamma_{p+1} - (p+1)*gamma_p)/(b-2)."""
    p = _check_count(p, "p")
    g = GammaEvaluator.for_b(b)
    return (p * g(p + 1) - (p + 1) * g(p)) / (g.b - 2.0)


def sum_gamma_squares(n: int, b: float) -> float:
    """sum_{i=1}^n (gamma_i^2 + gamma_{n+1-i}^2) via its closed form.

    b < -2 callers should reflect to |b| first; the half-integer index in the
    closed form is only meaningful for positive roots.
    """
    n = _check_count(n, "n", 3)
    b = _check_b(b)
    if b < 0:
        raise UnsupportedRegime("sum_gamma_squares needs b > 2; reflect b < -2 to |b|")
    g = GammaEvaluator.for_b(b)
    g1, gn1, gh = g(1), g(n + 1), g((n + 1) / 2)
    return b * gn1 / g1 * (gh * gh + 2.0) - gn1 * gn1 - 4.0 * (n + 1)


def scaled_sum_gamma_squares(n: int, b: float) -> float:
    """sum_gamma_squares(n, b) / gamma_{n+1}^2, overflow-free (b > 2).

    Uses gamma_{(n+1)/2}^2 + 2 = r1^(n+1) + r2^(n+1) = gamma_{n+1} coth((n+1) theta).
    """
    n = _check_count(n, "n", 3)
    b = _check_b(b)
    if b < 0:
        raise UnsupportedRegime("scaled_sum_gamma_squares needs b > 2")
    theta = math.acosh(b / 2.0)
    x = (n + 1) * theta
    coth = 1.0 / math.tanh(x)
    # 1 / gamma_{n+1}^2 = exp(-2x) / s(n+1)^2, underflows to 0 for large n
    inv_sq = math.exp(-2.0 * x) / (-math.expm1(-2.0 * x)) ** 2
    return b / (2.0 * math.sinh(theta)) * coth - 1.0 - 4.0 * (n + 1) * inv_sq


def successive_ratios(m: int, b: float) -> np.ndarray:
    """rho_k = gamma_k / gamma_{k+1} for k = 1..m via rho_k = 1/(b - rho_{k-1}).

    The recurrence is the forward-stable route for the dominant solution and is
    kept as an independent check on the closed-form ratios.
    """
    m = _check_count(m, "m")
    b = _check_b(b)
    rho = np.empty(m)
    prev = 0.0
    for k in range(m):
        prev = 1.0 / (b - prev)
        rho[k] = prev
    return rho
