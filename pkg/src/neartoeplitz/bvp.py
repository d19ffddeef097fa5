"""Fixed-point iteration for the discretised two-point BVP  T u = h^2 f(u).

Each step solves one tridiagonal system, u^{k+1} = h^2 T^{-1} f(u^k).  The
iteration contracts with factor at most h^2 L_c ||T^{-1}||_inf, where L_c is the
Lipschitz constant of f on the range the iterates live in; the norm bounds turn
that into an a-priori expected rate.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .bounds import inf_norm_upper_bound
from .errors import Diverged, SingularMatrix, UnboundedRange
from .inverse import NearToeplitzSpec

__all__ = [
    "RhsKind",
    "BvpProblem",
    "FixedPointReport",
    "DEFAULT_TOL",
    "DEFAULT_U0",
    "tridiagonal_solve",
    "fisher_rhs",
    "bratu_rhs",
    "lipschitz_constant",
    "expected_rate",
    "fixed_point_solve",
]

DEFAULT_TOL = 1e-8
DEFAULT_U0 = 0.5
DIVERGENCE_STREAK = 3


class RhsKind(enum.Enum):
    FISHER = "fisher"
    GELFAND_BRATU = "bratu"


@dataclass(frozen=True)
class BvpProblem:
    """T_hat u = h^2 f(u) on a grid of n interior nodes, h = length / n.

    ``c_hat`` is the scale in T_hat = -c_hat * T_tilde.  The default -1 makes
    T_hat equal to the near-Toeplitz matrix of ``spec``.
    """

    spec: NearToeplitzSpec
    length: float
    growth: float
    rhs_kind: RhsKind = RhsKind.FISHER
    c_hat: float = -1.0

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValueError(f"domain length must be positive, got {self.length!r}")
        if not (math.isfinite(self.growth) and self.growth > 0):
            raise ValueError(f"growth coefficient must be positive, got {self.growth!r}")
        if not math.isfinite(self.c_hat) or self.c_hat == 0:
            raise ValueError(f"c_hat must be finite and nonzero, got {self.c_hat!r}")
        object.__setattr__(self, "rhs_kind", RhsKind(self.rhs_kind))

    @property
    def h(self) -> float:
        return self.length / self.spec.n

    def rhs(self, u: np.ndarray) -> np.ndarray:
        if self.rhs_kind is RhsKind.FISHER:
            return fisher_rhs(u, self.growth)
        return bratu_rhs(u, self.growth)


@dataclass
class FixedPointReport:
    iterations: int
    ratios: list[float]
    numerical_rate: float
    expected_rate: float
    lipschitz: float
    converged: bool
    tol: float
    solution: np.ndarray = field(repr=False)


def tridiagonal_solve(spec: NearToeplitzSpec, rhs) -> np.ndarray:
    """Solve T_tilde x = rhs in O(n) with a banded LU."""
    rhs = np.asarray(rhs, dtype=float)
    n = spec.n
    if rhs.shape != (n,):
        raise ValueError(f"rhs must have shape ({n},), got {rhs.shape}")
    ab = np.empty((3, n))
    ab[0] = -1.0
    ab[1] = spec.b
    ab[2] = -1.0
    ab[1, 0] = ab[1, -1] = spec.b_tilde
    try:
        x = solve_banded((1, 1), ab, rhs, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"banded solve failed for {spec}: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularMatrix(f"banded solve produced non-finite values for {spec}")
    return x


def fisher_rhs(u, k: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return k * u * (1.0 - u)


def bratu_rhs(u, k: float) -> np.ndarray:
    return k * np.exp(np.asarray(u, dtype=float))


def lipschitz_constant(rhs_kind, k: float, u_range: tuple[float, float] = (0.0, 1.0)) -> float:
    """sup |f'(u)| over ``u_range``."""
    lo, hi = (float(v) for v in u_range)
    if lo > hi:
        raise ValueError(f"empty range {u_range!r}")
    kind = RhsKind(rhs_kind)
    if kind is RhsKind.FISHER:
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise UnboundedRange("Fisher Lipschitz constant needs a bounded range")
        return k * max(abs(1.0 - 2.0 * lo), abs(1.0 - 2.0 * hi))
    if not math.isfinite(hi):
        raise UnboundedRange("Gelfand-Bratu Lipschitz constant needs a bounded upper end")
    return k * math.exp(hi)


def expected_rate(problem: BvpProblem) -> float:
    """h^2 L_c ||T_hat^{-1}||-bound, with L_c taken on [0, 1]."""
    lc = lipschitz_constant(problem.rhs_kind, problem.growth)
    bound = inf_norm_upper_bound(problem.spec).bound
    return problem.h**2 * lc * bound / abs(problem.c_hat)


def fixed_point_solve(
    problem: BvpProblem,
    u0=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = 500,
) -> FixedPointReport:
    """Iterate u <- h^2 T_hat^{-1} f(u) until successive iterates differ by < tol (inf-norm).

    ``ratios[k]`` is ||u^{k+2} - u^{k+1}|| / ||u^{k+1} - u^k||.  Raises Diverged once
    three consecutive ratios exceed 1.
    """
    n = problem.spec.n
    u = np.full(n, DEFAULT_U0) if u0 is None else np.array(u0, dtype=float)
    if u.shape != (n,):
        raise ValueError(f"u0 must have shape ({n},), got {u.shape}")
    scale = problem.h**2 / -problem.c_hat
    rate = expected_rate(problem)
    ratios: list[float] = []
    prev_step = None
    streak = 0
    warned = False
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        u_next = tridiagonal_solve(problem.spec, scale * problem.rhs(u))
        step = float(np.max(np.abs(u_next - u)))
        if problem.rhs_kind is RhsKind.FISHER and not warned and (u_next.min() < 0.0 or u_next.max() > 1.0):
            warnings.warn(
                "iterate left [0, 1]; the Fisher Lipschitz constant k no longer covers it",
                RuntimeWarning,
                stacklevel=2,
            )
            warned = True
        if prev_step is not None and prev_step > 0.0:
            ratio = step / prev_step
            ratios.append(ratio)
            streak = streak + 1 if ratio > 1.0 else 0
            if streak >= DIVERGENCE_STREAK:
                raise Diverged(f"step ratio above 1 for {streak} consecutive iterations (last {ratio:.4g})")
        u = u_next
        prev_step = step
        if step < tol:
            converged = True
            break
    return FixedPointReport(
        iterations=iterations,
        ratios=ratios,
        numerical_rate=max(ratios) if ratios else 0.0,
        expected_rate=rate,
        lipschitz=lipschitz_constant(problem.rhs_kind, problem.growth),
        converged=converged,
        tol=tol,
        solution=u,
    )
