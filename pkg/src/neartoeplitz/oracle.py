"""Brute-force dense reference: build the matrix, invert by elimination.

Shares nothing with the closed-form code except the spec type, so agreement
between the two is evidence rather than tautology.  O(n^3); capped at
``MAX_ORDER``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import SingularMatrix
from .inverse import NearToeplitzSpec

MAX_ORDER = 2048
PIVOT_TOL = 1e-13


def build_matrix(spec: NearToeplitzSpec) -> np.ndarray:
    n = spec.n
    if n > MAX_ORDER:
        raise ValueError(f"dense oracle is capped at n <= {MAX_ORDER}, got {n}")
    m = np.zeros((n, n))
    m[np.arange(n), np.arange(n)] = spec.b
    m[np.arange(n - 1), np.arange(1, n)] = -1.0
    m[np.arange(1, n), np.arange(n - 1)] = -1.0
    m[0, 0] = m[-1, -1] = spec.b_tilde
    return m


def oracle_inverse(m: np.ndarray, pivot_tol: float = PIVOT_TOL) -> np.ndarray:
    """Gauss-Jordan elimination with partial pivoting on [M | I]."""
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"need a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    n = m.shape[0]
    aug = np.hstack([m, np.eye(n)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[piv, col]) <= pivot_tol:
            raise SingularMatrix(f"pivot breakdown in column {col + 1}: |pivot| = {abs(aug[piv, col]):.3e}")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] /= aug[col, col]
        factors = aug[:, col].copy()
        factors[col] = 0.0
        aug -= np.outer(factors, aug[col])
    return aug[:, n:]


class OracleSummary(NamedTuple):
    trace: float
    rowsums: np.ndarray
    inf_norm: float


def oracle_summary(m: np.ndarray) -> OracleSummary:
    """Trace, signed row sums and infinity norm of the inverse of ``m``."""
    inv = oracle_inverse(m)
    return OracleSummary(float(np.trace(inv)), inv.sum(axis=1), float(np.abs(inv).sum(axis=1).max()))
