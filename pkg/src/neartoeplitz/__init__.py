"""Tridiagonal near-Toeplitz matrices with strictly diagonally dominant Toeplitz part."""

from .errors import NearToeplitzError, SingularMatrix, UnsupportedRegime
from .inverse import (
    NearToeplitzSpec,
    infinity_norm_exact,
    inverse_dense,
    inverse_entry,
    rowsums,
    singular_thresholds,
    trace,
)

__all__ = [
    "NearToeplitzError",
    "NearToeplitzSpec",
    "SingularMatrix",
    "UnsupportedRegime",
    "infinity_norm_exact",
    "inverse_dense",
    "inverse_entry",
    "rowsums",
    "singular_thresholds",
    "trace",
]
