"""Dense complex upper triangular values: validation, norms, band splitting.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128 with a
guaranteed-zero strictly lower part; ``validate_triangular`` is the only
constructor boundary and every public operation goes through it.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import TriangularInputError

__all__ = [
    "BandDecomposition",
    "validate_triangular",
    "frobenius_norm",
    "split_bands",
    "nilpotent_ratio",
    "operator_norm",
]

_TWO_NORM_MAX_ITER = 100
_TWO_NORM_TOL = 1e-6


def validate_triangular(raw) -> np.ndarray:
    """Validate a raw square array as upper triangular and return it as complex128.

    Entries are preserved bit-for-bit.  Rejects non-square input, any nonzero
    strictly-lower entry, and non-finite entries.
    """
    A = np.asarray(raw)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise TriangularInputError(f"not square: shape {A.shape}")
    n = A.shape[0]
    if n < 1:
        raise TriangularInputError("order must be at least 1")
    if not np.all(np.isfinite(A)):
        bad = np.argwhere(~np.isfinite(A))[0]
        raise TriangularInputError(
            f"non-finite entry at ({bad[0] + 1},{bad[1] + 1})"
        )
    T = np.array(A, dtype=np.complex128)
    low = np.tril(T, -1)
    if np.any(low != 0):
        bad = np.argwhere(low != 0)[0]
        raise TriangularInputError(
            f"not triangular: nonzero entry at ({bad[0] + 1},{bad[1] + 1})"
        )
    return T


def frobenius_norm(T) -> float:
    """Square root of the sum of squared entry magnitudes."""
    return float(np.linalg.norm(np.asarray(T), "fro"))


@dataclasses.dataclass(frozen=True)
class BandDecomposition:
    """Split of an upper triangular matrix into its diagonal part and one
    matrix per superdiagonal; summing all parts reconstructs the input
    bit-exactly."""

    diagonal_part: np.ndarray
    bands: tuple

    def reconstruct(self) -> np.ndarray:
        out = self.diagonal_part.copy()
        for band in self.bands:
            out += band
        return out


def split_bands(T) -> BandDecomposition:
    """Decompose T into its diagonal and the n-1 superdiagonal bands."""
    T = validate_triangular(T)
    n = T.shape[0]
    diag = np.diag(np.diag(T))
    bands = tuple(np.diag(np.diag(T, p), p) for p in range(1, n))
    return BandDecomposition(diagonal_part=diag, bands=bands)


def nilpotent_ratio(T) -> float:
    """Frobenius norm of the strictly upper part over that of the diagonal.

    Returns 0.0 for diagonal (including zero) matrices and +inf when the
    diagonal vanishes but the strict upper part does not.
    """
    T = validate_triangular(T)
    off = float(np.linalg.norm(np.triu(T, 1), "fro"))
    if off == 0.0:
        return 0.0
    dn = float(np.linalg.norm(np.diag(T)))
    if dn == 0.0:
        return float("inf")
    return off / dn


def _two_norm_estimate(T: np.ndarray) -> float:
    # power iteration on T*T with a fixed deterministic start vector
    n = T.shape[0]
    rng = np.random.default_rng(0)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(_TWO_NORM_MAX_ITER):
        w = T @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        u = T.conj().T @ w
        nu = float(np.linalg.norm(u))
        new_est = np.sqrt(nu)
        if nu == 0.0:
            return nw
        v = u / nu
        if abs(new_est - est) <= _TWO_NORM_TOL * new_est:
            return float(new_est)
        est = new_est
    return float(est)


def operator_norm(T, kind: str) -> float:
    """Operator norm of T: exact "one"/"infinity" norms, or a power-iteration
    "two-estimate" of the spectral norm."""
    T = validate_triangular(T)
    if kind == "one":
        return float(np.abs(T).sum(axis=0).max())
    if kind == "infinity":
        return float(np.abs(T).sum(axis=1).max())
    if kind == "two-estimate":
        return _two_norm_estimate(T)
    raise ValueError(f"unknown norm kind: {kind!r}")
