"""Test-matrix generators: hard-coded reference matrices and seeded random
families whose off-diagonal part dominates the diagonal."""

from __future__ import annotations

import numpy as np

from .triangular import validate_triangular

__all__ = ["gen_builtin_matrix", "gen_toeplitz_geometric", "gen_random_smalldiag", "BUILTIN_IDS"]

BUILTIN_IDS = ("eq3", "eq4", "exp1_t1")


def gen_builtin_matrix(matrix_id: str) -> np.ndarray:
    """Return one of the built-in reference matrices by id.

    ``eq3``: 2x2 with unit-magnitude diagonal and a 1e6 corner entry;
    ``eq4``: 4x4 with ~0.3 diagonal and 3e4 off-diagonal entries;
    ``exp1_t1``: exp(0.1) times a unit upper bidiagonal 2x2 with a 1e6
    corner, whose exact logarithm is [[0.1, 1e6], [0, 0.1]].
    """
    if matrix_id == "eq3":
        T = [[1.0, 1e6], [0.0, -1.0]]
    elif matrix_id == "eq4":
        T = [
            [3.2346e-1, 3.0000e4, 3.0000e4, 3.0000e4],
            [0.0, 3.0089e-1, 3.0000e4, 3.0000e4],
            [0.0, 0.0, 3.2210e-1, 3.0000e4],
            [0.0, 0.0, 0.0, 3.0744e-1],
        ]
    elif matrix_id == "exp1_t1":
        T = np.exp(0.1) * np.array([[1.0, 1e6], [0.0, 1.0]])
    else:
        raise ValueError(f"unknown builtin matrix id: {matrix_id!r}")
    return validate_triangular(T)


def gen_toeplitz_geometric(n: int, base: float) -> np.ndarray:
    """Upper triangular Toeplitz matrix with entry base**(j-i+1) on and
    above the diagonal."""
    if n < 1:
        raise ValueError("order must be at least 1")
    i, j = np.indices((n, n))
    T = np.where(i <= j, float(base) ** (j - i + 1.0), 0.0)
    return validate_triangular(T)


def gen_random_smalldiag(
    n: int, seed: int, diag_magnitude: float, offdiag_magnitude: float
) -> np.ndarray:
    """Seeded random upper triangular matrix with diagonal entries much
    smaller than the off-diagonal ones.

    Diagonal entries are uniform in the disk of radius ``diag_magnitude``
    restricted to |arg| <= 3*pi/4, keeping the spectrum clear of the
    negative real axis; off-diagonal entries are uniform complex with
    magnitude at most ``offdiag_magnitude``.
    """
    if diag_magnitude <= 0 or offdiag_magnitude < 0:
        raise ValueError("magnitudes must be positive")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(-0.75 * np.pi, 0.75 * np.pi, n)
    radii = diag_magnitude * np.sqrt(rng.uniform(0.0, 1.0, n))
    T = np.zeros((n, n), dtype=np.complex128)
    T[np.diag_indices(n)] = radii * np.exp(1j * angles)
    iu = np.triu_indices(n, 1)
    count = len(iu[0])
    mags = offdiag_magnitude * np.sqrt(rng.uniform(0.0, 1.0, count))
    args = rng.uniform(-np.pi, np.pi, count)
    T[iu] = mags * np.exp(1j * args)
    return validate_triangular(T)
