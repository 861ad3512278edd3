"""Shared random-matrix builders for the test suite.

All generators take an explicit ``numpy.random.Generator`` so every test is
reproducible from its seed.
"""

import numpy as np


def rand_upper(rng, n, mag=1.0):
    """Random upper triangular matrix, entries uniform in the disk of radius mag."""
    T = np.zeros((n, n), dtype=np.complex128)
    iu = np.triu_indices(n)
    count = len(iu[0])
    r = mag * np.sqrt(rng.uniform(0.0, 1.0, count))
    a = rng.uniform(-np.pi, np.pi, count)
    T[iu] = r * np.exp(1j * a)
    return T


def rand_spectrum_safe(rng, n, diag_sep=0.3, diag_rad=2.0, off_mag=10.0, sector=0.75):
    """Random upper triangular matrix with pairwise separated eigenvalues kept
    away from the closed negative real axis (|arg| <= sector*pi)."""
    while True:
        theta = rng.uniform(-sector * np.pi, sector * np.pi, n)
        r = diag_rad * np.sqrt(rng.uniform(0.04, 1.0, n))
        d = r * np.exp(1j * theta)
        if n == 1:
            break
        gaps = np.abs(d[:, None] - d[None, :]) + np.diag(np.full(n, np.inf))
        if gaps.min() >= diag_sep:
            break
    T = np.zeros((n, n), dtype=np.complex128)
    T[np.diag_indices(n)] = d
    iu = np.triu_indices(n, 1)
    count = len(iu[0])
    mags = off_mag * np.sqrt(rng.uniform(0.0, 1.0, count))
    args = rng.uniform(-np.pi, np.pi, count)
    T[iu] = mags * np.exp(1j * args)
    return T


def rand_near_identity(rng, n, radius=0.35):
    """Random upper triangular matrix within one-norm ``radius`` of the identity."""
    R = rand_upper(rng, n, mag=1.0)
    nrm = np.abs(R).sum(axis=0).max()
    if nrm > 0:
        R *= radius / nrm
    return np.eye(n, dtype=np.complex128) + R
