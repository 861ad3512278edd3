"""Self-contained matrix function kernels for upper triangular matrices.

Implements the principal square root (superdiagonal recurrence), the
exponential (classical scaling and squaring with a fixed degree-6 diagonal
Pade approximant), the logarithm (inverse scaling and squaring with a fixed
degree-7 Pade approximant of log(I+X)), the inverse cosine (composed from
the square root and the logarithm), and a divided-difference reference
evaluator for matrices with well separated eigenvalues.

All kernels work entirely on the upper triangle, solve triangular systems by
back-substitution, and never form an explicit inverse.
"""

from __future__ import annotations

import dataclasses
from typing import Callable

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    BranchError,
    ConfluentSpectrumError,
    ConvergenceError,
    NonFiniteResultError,
)
from .triangular import nilpotent_ratio, operator_norm, validate_triangular

__all__ = [
    "FunmReport",
    "KernelOptions",
    "sqrtm_tri",
    "expm_sas",
    "logm_iss",
    "acosm",
    "funm_parlett",
]

# Diagonal [6/6] Pade approximant of exp(x): p(x)/p(-x).
_EXP_PADE_DEGREE = 6
_EXP_COEFFS = np.array([665280, 332640, 75600, 10080, 840, 42, 1], dtype=float) / 665280.0
# Squaring threshold of the classical rule ||T||_2 / 2^k0 < 1.
_EXP_THRESHOLD = 1.0

# Diagonal [7/7] Pade approximant of log(1+x), numerator and denominator.
_LOG_PADE_DEGREE = 7
_LOG_NUM = np.array(
    [0.0, 1.0, 3.0, 535.0 / 156, 145.0 / 78, 1377.0 / 2860, 223.0 / 4290, 11.0 / 7280]
)
_LOG_DEN = np.array(
    [1.0, 7.0 / 2, 63.0 / 13, 175.0 / 52, 175.0 / 143, 63.0 / 286, 7.0 / 429, 1.0 / 3432]
)


@dataclasses.dataclass(frozen=True)
class KernelOptions:
    """Tuning knobs for the iterative kernels.

    ``theta`` is the one-norm convergence threshold of the square-root phase
    of the logarithm (the exponential uses the fixed classical threshold 1.0
    on its two-norm estimate); ``max_steps`` caps the number of square roots.
    """

    mode: str = "classical"
    theta: float = 0.25
    max_steps: int = 100

    def __post_init__(self):
        if self.mode != "classical":
            raise ValueError(f"unknown kernel mode: {self.mode!r}")
        if not (0.0 < self.theta < 1.0):
            raise ValueError("theta must lie in (0, 1)")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


DEFAULT_OPTIONS = KernelOptions()


@dataclasses.dataclass(frozen=True)
class FunmReport:
    """A computed matrix function value plus run diagnostics.

    ``count_s`` is the number of squarings (exponential) or square roots
    (logarithm, inverse cosine); ``input_ratio`` is the nilpotent ratio of
    the matrix the kernel was asked about.
    """

    value: np.ndarray
    count_s: int
    pade_degree: int
    alpha_used: float = 1.0
    m_used: int = 1
    input_ratio: float = 0.0


def _check_log_spectrum(diag: np.ndarray, what: str):
    on_axis = (diag.real <= 0.0) & (diag.imag == 0.0)
    if np.any(on_axis):
        k = int(np.argmax(on_axis))
        raise BranchError(f"{what}: eigenvalue {diag[k]} on the closed negative real axis")


def sqrtm_tri(T) -> np.ndarray:
    """Principal square root of an upper triangular matrix.

    The diagonal takes principal scalar square roots; off-diagonal entries
    follow the standard recurrence solved superdiagonal by superdiagonal.
    Eigenvalues on the closed negative real axis (zero included) are
    rejected.
    """
    T = validate_triangular(T)
    n = T.shape[0]
    d = np.diag(T)
    _check_log_spectrum(d, "principal root undefined")
    U = np.zeros_like(T)
    U[np.diag_indices(n)] = np.sqrt(d)
    for p in range(1, n):
        for i in range(n - p):
            j = i + p
            den = U[i, i] + U[j, j]
            if den == 0.0:
                raise BranchError(f"ill-posed recurrence: u_{i+1}{i+1} + u_{j+1}{j+1} = 0")
            U[i, j] = (T[i, j] - U[i, i + 1 : j] @ U[i + 1 : j, j]) / den
    return U


def _pade_exp(A: np.ndarray) -> np.ndarray:
    # even/odd split of the degree-6 approximant; one triangular solve
    n = A.shape[0]
    I = np.eye(n, dtype=A.dtype)
    b = _EXP_COEFFS
    A2 = A @ A
    A4 = A2 @ A2
    U = A @ (b[1] * I + b[3] * A2 + b[5] * A4)
    V = b[0] * I + b[2] * A2 + b[4] * A4 + b[6] * (A4 @ A2)
    return solve_triangular(V - U, V + U)


def expm_sas(T, opts: KernelOptions = DEFAULT_OPTIONS) -> FunmReport:
    """Matrix exponential by classical scaling and squaring.

    Chooses the smallest ``k0 >= 0`` with two-norm-estimate(T)/2**k0 < 1,
    applies the degree-6 diagonal Pade approximant to ``T / 2**k0`` and
    squares ``k0`` times.

    Parameters
    ----------
    T : array_like
        Upper triangular matrix.
    opts : KernelOptions, optional
        Only ``mode`` applies; the squaring count is fixed by the classical
        norm rule.

    Returns
    -------
    FunmReport
        ``value`` holds exp(T); ``count_s`` the number of squarings.
    """
    T = validate_triangular(T)
    ratio = nilpotent_ratio(T)
    nrm = operator_norm(T, "two-estimate")
    k0 = 0
    while nrm / 2.0**k0 >= _EXP_THRESHOLD:
        k0 += 1
    X = _pade_exp(T / 2.0**k0)
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(k0):
            X = X @ X
            if not np.all(np.isfinite(X)):
                raise NonFiniteResultError(f"overflow in squaring {step + 1} of {k0}")
    return FunmReport(value=X, count_s=k0, pade_degree=_EXP_PADE_DEGREE, input_ratio=ratio)


def _polyval_horner(coeffs: np.ndarray, X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    I = np.eye(n, dtype=X.dtype)
    R = coeffs[-1] * I
    for c in coeffs[-2::-1]:
        R = R @ X + c * I
    return R


def logm_iss(T, opts: KernelOptions = DEFAULT_OPTIONS) -> FunmReport:
    """Principal matrix logarithm by inverse scaling and squaring.

    Takes square roots until ``||T**(1/2**s) - I||_1 < opts.theta``, applies
    the degree-7 diagonal Pade approximant of log(I+X), and multiplies back
    by ``2**s``.

    Parameters
    ----------
    T : array_like
        Upper triangular matrix with no eigenvalue on the closed negative
        real axis.
    opts : KernelOptions, optional
        ``theta`` is the convergence threshold (default 0.25), ``max_steps``
        the square-root cap.

    Returns
    -------
    FunmReport
        ``value`` holds log(T); ``count_s`` the number of square roots.
    """
    T = validate_triangular(T)
    _check_log_spectrum(np.diag(T), "principal log undefined")
    ratio = nilpotent_ratio(T)
    n = T.shape[0]
    I = np.eye(n, dtype=T.dtype)
    X = T
    s = 0
    while np.abs(X - I).sum(axis=0).max() >= opts.theta:
        if s >= opts.max_steps:
            raise ConvergenceError(
                f"square-root phase not converged after max_steps={opts.max_steps}"
            )
        X = sqrtm_tri(X)
        s += 1
    Y = X - I
    R = solve_triangular(_polyval_horner(_LOG_DEN, Y), _polyval_horner(_LOG_NUM, Y))
    return FunmReport(
        value=2.0**s * R, count_s=s, pade_degree=_LOG_PADE_DEGREE, input_ratio=ratio
    )


def acosm(T, opts: KernelOptions = DEFAULT_OPTIONS) -> FunmReport:
    """Principal inverse cosine via acos(T) = -i log(T + i sqrt(I - T^2)).

    Rejects eigenvalues at the branch points +-1; the inner square root and
    logarithm impose their own branch restrictions on the composed
    arguments.  ``count_s`` counts the logarithm's square roots plus the one
    explicit square root.
    """
    T = validate_triangular(T)
    ratio = nilpotent_ratio(T)
    d = np.diag(T)
    if np.any(d == 1.0) or np.any(d == -1.0):
        raise BranchError("branch point: eigenvalue at +1 or -1")
    n = T.shape[0]
    W = np.eye(n, dtype=T.dtype) - T @ T
    R = sqrtm_tri(W)
    inner = logm_iss(T + 1j * R, opts)
    return FunmReport(
        value=-1j * inner.value,
        count_s=inner.count_s + 1,
        pade_degree=inner.pade_degree,
        input_ratio=ratio,
    )


def funm_parlett(T, f: Callable, separation: float = 1e-8) -> np.ndarray:
    """Reference evaluation of f(T) by the divided-difference recurrence.

    Requires pairwise distinct diagonal entries with separation at least
    ``separation * max |t_ii|``; raises ConfluentSpectrumError otherwise.
    ``f`` is a scalar function applied entrywise to the diagonal.
    """
    T = validate_triangular(T)
    n = T.shape[0]
    d = np.diag(T)
    dmax = float(np.abs(d).max())
    if n > 1:
        gaps = np.abs(d[:, None] - d[None, :]) + np.diag(np.full(n, np.inf))
        if gaps.min() < separation * dmax or dmax == 0.0:
            raise ConfluentSpectrumError("confluent spectrum, oracle unavailable")
    F = np.zeros_like(T)
    for i in range(n):
        F[i, i] = f(d[i])
    for p in range(1, n):
        for i in range(n - p):
            j = i + p
            num = T[i, j] * (F[j, j] - F[i, i])
            num += T[i, i + 1 : j] @ F[i + 1 : j, j] - F[i, i + 1 : j] @ T[i + 1 : j, j]
            F[i, j] = num / (T[j, j] - T[i, i])
    return F
