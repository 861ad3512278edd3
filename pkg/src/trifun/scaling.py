"""Diagonal similarity scaling for upper triangular matrices.

The similarity T -> S T S^{-1} with S = diag(s_1, ..., s_n) divides each
superdiagonal band by a growing power of a scalar alpha, shrinking the
off-diagonal part (and usually the conditioning) of the matrix a function
kernel has to digest.  The kernel output is mapped back by the inverse
similarity.  Both transformations touch each entry once, so the wrapper
costs O(n^2) scalar operations.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Optional

import numpy as np

from .errors import NonFiniteResultError
from .kernels import FunmReport
from .triangular import nilpotent_ratio, validate_triangular

__all__ = [
    "ScalingPlan",
    "scalar_scaling",
    "block_scaling",
    "apply_similarity",
    "choose_parameters",
    "scaled_compute",
]

# Largest power of alpha a plan may put on the scaling diagonal.
_POWER_BUDGET = 1e20
# Maxima below this make the scaling pointless; the plan degenerates to a no-op.
_ALPHA_FLOOR = 10.0


def scalar_scaling(n: int, alpha: float) -> np.ndarray:
    """Scaling diagonal (1, alpha, alpha^2, ..., alpha^(n-1)).

    Powers are accumulated by repeated multiplication; alpha must be a
    finite positive scalar and no power may overflow.
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    alpha = float(alpha)
    if math.isnan(alpha) or alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    diag = np.empty(n)
    diag[0] = 1.0
    with np.errstate(over="ignore"):
        for k in range(1, n):
            diag[k] = diag[k - 1] * alpha
    if not np.all(np.isfinite(diag)):
        raise NonFiniteResultError(f"alpha**{n - 1} overflows for alpha={alpha}")
    return diag


def block_scaling(n: int, alpha: float, m: int) -> np.ndarray:
    """Blocked scaling diagonal: constant alpha^k on block k, k = 0..m-1.

    The first m-1 blocks have size floor(n/m); the last block absorbs the
    remainder.
    """
    if not 1 <= m <= n:
        raise ValueError(f"block count m={m} outside [1, {n}]")
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 1.0:
        raise ValueError(f"alpha must be at least 1, got {alpha}")
    powers = scalar_scaling(m, alpha)
    n1 = n // m
    exponents = np.minimum(np.arange(n) // n1, m - 1)
    return powers[exponents]


def _block_sizes(n: int, m: int) -> tuple:
    n1 = n // m
    return (n1,) * (m - 1) + (n - (m - 1) * n1,)


@dataclasses.dataclass(frozen=True)
class ScalingPlan:
    """Chosen scaling parameters: the scalar alpha, the number of blocks m,
    the block sizes, and the resulting scaling diagonal."""

    alpha: float
    m: int
    block_sizes: tuple
    scaling_vector: np.ndarray

    @property
    def is_trivial(self) -> bool:
        return self.alpha == 1.0


def _trivial_plan(n: int) -> ScalingPlan:
    return ScalingPlan(
        alpha=1.0, m=1, block_sizes=(n,), scaling_vector=np.ones(n)
    )


def choose_parameters(T, power_of_two: bool = False) -> ScalingPlan:
    """Pick (alpha, m) for a matrix: alpha is the largest entry magnitude,
    m the largest block count keeping alpha^m within the power budget.

    Maxima below 10 yield the trivial no-op plan, as do maxima so large that
    even a single nontrivial block would overflow the budget.  With
    ``power_of_two`` the chosen alpha is rounded to the nearest power of
    two, making the similarity and its inverse bit-exact.
    """
    T = validate_triangular(T)
    n = T.shape[0]
    alpha = float(np.abs(T).max())
    if alpha < _ALPHA_FLOOR:
        return _trivial_plan(n)
    if power_of_two:
        alpha = 2.0 ** round(math.log2(alpha))
    m = math.floor(20.0 * math.log(10.0) / math.log(alpha))
    if m < 1:
        # alpha alone exceeds the budget; no admissible scaling exists
        return _trivial_plan(n)
    m = min(m, n)
    return ScalingPlan(
        alpha=alpha,
        m=m,
        block_sizes=_block_sizes(n, m),
        scaling_vector=block_scaling(n, alpha, m),
    )


def apply_similarity(T, scaling_vector, direction: str = "forward") -> np.ndarray:
    """Apply S T S^{-1} (forward) or S^{-1} T S (inverse) entrywise.

    Entry (i, j) is multiplied by s_i/s_j (forward) or s_j/s_i (inverse);
    the diagonal is untouched bit-exactly.  Fails loudly if any scaled entry
    is no longer finite.
    """
    T = validate_triangular(T)
    s = np.asarray(scaling_vector, dtype=float)
    if s.ndim != 1 or s.shape[0] != T.shape[0]:
        raise ValueError(
            f"dimension mismatch: scaling vector of length {s.shape[0]} "
            f"for order {T.shape[0]}"
        )
    if not np.all(np.isfinite(s)) or np.any(s <= 0.0):
        raise ValueError("scaling vector entries must be positive and finite")
    if direction == "forward":
        ratio = s[:, None] / s[None, :]
    elif direction == "inverse":
        ratio = s[None, :] / s[:, None]
    else:
        raise ValueError(f"unknown direction: {direction!r}")
    with np.errstate(over="ignore"):
        out = T * ratio
    if not np.all(np.isfinite(out)):
        bad = np.argwhere(~np.isfinite(out))[0]
        raise NonFiniteResultError(
            f"scaled entry ({bad[0] + 1},{bad[1] + 1}) is not finite"
        )
    return out


def _as_report(result) -> FunmReport:
    if isinstance(result, FunmReport):
        return result
    return FunmReport(value=np.asarray(result), count_s=0, pade_degree=0)


def scaled_compute(T, kernel: Callable, plan: Optional[ScalingPlan] = None) -> FunmReport:
    """Run a function kernel through the scaling similarity.

    Forms the scaled matrix, evaluates ``kernel`` on it, and maps the result
    back with the inverse similarity.  With a trivial plan the kernel runs
    directly and the output is bit-identical to an unwrapped call.

    Parameters
    ----------
    T : array_like
        Upper triangular matrix.
    kernel : callable
        Maps an upper triangular matrix to a FunmReport (or a bare matrix).
    plan : ScalingPlan, optional
        Precomputed parameters; derived from T when absent.
    """
    T = validate_triangular(T)
    if plan is None:
        plan = choose_parameters(T)
    ratio = nilpotent_ratio(T)
    if plan.is_trivial:
        rep = _as_report(kernel(T))
        value = rep.value
    else:
        scaled = apply_similarity(T, plan.scaling_vector, "forward")
        rep = _as_report(kernel(scaled))
        value = apply_similarity(rep.value, plan.scaling_vector, "inverse")
    return FunmReport(
        value=value,
        count_s=rep.count_s,
        pade_degree=rep.pade_degree,
        alpha_used=plan.alpha,
        m_used=plan.m,
        input_ratio=ratio,
    )
