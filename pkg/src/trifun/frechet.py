"""Frechet derivatives of matrix functions, their Kronecker form, condition
numbers, and structural verification of how both respond to the diagonal
scaling similarity.

Three mutually independent evaluators are provided: a block embedding (the
derivative appears as the off-diagonal block of the function of a doubled
matrix), Gauss-Legendre quadrature of the integral representations for exp
and log, and a truncated double power series.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import solve_triangular

from .errors import BranchError
from .kernels import FunmReport
from .scaling import scalar_scaling
from .triangular import frobenius_norm, validate_triangular

__all__ = [
    "KroneckerForm",
    "ConditionReport",
    "ScalingStructureReport",
    "frechet_block",
    "frechet_exp_quad",
    "frechet_log_quad",
    "frechet_series",
    "kronecker_form",
    "condition_numbers",
    "verify_scaling_structure",
]

KRONECKER_CAP = 20

_SPECTRAL_MAX_ITER = 500
_SPECTRAL_TOL = 1e-6

# Verification tolerances, in the order the checks run.
_RESCALE_TOL = 1e-8       # relative residual of the rescaling identity
_PATTERN_TOL = 1e-12      # leakage outside the derivative's support block
_NORM_SLACK = 1e-10       # relative slack of the norm-decrease inequality
_COLUMN_SLACK = 1e-12     # absolute slack of the column-norm comparison
_DIAG_TOL = 1e-12         # relative mismatch of the Kronecker diagonals
_PHASE_TOL = 1e-8         # radians; entry phases must align this closely
_NOISE_FLOOR = 1e-12      # entries below floor*max have meaningless phase
_SPECTRAL_SLACK = 1e-10   # slack of the logged spectral-norm comparison


def _eval(kernel: Callable, M: np.ndarray) -> np.ndarray:
    out = kernel(M)
    if isinstance(out, FunmReport):
        return out.value
    return np.asarray(out)


def _square_direction(E, n: int) -> np.ndarray:
    E = np.asarray(E, dtype=np.complex128)
    if E.shape != (n, n):
        raise ValueError(f"direction must be {n}x{n}, got {E.shape}")
    return E


def frechet_block(kernel: Callable, A, E) -> np.ndarray:
    """Directional derivative of a kernel at A in direction E.

    Evaluates the kernel on the doubled matrix [[A, E], [0, A]] (upper
    triangular for any E) and returns its top-right block.
    """
    A = validate_triangular(A)
    n = A.shape[0]
    E = _square_direction(E, n)
    B = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    B[:n, :n] = A
    B[n:, n:] = A
    B[:n, n:] = E
    return _eval(kernel, B)[:n, n:]


def _unit_interval_rule(nodes: int):
    x, w = leggauss(nodes)
    return (x + 1.0) / 2.0, w / 2.0


def frechet_exp_quad(A, E, nodes: int = 32) -> np.ndarray:
    """Derivative of the exponential via Gauss-Legendre quadrature of
    integral(exp(A(1-t)) E exp(At), t=0..1)."""
    from .kernels import expm_sas

    A = validate_triangular(A)
    E = _square_direction(E, A.shape[0])
    t, w = _unit_interval_rule(nodes)
    out = np.zeros_like(E)
    for tk, wk in zip(t, w):
        left = expm_sas(A * (1.0 - tk)).value
        right = expm_sas(A * tk).value
        out += wk * (left @ E @ right)
    return out


def frechet_log_quad(A, E, nodes: int = 32) -> np.ndarray:
    """Derivative of the logarithm via Gauss-Legendre quadrature of
    integral(R(t) E R(t), t=0..1) with R(t) = (t(A-I)+I)^{-1}.

    The resolvent factors are applied by triangular solves; spectra touching
    the closed negative real axis make some R(t) singular and are rejected.
    """
    A = validate_triangular(A)
    n = A.shape[0]
    E = _square_direction(E, n)
    d = np.diag(A)
    if np.any((d.real <= 0.0) & (d.imag == 0.0)):
        raise BranchError("branch cut crossed: eigenvalue on the closed negative real axis")
    I = np.eye(n, dtype=np.complex128)
    t, w = _unit_interval_rule(nodes)
    out = np.zeros_like(E)
    for tk, wk in zip(t, w):
        M = tk * (A - I) + I
        if np.any(np.diag(M) == 0.0):
            raise BranchError(f"branch cut crossed: singular resolvent at t={tk}")
        X = solve_triangular(M, E)
        X = solve_triangular(M, X.T, trans="T").T
        out += wk * X
    return out


def frechet_series(coeffs: Sequence, A, E) -> np.ndarray:
    """Derivative of a power series sum(a_k A^k): evaluates the double sum
    sum_k a_k sum_{j<k} A^j E A^{k-1-j} exactly as written.

    The caller chooses the truncation; convergence on the spectrum of A is
    the caller's responsibility.
    """
    A = validate_triangular(A)
    n = A.shape[0]
    E = _square_direction(E, n)
    K = len(coeffs)
    powers = [np.eye(n, dtype=np.complex128)]
    for _ in range(max(K - 1, 0)):
        powers.append(powers[-1] @ A)
    out = np.zeros_like(E)
    for k in range(1, K):
        if coeffs[k] == 0:
            continue
        inner = np.zeros_like(E)
        for j in range(k):
            inner += powers[j] @ E @ powers[k - 1 - j]
        out += coeffs[k] * inner
    return out


@dataclasses.dataclass(frozen=True)
class KroneckerForm:
    """The n^2 x n^2 matrix K with vec(L(A, E)) = K vec(E) (column-major
    vec), assembled one coordinate direction at a time."""

    order: int
    entries: np.ndarray
    column_norms: np.ndarray

    def column_as_matrix(self, i: int, j: int) -> np.ndarray:
        """Derivative in direction of the (i, j) coordinate matrix, 1-based."""
        n = self.order
        p = (j - 1) * n + (i - 1)
        return self.entries[:, p].reshape(n, n, order="F")


def _spectral_norm(K: np.ndarray) -> float:
    # power iteration on K*K; deterministic start
    m = K.shape[1]
    rng = np.random.default_rng(0)
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(_SPECTRAL_MAX_ITER):
        u = K.conj().T @ (K @ v)
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            return 0.0
        new_est = np.sqrt(nu)
        v = u / nu
        if abs(new_est - est) <= _SPECTRAL_TOL * new_est:
            return float(new_est)
        est = new_est
    return float(est)


def kronecker_form(kernel: Callable, A, cap: int = KRONECKER_CAP) -> KroneckerForm:
    """Assemble the Kronecker form of a kernel's derivative at A, column by
    column over the coordinate directions.  K has n^4 entries, so the order
    is capped (default 20)."""
    A = validate_triangular(A)
    n = A.shape[0]
    if n > cap:
        raise ValueError(f"order {n} exceeds the Kronecker cap {cap}")
    K = np.zeros((n * n, n * n), dtype=np.complex128)
    E = np.zeros((n, n))
    for j in range(n):
        for i in range(n):
            E[i, j] = 1.0
            L = frechet_block(kernel, A, E)
            K[:, j * n + i] = L.flatten(order="F")
            E[i, j] = 0.0
    return KroneckerForm(
        order=n, entries=K, column_norms=np.linalg.norm(K, axis=0)
    )


@dataclasses.dataclass(frozen=True)
class ConditionReport:
    """Absolute and relative condition numbers of a kernel at a matrix,
    via the spectral norm of the Kronecker form."""

    cond_abs: float
    cond_rel: float
    operator_norm_L: float
    function_norm: float
    input_norm: float


def condition_numbers(kernel: Callable, A, cap: int = KRONECKER_CAP) -> ConditionReport:
    """Condition numbers of ``kernel`` at A.

    ``cond_abs`` is the spectral norm of the Kronecker form (equal to the
    Frobenius-norm operator norm of the derivative); ``cond_rel`` rescales
    by ``||A||_F / ||f(A)||_F`` and is +inf when f(A) = 0.
    """
    A = validate_triangular(A)
    kf = kronecker_form(kernel, A, cap=cap)
    op = _spectral_norm(kf.entries)
    fnorm = frobenius_norm(_eval(kernel, A))
    anorm = frobenius_norm(A)
    rel = op * anorm / fnorm if fnorm > 0.0 else float("inf")
    return ConditionReport(
        cond_abs=op,
        cond_rel=rel,
        operator_norm_L=op,
        function_norm=fnorm,
        input_norm=anorm,
    )


def _scale_general(M: np.ndarray, svec: np.ndarray) -> np.ndarray:
    # S M S^{-1} for a general (not necessarily triangular) M
    return M * (svec[:, None] / svec[None, :])


@dataclasses.dataclass(frozen=True)
class ScalingStructureReport:
    """Outcome of the per-direction structural checks comparing derivative
    data at T and at its scaled counterpart.

    Violation lists hold 1-based indices with the offending measure; the
    spectral-norm and relative-condition comparisons are informational only
    and do not count toward ``ok``.
    """

    order: int
    alpha: float
    rescale_violations: tuple
    pattern_violations: tuple
    norm_violations: tuple
    column_violations: tuple
    phase_violations: tuple
    diagonal_mismatch: float
    diagonal_ok: bool
    max_rescale_residual: float
    max_pattern_leak: float
    max_phase_angle: float
    spectral_norm_original: float
    spectral_norm_scaled: float
    spectral_decrease_ok: bool
    cond_rel_original: float
    cond_rel_scaled: float
    cond_rel_decrease_ok: bool

    @property
    def violation_count(self) -> int:
        return (
            len(self.rescale_violations)
            + len(self.pattern_violations)
            + len(self.norm_violations)
            + len(self.column_violations)
            + len(self.phase_violations)
            + (0 if self.diagonal_ok else 1)
        )

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def summary(self) -> str:
        lines = [
            f"order {self.order}, alpha {self.alpha:g}: "
            f"{self.violation_count} violation(s)",
            f"  rescale identity : {len(self.rescale_violations)} "
            f"(max residual {self.max_rescale_residual:.3e})",
            f"  support pattern  : {len(self.pattern_violations)} "
            f"(max leak {self.max_pattern_leak:.3e})",
            f"  norm decrease    : {len(self.norm_violations)}",
            f"  column norms     : {len(self.column_violations)}",
            f"  diagonal match   : {'ok' if self.diagonal_ok else 'MISMATCH'} "
            f"({self.diagonal_mismatch:.3e})",
            f"  phase alignment  : {len(self.phase_violations)} "
            f"(max angle {self.max_phase_angle:.3e})",
            f"  spectral norms   : {self.spectral_norm_scaled:.6e} vs "
            f"{self.spectral_norm_original:.6e} "
            f"({'<=' if self.spectral_decrease_ok else '>'})",
            f"  relative cond    : {self.cond_rel_scaled:.6e} vs "
            f"{self.cond_rel_original:.6e} "
            f"({'<=' if self.cond_rel_decrease_ok else '>'})",
        ]
        return "\n".join(lines)


def verify_scaling_structure(
    kernel: Callable, T, alpha: float, cap: int = KRONECKER_CAP
) -> ScalingStructureReport:
    """Check, direction by direction, how a kernel's derivative responds to
    the scaling similarity with parameter ``alpha`` > 1.

    Verifies that the derivative at the scaled matrix equals
    alpha^(j-i) S L S^{-1} for each coordinate direction (i, j), that the
    derivative's support stays inside its predicted block, that per-direction
    norms never grow, that the Kronecker diagonals agree, and that matching
    Kronecker entries keep their complex phase.  The spectral-norm and
    relative-condition comparisons are recorded but never flagged, since the
    norm comparison is only guaranteed for sign-definite forms.

    Violations are collected, never raised.
    """
    T = validate_triangular(T)
    alpha = float(alpha)
    if not alpha > 1.0:
        raise ValueError("alpha must exceed 1")
    n = T.shape[0]
    svec = scalar_scaling(n, alpha)
    scaled = _scale_general(T, svec)

    form = kronecker_form(kernel, T, cap=cap)
    form_s = kronecker_form(kernel, scaled, cap=cap)
    K, Ks = form.entries, form_s.entries

    rescale = []
    pattern = []
    norms = []
    columns = []
    max_resid = 0.0
    max_leak = 0.0
    for j in range(n):
        for i in range(n):
            p = j * n + i
            L = K[:, p].reshape(n, n, order="F")
            Ls = Ks[:, p].reshape(n, n, order="F")
            expected = alpha ** (j - i) * _scale_general(L, svec)
            scale = max(np.linalg.norm(Ls), np.linalg.norm(expected))
            resid = np.linalg.norm(Ls - expected) / scale if scale > 0.0 else 0.0
            max_resid = max(max_resid, resid)
            if resid > _RESCALE_TOL:
                rescale.append((i + 1, j + 1, resid))
            # support: rows past i and columns before j must vanish
            mask = np.ones((n, n), dtype=bool)
            mask[: i + 1, j:] = False
            leak = float(np.abs(L[mask]).max()) if mask.any() else 0.0
            lnorm = float(np.linalg.norm(L))
            rel_leak = leak / lnorm if lnorm > 0.0 else 0.0
            max_leak = max(max_leak, rel_leak)
            if leak > _PATTERN_TOL * lnorm:
                pattern.append((i + 1, j + 1, rel_leak))
            norm_t, norm_s = form.column_norms[p], form_s.column_norms[p]
            if norm_s > norm_t * (1.0 + _NORM_SLACK):
                norms.append((i + 1, j + 1, norm_s - norm_t))
            if norm_s > norm_t + _COLUMN_SLACK:
                columns.append((i + 1, j + 1, norm_s - norm_t))

    diag_diff = float(np.abs(np.diag(Ks) - np.diag(K)).max())
    diag_scale = max(
        float(np.abs(np.diag(K)).max()), float(np.abs(np.diag(Ks)).max())
    )
    diag_mismatch = diag_diff / diag_scale if diag_scale > 0.0 else 0.0
    diag_ok = diag_mismatch <= _DIAG_TOL

    phases = []
    max_angle = 0.0
    floor = _NOISE_FLOOR * float(np.abs(K).max())
    floor_s = _NOISE_FLOOR * float(np.abs(Ks).max())
    resolvable = (np.abs(K) > floor) & (np.abs(Ks) > floor_s)
    for p, q in np.argwhere(resolvable):
        angle = abs(np.angle(Ks[p, q] / K[p, q]))
        max_angle = max(max_angle, angle)
        if angle > _PHASE_TOL:
            phases.append((int(p) + 1, int(q) + 1, angle))

    norm_k = _spectral_norm(K)
    norm_ks = _spectral_norm(Ks)
    fnorm = frobenius_norm(_eval(kernel, T))
    fnorm_s = frobenius_norm(_eval(kernel, scaled))
    rel = norm_k * frobenius_norm(T) / fnorm if fnorm > 0.0 else float("inf")
    rel_s = norm_ks * frobenius_norm(scaled) / fnorm_s if fnorm_s > 0.0 else float("inf")

    return ScalingStructureReport(
        order=n,
        alpha=alpha,
        rescale_violations=tuple(rescale),
        pattern_violations=tuple(pattern),
        norm_violations=tuple(norms),
        column_violations=tuple(columns),
        phase_violations=tuple(phases),
        diagonal_mismatch=diag_mismatch,
        diagonal_ok=diag_ok,
        max_rescale_residual=max_resid,
        max_pattern_leak=max_leak,
        max_phase_angle=max_angle,
        spectral_norm_original=norm_k,
        spectral_norm_scaled=norm_ks,
        spectral_decrease_ok=norm_ks <= norm_k * (1.0 + _SPECTRAL_SLACK),
        cond_rel_original=rel,
        cond_rel_scaled=rel_s,
        cond_rel_decrease_ok=rel_s <= rel * (1.0 + _SPECTRAL_SLACK) or rel == float("inf"),
    )
