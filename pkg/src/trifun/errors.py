"""Exception types shared across the package."""

import numpy as np


class TriangularInputError(ValueError):
    """Raw input is not a finite square upper triangular matrix."""


class NonFiniteResultError(FloatingPointError):
    """A scaling power, scaled entry, or kernel iterate overflowed to Inf/NaN."""


class BranchError(np.linalg.LinAlgError):
    """Principal branch undefined for the given spectrum (zero, negative real
    axis, or a branch point of the requested function)."""


class ConvergenceError(RuntimeError):
    """An iteration cap was exhausted before the convergence test passed."""


class ConfluentSpectrumError(np.linalg.LinAlgError):
    """Eigenvalues too close for the divided-difference oracle."""
