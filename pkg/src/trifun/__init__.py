"""Diagonal-scaling preconditioner and matrix-function kernels for complex
upper triangular matrices, with a Frechet-derivative conditioning engine and
a benchmark CLI."""

from .errors import (
    BranchError,
    ConfluentSpectrumError,
    ConvergenceError,
    NonFiniteResultError,
    TriangularInputError,
)
from .frechet import (
    ConditionReport,
    KroneckerForm,
    ScalingStructureReport,
    condition_numbers,
    frechet_block,
    frechet_exp_quad,
    frechet_log_quad,
    frechet_series,
    kronecker_form,
    verify_scaling_structure,
)
from .generators import gen_builtin_matrix, gen_random_smalldiag, gen_toeplitz_geometric
from .kernels import (
    FunmReport,
    KernelOptions,
    acosm,
    expm_sas,
    funm_parlett,
    logm_iss,
    sqrtm_tri,
)
from .matio import MatrixFileError, read_matrix, write_matrix
from .scaling import (
    ScalingPlan,
    apply_similarity,
    block_scaling,
    choose_parameters,
    scalar_scaling,
    scaled_compute,
)
from .triangular import (
    BandDecomposition,
    frobenius_norm,
    nilpotent_ratio,
    operator_norm,
    split_bands,
    validate_triangular,
)

__version__ = "0.1.0"

__all__ = [
    "BandDecomposition",
    "BranchError",
    "ConditionReport",
    "ConfluentSpectrumError",
    "ConvergenceError",
    "FunmReport",
    "KernelOptions",
    "KroneckerForm",
    "MatrixFileError",
    "NonFiniteResultError",
    "ScalingPlan",
    "ScalingStructureReport",
    "TriangularInputError",
    "acosm",
    "apply_similarity",
    "block_scaling",
    "choose_parameters",
    "condition_numbers",
    "expm_sas",
    "frechet_block",
    "frechet_exp_quad",
    "frechet_log_quad",
    "frechet_series",
    "frobenius_norm",
    "funm_parlett",
    "gen_builtin_matrix",
    "gen_random_smalldiag",
    "gen_toeplitz_geometric",
    "kronecker_form",
    "logm_iss",
    "nilpotent_ratio",
    "operator_norm",
    "read_matrix",
    "scalar_scaling",
    "scaled_compute",
    "split_bands",
    "sqrtm_tri",
    "validate_triangular",
    "verify_scaling_structure",
    "write_matrix",
]
