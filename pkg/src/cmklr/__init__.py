"""Multiple kernel clustering via sparse local kernel regression.

Builds banks of candidate kernels, a sparse row-stochastic local
regression coefficient matrix per kernel, and alternates a spectral
embedding step with a simplex-constrained reweighting of the bank; the
embedding is discretized with multi-restart K-means and scored with
standard external metrics.
"""

from . import data_io
from .discretize import Assignment, kmeans, lloyd, row_normalize
from .kernel_bank import (
    GAUSSIAN_BANDWIDTH_FACTORS,
    POLYNOMIAL_GRID,
    KernelMatrix,
    build_multi_view_bank,
    build_single_view_bank,
    cosine_kernel,
    gaussian_kernel,
    mean_pairwise_distance,
    normalize_unit_diagonal,
    polynomial_kernel,
    zscore,
)
from .local_regression import (
    build_coefficients,
    check_row_stochastic,
    export_triplets,
    fuse,
    select_neighbors,
)
from .metrics import accuracy, contingency_table, nmi, purity
from .solver import (
    QpProblem,
    SolverResult,
    build_laplacian,
    build_qp,
    objective,
    project_to_simplex,
    run_cklr,
    run_cmklr,
    smallest_eigenvectors,
    solve_simplex_qp,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "GAUSSIAN_BANDWIDTH_FACTORS",
    "KernelMatrix",
    "POLYNOMIAL_GRID",
    "QpProblem",
    "SolverResult",
    "accuracy",
    "build_coefficients",
    "build_laplacian",
    "build_multi_view_bank",
    "build_qp",
    "build_single_view_bank",
    "check_row_stochastic",
    "contingency_table",
    "cosine_kernel",
    "data_io",
    "export_triplets",
    "fuse",
    "gaussian_kernel",
    "kmeans",
    "lloyd",
    "mean_pairwise_distance",
    "nmi",
    "normalize_unit_diagonal",
    "objective",
    "polynomial_kernel",
    "project_to_simplex",
    "purity",
    "row_normalize",
    "run_cklr",
    "run_cmklr",
    "select_neighbors",
    "smallest_eigenvectors",
    "solve_simplex_qp",
    "zscore",
]
