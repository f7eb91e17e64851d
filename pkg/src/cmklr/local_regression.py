"""Sparse row-stochastic local kernel-regression coefficient matrices.

Each sample regresses its cluster indicator on its tau most kernel-similar
other samples. Row i of the coefficient matrix carries the similarity
weights of that neighborhood, normalized to sum to 1; all other entries
are zero. One such matrix is built per candidate kernel, and a convex
combination of them ("fusion") yields the consensus coefficient matrix.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .kernel_bank import kernel_values


def select_neighbors(kernel, tau: int) -> np.ndarray:
    """Indices of each sample's tau most similar other samples.

    Returns an (n, tau) integer array. Row i is ordered by descending
    similarity K[i, j] over j != i, with ties broken by ascending index so
    repeated runs agree bit for bit.
    """
    K = kernel_values(kernel)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError("kernel matrix must be square")
    n = K.shape[0]
    if not 1 <= tau <= n - 1:
        raise ValueError(f"tau must be in [1, {n - 1}], got {tau}")
    sims = -K
    np.fill_diagonal(sims, np.inf)  # self sorts last, never selected
    order = np.argsort(sims, axis=1, kind="stable")
    return order[:, :tau]


def build_coefficients(kernel, tau: int) -> sparse.csr_matrix:
    """Row-stochastic local regression coefficients for one kernel.

    Row i holds max(K[i, j], 0) / sum over the neighborhood at each of the
    tau neighbors j and zero elsewhere. Negative similarities (possible
    for cosine kernels) are clamped before normalizing; a row whose
    clamped neighborhood sum vanishes falls back to uniform 1/tau weights
    so row-stochasticity always holds. The diagonal is identically zero.
    """
    K = kernel_values(kernel)
    neighbors = select_neighbors(K, tau)
    n = K.shape[0]
    vals = np.maximum(K[np.arange(n)[:, None], neighbors], 0.0)
    sums = vals.sum(axis=1)
    weights = np.empty_like(vals)
    positive = sums > 0.0
    weights[positive] = vals[positive] / sums[positive, None]
    weights[~positive] = 1.0 / tau
    indptr = np.arange(0, n * tau + 1, tau)
    A = sparse.csr_matrix(
        (weights.ravel(), neighbors.ravel().astype(np.int64), indptr), shape=(n, n)
    )
    A.sort_indices()
    return A


def fuse(coeffs, weights) -> sparse.csr_matrix:
    """Convex combination sum_r w_r A_r of coefficient matrices.

    The weights must lie on the probability simplex (within 1e-8); the
    result is again entrywise nonnegative with unit row sums, supported on
    the union of the constituents' supports.
    """
    if len(coeffs) == 0:
        raise ValueError("no coefficient matrices to fuse")
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(coeffs),):
        raise ValueError(
            f"need one weight per coefficient matrix, got {w.shape} for {len(coeffs)}"
        )
    if np.any(w < -1e-8) or abs(float(w.sum()) - 1.0) > 1e-8:
        raise ValueError("fusion weights must lie on the probability simplex")
    n = coeffs[0].shape[0]
    acc = None
    for wr, A in zip(w, coeffs):
        if A.shape != (n, n):
            raise ValueError("coefficient matrices must share a common shape")
        term = sparse.csr_matrix(A, dtype=float) * float(wr)
        acc = term if acc is None else acc + term
    acc.sort_indices()
    return acc


def check_row_stochastic(A, tol: float = 1e-8) -> None:
    """Raise unless A is entrywise nonnegative with unit row sums."""
    if sparse.issparse(A):
        if A.nnz and float(A.data.min()) < -tol:
            raise ValueError("coefficient matrix has negative entries")
        row_sums = np.asarray(A.sum(axis=1)).ravel()
    else:
        A = np.asarray(A, dtype=float)
        if A.size and float(A.min()) < -tol:
            raise ValueError("coefficient matrix has negative entries")
        row_sums = A.sum(axis=1)
    gap = float(np.max(np.abs(row_sums - 1.0)))
    if gap > tol:
        raise ValueError(f"coefficient matrix is not row-stochastic (max gap {gap:.3g})")


def export_triplets(A, path) -> None:
    """Dump a coefficient matrix as 'i,j,weight' CSV rows for inspection."""
    coo = sparse.coo_matrix(A)
    with open(path, "w") as fh:
        fh.write("i,j,weight\n")
        for i, j, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{i},{j},{float(v)!r}\n")
