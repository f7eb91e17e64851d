"""Alternating optimization of the spectral embedding and kernel weights.

The objective ||Y - A_w Y||_F^2 is minimized over orthonormal n-by-c
embeddings Y and simplex-constrained kernel weights w, where A_w is the
weighted fusion of per-kernel local regression coefficients. With w fixed
the optimal Y spans the eigenvectors of the c smallest eigenvalues of the
Laplacian (I - A_w)^T (I - A_w); with Y fixed the weights solve a small
simplex-constrained quadratic program. The two steps alternate until the
relative objective decrease drops below a tolerance, and each step solves
its subproblem exactly, so the recorded objective trace never increases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import eigh

from .kernel_bank import kernel_values
from .local_regression import build_coefficients, check_row_stochastic, fuse

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dep, but degrade gracefully
    njit = None


@dataclass
class QpProblem:
    """Quadratic program min w' gram w - 2 w' linear over the simplex."""

    gram: np.ndarray  # (m, m): gram[i, j] = tr(Y' A_j' A_i Y)
    linear: np.ndarray  # (m,): linear[i] = tr(Y' A_i Y)


@dataclass
class SolverResult:
    embedding: np.ndarray
    weights: np.ndarray
    objective_trace: list[float]
    iterations: int
    tau: int
    num_clusters: int
    assignments: np.ndarray | None = None
    metrics: dict | None = None


def build_laplacian(A_w) -> np.ndarray:
    """Dense symmetric PSD Laplacian (I - A_w)' (I - A_w).

    Row-stochasticity of A_w puts the all-ones vector in the null space.
    The product is symmetrized after assembly to kill round-off asymmetry.
    """
    check_row_stochastic(A_w)
    dense = A_w.toarray() if sparse.issparse(A_w) else np.asarray(A_w, dtype=float)
    M = np.eye(dense.shape[0]) - dense
    L = M.T @ M
    return (L + L.T) / 2.0


def smallest_eigenvectors(L, c: int) -> np.ndarray:
    """Orthonormal eigenvectors of the c algebraically smallest eigenvalues.

    Columns are ordered by ascending eigenvalue. Each column's sign is
    fixed so that its largest-magnitude entry (first such entry on ties)
    is nonnegative.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("Laplacian must be square")
    n = L.shape[0]
    if not 1 <= c < n:
        raise ValueError(f"cluster count must be in [1, {n - 1}], got {c}")
    if float(np.max(np.abs(L - L.T))) > 1e-8:
        raise ValueError("Laplacian must be symmetric")
    _, vecs = eigh(L, subset_by_index=(0, c - 1))
    lead = np.argmax(np.abs(vecs), axis=0)
    flip = vecs[lead, np.arange(c)] < 0.0
    vecs[:, flip] *= -1.0
    return vecs


def objective(Y, A_w) -> float:
    """Squared Frobenius residual ||Y - A_w Y||_F^2.

    Validates that A_w is row-stochastic rather than silently scoring an
    invalid matrix. Equals tr(Y' L_w Y) for the Laplacian built from A_w.
    """
    check_row_stochastic(A_w)
    Y = np.asarray(Y, dtype=float)
    R = Y - A_w @ Y
    return float(np.sum(R * R))


def _qp_data(coeffs, Y):
    """(P, q, stacked) where stacked rows are the vectors vec(A_r Y)."""
    if len(coeffs) == 0:
        raise ValueError("no coefficient matrices")
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2:
        raise ValueError("embedding must be 2-d")
    m = len(coeffs)
    stacked = np.empty((m, Y.size))
    linear = np.empty(m)
    for r, A in enumerate(coeffs):
        if A.shape != (Y.shape[0], Y.shape[0]):
            raise ValueError("coefficient matrix size does not match embedding")
        B = A @ Y
        stacked[r] = np.ravel(B)
        linear[r] = float(np.sum(Y * B))
    gram = stacked @ stacked.T
    return (gram + gram.T) / 2.0, linear, stacked


def build_qp(coeffs, Y) -> QpProblem:
    """Assemble the weight subproblem at a fixed embedding.

    The gram matrix is computed as the Gram matrix of the m stacked
    vectors vec(A_r Y), which makes it symmetric positive semidefinite by
    construction. Up to the constant tr(Y'Y), the QP objective equals the
    fusion residual ||Y - sum_r w_r A_r Y||_F^2.
    """
    gram, linear, _ = _qp_data(coeffs, Y)
    return QpProblem(gram=gram, linear=linear)


def project_to_simplex(v) -> np.ndarray:
    """Exact Euclidean projection onto {w : w >= 0, sum w = 1}."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    shifted = np.cumsum(u) - 1.0
    rho = np.nonzero(u * np.arange(1, v.size + 1) > shifted)[0][-1]
    return np.maximum(v - shifted[rho] / (rho + 1.0), 0.0)


def _descend_on_simplex(P, q, w, step, max_iter, moved_tol2):
    """Projected gradient iterations on w in place; w stays on the simplex.

    Scalar-loop kernel: it runs tens of thousands of times per clustering
    run at small m, where array-op overhead dominates.
    """
    m = w.shape[0]
    v = np.empty(m)
    u = np.empty(m)
    for _ in range(max_iter):
        for i in range(m):
            acc = 0.0
            for j in range(m):
                acc += P[i, j] * w[j]
            v[i] = w[i] - step * (acc - q[i])
        u[:] = v
        u.sort()
        # largest k with u_(k) * k > (cumsum_k - 1), values scanned descending
        csum = 0.0
        theta = 0.0
        k = 0
        for idx in range(m - 1, -1, -1):
            k += 1
            csum += u[idx]
            if u[idx] * k > csum - 1.0:
                theta = (csum - 1.0) / k
        moved2 = 0.0
        for i in range(m):
            updated = v[i] - theta
            if updated < 0.0:
                updated = 0.0
            delta = w[i] - updated
            moved2 += delta * delta
            w[i] = updated
        if moved2 <= moved_tol2:
            break
    return w


def _descend_on_simplex_numpy(P, q, w, step, max_iter, moved_tol2):
    """Vectorized fallback used when numba is unavailable."""
    m = w.shape[0]
    ranks = np.arange(1.0, m + 1.0)
    g = np.empty(m)
    v = np.empty(m)
    u = np.empty(m)
    shifted = np.empty(m)
    d = np.empty(m)
    for _ in range(max_iter):
        np.dot(P, w, out=g)
        g -= q
        np.multiply(g, -step, out=v)
        v += w
        u[:] = v
        u.sort()
        descending = u[::-1]
        np.cumsum(descending, out=shifted)
        shifted -= 1.0
        rho = int(np.count_nonzero(descending * ranks > shifted)) - 1
        np.subtract(v, shifted[rho] / (rho + 1.0), out=v)
        np.maximum(v, 0.0, out=v)
        np.subtract(w, v, out=d)
        moved2 = float(d @ d)
        w[:] = v
        if moved2 <= moved_tol2:
            break
    return w


if njit is not None:
    _descend_on_simplex = njit(cache=True)(_descend_on_simplex)
else:  # pragma: no cover
    _descend_on_simplex = _descend_on_simplex_numpy


def solve_simplex_qp(
    problem: QpProblem,
    w0=None,
    max_iter: int = 10000,
    grad_tol: float = 1e-10,
) -> np.ndarray:
    """Minimize w' P w - 2 w' q over the probability simplex.

    Projected gradient with the exact simplex projection and fixed step
    1/||P||_2, stopping once the projected-gradient norm drops below
    grad_tol. A 1e-12 ridge keeps P numerically positive definite when
    candidate kernels coincide. Warm-startable through w0 (defaults to the
    uniform weight vector); because projected gradient is a descent
    method, a warm start guarantees the returned weights never score worse
    than the starting point.
    """
    P = np.asarray(problem.gram, dtype=float)
    q = np.asarray(problem.linear, dtype=float)
    m = q.size
    if P.shape != (m, m):
        raise ValueError("gram/linear size mismatch")
    if not (np.all(np.isfinite(P)) and np.all(np.isfinite(q))):
        raise ValueError("QP data contains non-finite entries")
    if m > 1 and float(np.max(np.abs(P - P.T))) > 1e-8:
        raise ValueError("gram matrix must be symmetric")
    P = (P + P.T) / 2.0 + 1e-12 * np.eye(m)
    eigenvalues = np.linalg.eigvalsh(P)
    if eigenvalues[0] < -1e-8 * max(1.0, eigenvalues[-1]):
        raise ValueError("gram matrix is not positive semidefinite")
    step = 1.0 / max(eigenvalues[-1], np.finfo(float).tiny)
    if w0 is None:
        w = np.full(m, 1.0 / m)
    else:
        w = project_to_simplex(w0)
    moved_tol2 = (grad_tol * step) ** 2
    return _descend_on_simplex(P, q, w, step, int(max_iter), moved_tol2)


def _bank_matrices(bank) -> list[np.ndarray]:
    mats = [kernel_values(K) for K in bank]
    if not mats:
        raise ValueError("kernel bank is empty")
    n = mats[0].shape[0]
    for r, K in enumerate(mats):
        if K.shape != (n, n):
            raise ValueError(f"kernel {r} has shape {K.shape}, expected ({n}, {n})")
    return mats


def run_cmklr(bank, tau: int, c: int, max_iter: int = 50, tol: float = 1e-5) -> SolverResult:
    """Alternating solve over a bank of m candidate kernels.

    Weights start uniform at 1/m and the per-kernel coefficient matrices
    are built once. Each iteration fuses the coefficients, rebuilds the
    Laplacian, takes the eigen step for Y, solves the simplex QP for w,
    and records the objective at the updated weights. Iteration stops when
    the relative decrease falls to tol (default 1e-5), when the objective
    hits its lower bound 0, or after max_iter iterations.
    """
    mats = _bank_matrices(bank)
    n = mats[0].shape[0]
    if not 2 <= c < n:
        raise ValueError(f"cluster count must be in [2, {n - 1}], got {c}")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    coeffs = [build_coefficients(K, tau) for K in mats]
    m = len(coeffs)
    w = np.full(m, 1.0 / m)
    trace: list[float] = []
    Y = None
    previous = None
    for _ in range(max_iter):
        A_w = fuse(coeffs, w)
        L = build_laplacian(A_w)
        Y = smallest_eigenvectors(L, c)
        gram, linear, stacked = _qp_data(coeffs, Y)
        w = solve_simplex_qp(QpProblem(gram=gram, linear=linear), w0=w)
        # ||Y - A_w Y||_F^2 at the updated weights, reusing the per-kernel
        # products A_r Y instead of re-fusing the sparse matrices
        residual = Y.ravel() - w @ stacked
        value = float(residual @ residual)
        trace.append(value)
        if previous is not None and (previous - value) / previous <= tol:
            break
        if value == 0.0:
            break  # lower bound reached; the relative test would divide by 0
        previous = value
    return SolverResult(
        embedding=Y,
        weights=w,
        objective_trace=trace,
        iterations=len(trace),
        tau=int(tau),
        num_clusters=int(c),
    )


def run_cklr(kernel, tau: int, c: int) -> SolverResult:
    """Single-kernel special case: one coefficient build plus one eigen step."""
    K = kernel_values(kernel)
    n = K.shape[0]
    if not 2 <= c < n:
        raise ValueError(f"cluster count must be in [2, {n - 1}], got {c}")
    A = build_coefficients(K, tau)
    L = build_laplacian(A)
    Y = smallest_eigenvectors(L, c)
    return SolverResult(
        embedding=Y,
        weights=np.array([1.0]),
        objective_trace=[objective(Y, A)],
        iterations=1,
        tau=int(tau),
        num_clusters=int(c),
    )
