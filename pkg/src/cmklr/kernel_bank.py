"""Candidate kernel matrices and the standard kernel banks.

Single-view data gets a 12-kernel bank: seven Gaussian kernels with
bandwidths spread over a grid of multiples of the mean pairwise distance,
four polynomial kernels, and one cosine kernel. Multi-view data gets one
Gaussian (bandwidth = that view's mean pairwise distance) plus one cosine
kernel per view. Every bank entry is unit-diagonal normalized so that no
kernel dominates the mixture by raw scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GAUSSIAN_BANDWIDTH_FACTORS = (0.01, 0.05, 0.1, 1.0, 10.0, 50.0, 100.0)
POLYNOMIAL_GRID = ((0.0, 2), (0.0, 4), (1.0, 2), (1.0, 4))


@dataclass
class KernelMatrix:
    """A dense n-by-n similarity matrix plus the recipe that built it."""

    values: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def kernel_values(kernel) -> np.ndarray:
    """Return the raw matrix of a KernelMatrix or a bare array."""
    if isinstance(kernel, KernelMatrix):
        return kernel.values
    return np.asarray(kernel, dtype=float)


def _check_features(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("feature matrix must be 2-d (samples x features)")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError("feature matrix must be non-empty")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature matrix contains non-finite entries")
    return X


def _symmetrize(K: np.ndarray) -> np.ndarray:
    # (a+b)/2 == (b+a)/2 in IEEE arithmetic, so the result is exactly symmetric
    return (K + K.T) / 2.0


def _squared_distances(X: np.ndarray) -> np.ndarray:
    # ||x-y||^2 = ||x||^2 + ||y||^2 - 2 x.y, clamped at 0 against round-off
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def mean_pairwise_distance(X) -> float:
    """Mean Euclidean distance over all unordered sample pairs.

    Self-distances are excluded; they are identically zero and would bias
    the mean. Raises if fewer than two samples are given or if all samples
    coincide (a zero mean distance leaves the Gaussian bandwidth grid
    undefined).
    """
    X = _check_features(X)
    n = X.shape[0]
    if n < 2:
        raise ValueError("mean pairwise distance needs at least two samples")
    d = np.sqrt(_squared_distances(X))
    d0 = float(d[np.triu_indices(n, k=1)].mean())
    if d0 == 0.0:
        raise ValueError("all samples identical: mean pairwise distance is zero")
    return d0


def gaussian_kernel(X, delta: float) -> KernelMatrix:
    """Gaussian kernel k(x, y) = exp(-||x - y||^2 / (2 delta^2))."""
    X = _check_features(X)
    if delta <= 0:
        raise ValueError(f"gaussian bandwidth must be positive, got {delta}")
    K = np.exp(-_squared_distances(X) / (2.0 * delta * delta))
    np.fill_diagonal(K, 1.0)
    return KernelMatrix(_symmetrize(K), "gaussian", {"delta": float(delta)})


def polynomial_kernel(X, a: float, b: int) -> KernelMatrix:
    """Polynomial kernel k(x, y) = (a + x.y)^b."""
    X = _check_features(X)
    if b < 1 or int(b) != b:
        raise ValueError(f"polynomial degree must be a positive integer, got {b}")
    K = (a + X @ X.T) ** int(b)
    return KernelMatrix(_symmetrize(K), "polynomial", {"a": float(a), "b": int(b)})


def cosine_kernel(X) -> KernelMatrix:
    """Cosine similarity kernel k(x, y) = x.y / (||x|| ||y||)."""
    X = _check_features(X)
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0.0):
        rows = np.nonzero(norms == 0.0)[0]
        raise ValueError(f"cosine kernel undefined for zero-norm rows {rows.tolist()}")
    U = X / norms[:, None]
    K = U @ U.T
    np.clip(K, -1.0, 1.0, out=K)
    np.fill_diagonal(K, 1.0)
    return KernelMatrix(_symmetrize(K), "cosine", {})


def normalize_unit_diagonal(kernel) -> KernelMatrix:
    """Rescale to K'_ij = K_ij / sqrt(K_ii K_jj), giving a unit diagonal.

    A no-op (bit for bit) on kernels that already have unit diagonal, such
    as Gaussian and cosine kernels.
    """
    K = kernel_values(kernel)
    diag = np.diag(K).copy()
    if np.any(diag <= 0.0):
        rows = np.nonzero(diag <= 0.0)[0]
        raise ValueError(
            f"unit-diagonal normalization needs positive diagonal; bad rows {rows.tolist()}"
        )
    root = np.sqrt(diag)
    out = K / root[:, None] / root[None, :]
    np.fill_diagonal(out, 1.0)
    if isinstance(kernel, KernelMatrix):
        return KernelMatrix(_symmetrize(out), kernel.kind, dict(kernel.params))
    return KernelMatrix(_symmetrize(out), "custom", {})


def zscore(X) -> np.ndarray:
    """Per-feature standardization; constant features are only centered."""
    X = _check_features(X)
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0.0] = 1.0
    return (X - mu) / sd


def build_single_view_bank(X) -> list[KernelMatrix]:
    """The standard 12-kernel bank for a single feature matrix.

    Canonical order: Gaussian kernels with delta = factor * d0 for factor
    in GAUSSIAN_BANDWIDTH_FACTORS (d0 = mean pairwise distance), then
    polynomial kernels over POLYNOMIAL_GRID, then the cosine kernel. All
    entries are unit-diagonal normalized.
    """
    X = _check_features(X)
    d0 = mean_pairwise_distance(X)
    bank = []
    for factor in GAUSSIAN_BANDWIDTH_FACTORS:
        K = gaussian_kernel(X, factor * d0)
        K.params["d0"] = d0
        bank.append(normalize_unit_diagonal(K))
    for a, b in POLYNOMIAL_GRID:
        bank.append(normalize_unit_diagonal(polynomial_kernel(X, a, b)))
    bank.append(normalize_unit_diagonal(cosine_kernel(X)))
    return bank


def build_multi_view_bank(views) -> list[KernelMatrix]:
    """Two kernels per view: Gaussian with that view's mean pairwise
    distance as bandwidth, then cosine. All unit-diagonal normalized."""
    views = [_check_features(v) for v in views]
    if not views:
        raise ValueError("need at least one view")
    n = views[0].shape[0]
    for i, v in enumerate(views):
        if v.shape[0] != n:
            raise ValueError(f"view {i} has {v.shape[0]} samples, expected {n}")
    bank = []
    for v in views:
        d0 = mean_pairwise_distance(v)
        K = gaussian_kernel(v, d0)
        K.params["d0"] = d0
        bank.append(normalize_unit_diagonal(K))
        bank.append(normalize_unit_diagonal(cosine_kernel(v)))
    return bank
