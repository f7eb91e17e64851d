"""Embedding discretization: row normalization plus multi-restart K-means.

The relaxed embedding is row-normalized to the unit sphere, then Lloyd's
algorithm runs from several random initializations and the restart with
the smallest within-cluster sum of squares wins. Every restart draws its
initialization from an independent deterministic stream keyed by
(seed, restart index), so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Assignment:
    """Cluster labels in [0, c) plus the K-means objective that chose them."""

    labels: np.ndarray
    inertia: float


def row_normalize(Y) -> np.ndarray:
    """Divide each row by its Euclidean norm; rows with norm below 1e-12
    are zeroed instead of amplifying noise."""
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2:
        raise ValueError("embedding must be 2-d")
    norms = np.linalg.norm(Y, axis=1)
    out = np.zeros_like(Y)
    keep = norms >= 1e-12
    out[keep] = Y[keep] / norms[keep, None]
    return out


def _squared_distances_to_centers(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # direct (x - c)^2 form: no cancellation, and exactly invariant under
    # coordinate sign flips
    diff = X[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _kmeanspp_init(X: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((c, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for k in range(1, c):
        total = float(d2.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[k] = X[idx]
        d2 = np.minimum(d2, np.sum((X - centers[k]) ** 2, axis=1))
    return centers


def _update_centers(X, labels, centers, c):
    """Mean update plus empty-cluster repair by farthest-point seizure."""
    new_centers = centers.copy()
    counts = np.bincount(labels, minlength=c)
    for k in range(c):
        if counts[k] > 0:
            new_centers[k] = X[labels == k].mean(axis=0)
    empty = np.nonzero(counts == 0)[0]
    if empty.size:
        labels = labels.copy()
        d2 = _squared_distances_to_centers(X, new_centers)
        dist_own = d2[np.arange(X.shape[0]), labels]
        for k in empty:
            farthest = int(np.argmax(dist_own))
            new_centers[k] = X[farthest]
            labels[farthest] = k
            dist_own[farthest] = 0.0
    return new_centers, labels


def lloyd(X, c: int, rng: np.random.Generator, max_iter: int = 300, init: str = "random"):
    """One K-means run; returns (labels, inertia, per-iteration inertias).

    Initialization samples c distinct rows uniformly ("random", the
    default) or uses the distance-weighted "kmeans++" scheme. Iteration
    stops when the assignment no longer changes or after max_iter rounds.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if c > n:
        raise ValueError(f"cannot form {c} clusters from {n} points")
    if init == "random":
        centers = X[rng.choice(n, size=c, replace=False)].copy()
    elif init == "kmeans++":
        centers = _kmeanspp_init(X, c, rng)
    else:
        raise ValueError(f"unknown init {init!r}")
    previous = None
    labels = None
    history = []
    for _ in range(max_iter):
        d2 = _squared_distances_to_centers(X, centers)
        labels = np.argmin(d2, axis=1)
        history.append(float(d2[np.arange(n), labels].sum()))
        if previous is not None and np.array_equal(labels, previous):
            break
        # repair may relabel a seized point; that adjusted assignment seeds
        # the next round but the returned labels always match history[-1]
        centers, previous = _update_centers(X, labels, centers, c)
    return labels, history[-1], history


def kmeans(points, c: int, restarts: int = 20, seed: int = 0,
           max_iter: int = 300, init: str = "random") -> Assignment:
    """Multi-restart K-means keeping the minimum-inertia restart.

    Restart j draws from numpy's deterministic stream keyed by (seed, j).
    Ties in the final inertia go to the lowest restart index.
    """
    X = np.asarray(points, dtype=float)
    if restarts < 1:
        raise ValueError("need at least one restart")
    best: Assignment | None = None
    for j in range(restarts):
        rng = np.random.default_rng([seed, j])
        labels, inertia, _ = lloyd(X, c, rng, max_iter=max_iter, init=init)
        if best is None or inertia < best.inertia:
            best = Assignment(labels=labels, inertia=inertia)
    return best
