"""Shared synthetic-data helpers for the test suite."""

import numpy as np
import pytest


def three_blobs(n_per=100, d=10, separation=6.0, seed=1234):
    """Three isotropic Gaussian blobs (unit per-coordinate spread) whose
    centers form an equilateral triangle with the given side length."""
    rng = np.random.default_rng(seed)
    centers = np.zeros((3, d))
    centers[1, 0] = separation
    centers[2, 0] = separation / 2.0
    centers[2, 1] = separation * np.sqrt(3.0) / 2.0
    X = np.vstack([c + rng.standard_normal((n_per, d)) for c in centers])
    y = np.repeat(np.arange(3), n_per)
    return X, y


def random_orthonormal(n, c, rng):
    """Orthonormal n-by-c matrix from the QR of a Gaussian draw."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, c)))
    return Q[:, :c]


def block_kernel(sizes, inside=1.0, outside=0.0):
    """Block-constant similarity matrix: `inside` within blocks, `outside`
    across, unit diagonal."""
    n = sum(sizes)
    K = np.full((n, n), float(outside))
    start = 0
    for size in sizes:
        K[start : start + size, start : start + size] = float(inside)
        start += size
    np.fill_diagonal(K, 1.0)
    return K


@pytest.fixture(scope="session")
def blob_data():
    return three_blobs()
