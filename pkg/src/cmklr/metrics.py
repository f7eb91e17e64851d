"""External clustering evaluation against ground-truth labels.

Accuracy maps predicted clusters to true classes with the Kuhn-Munkres
algorithm before counting matches; normalized mutual information divides
the empirical mutual information by the larger of the two partition
entropies; purity credits each predicted cluster with its majority class.
All three are invariant under relabeling of either argument.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment


def _paired_codes(pred, truth):
    p = np.asarray(pred)
    t = np.asarray(truth)
    if p.ndim != 1 or t.ndim != 1:
        raise ValueError("label vectors must be 1-d")
    if p.size == 0 or t.size == 0:
        raise ValueError("label vectors must be non-empty")
    if p.size != t.size:
        raise ValueError(f"label vectors differ in length ({p.size} vs {t.size})")
    _, p_codes = np.unique(p, return_inverse=True)
    _, t_codes = np.unique(t, return_inverse=True)
    return p_codes, t_codes


def contingency_table(pred, truth) -> np.ndarray:
    """Co-occurrence counts, predicted clusters as rows, true classes as columns."""
    p, t = _paired_codes(pred, truth)
    table = np.zeros((int(p.max()) + 1, int(t.max()) + 1), dtype=np.int64)
    np.add.at(table, (p, t), 1)
    return table


def accuracy(pred, truth) -> float:
    """Fraction of samples matched under the best cluster-to-class mapping.

    The contingency table is zero-padded to square when the cluster counts
    differ, and the maximum-weight assignment over it gives the mapping.
    """
    table = contingency_table(pred, truth)
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: table.shape[0], : table.shape[1]] = table
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return float(padded[rows, cols].sum()) / float(np.asarray(pred).size)


def nmi(pred, truth) -> float:
    """Mutual information normalized by max(H(pred), H(truth)), natural log.

    Empty joint cells contribute nothing. If both partitions are a single
    block the ratio is 0/0; identical trivial partitions score 1 by
    convention.
    """
    table = contingency_table(pred, truth).astype(float)
    joint = table / table.sum()
    p_pred = joint.sum(axis=1)
    p_truth = joint.sum(axis=0)
    nonzero = joint > 0.0
    mi = float(np.sum(joint[nonzero] * np.log(joint[nonzero] / np.outer(p_pred, p_truth)[nonzero])))
    h_pred = float(-np.sum(p_pred * np.log(p_pred, where=p_pred > 0, out=np.zeros_like(p_pred))))
    h_truth = float(-np.sum(p_truth * np.log(p_truth, where=p_truth > 0, out=np.zeros_like(p_truth))))
    denom = max(h_pred, h_truth)
    if denom == 0.0:
        return 1.0 if table.shape == (1, 1) else 0.0
    return min(max(mi / denom, 0.0), 1.0)


def purity(pred, truth) -> float:
    """Fraction of samples in their predicted cluster's majority class."""
    table = contingency_table(pred, truth)
    return float(table.max(axis=1).sum()) / float(np.asarray(pred).size)
