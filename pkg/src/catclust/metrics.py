"""External cluster-validity indices computed from a contingency table.

Conventions: ACC uses an optimal one-to-one label matching (rectangular
tables padded implicitly by the assignment solver); AMI uses natural-log
entropies, the hypergeometric expected-mutual-information model and
normalisation by the arithmetic mean of the entropies. Degenerate
denominators return the documented fixed values instead of NaN.
"""

from __future__ import annotations

from math import lgamma, log

import numpy as np
from scipy.optimize import linear_sum_assignment


def _check(pred, truth):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError(
            f"label vectors differ in length: {pred.shape[0]} vs {truth.shape[0]}"
        )
    if pred.size == 0:
        raise ValueError("empty label vectors")
    return pred, truth


def contingency_table(pred, truth) -> np.ndarray:
    """Counts matrix indexed by (predicted cluster, true class)."""
    pred, truth = _check(pred, truth)
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    table = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(table, (pi, ti), 1)
    return table


def same_partition(a, b) -> bool:
    """True when the two label vectors induce the same partition."""
    table = contingency_table(a, b)
    return bool(
        ((table > 0).sum(axis=0) <= 1).all() and ((table > 0).sum(axis=1) <= 1).all()
    )


def accuracy(pred, truth) -> float:
    """Fraction of objects correct under the best one-to-one matching of
    predicted labels to true classes."""
    table = contingency_table(pred, truth)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / table.sum())


def _comb2(x):
    return x * (x - 1) // 2


def ari(pred, truth) -> float:
    """Adjusted Rand index over object pairs; 1.0 for equal partitions in
    the degenerate all-singleton / one-cluster cases."""
    table = contingency_table(pred, truth)
    n = int(table.sum())
    sum_cells = int(_comb2(table).sum())
    a = int(_comb2(table.sum(axis=1)).sum())
    b = int(_comb2(table.sum(axis=0)).sum())
    pairs = _comb2(n)
    expected = a * b / pairs if pairs else 0.0
    maximum = (a + b) / 2.0
    if maximum == expected:
        return 1.0 if same_partition(pred, truth) else 0.0
    return (sum_cells - expected) / (maximum - expected)


def _entropy(marginal, n):
    nz = marginal[marginal > 0]
    return float(-np.sum((nz / n) * np.log(nz / n)))


def mutual_information(table) -> float:
    n = table.sum()
    a = table.sum(axis=1)
    b = table.sum(axis=0)
    mi = 0.0
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            nij = table[i, j]
            if nij > 0:
                mi += (nij / n) * log(n * nij / (a[i] * b[j]))
    return mi


def expected_mutual_information(a, b, n) -> float:
    """Expectation of MI over random tables with fixed marginals
    (hypergeometric model)."""
    emi = 0.0
    lg = lgamma
    for ai in a:
        for bj in b:
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            for nij in range(lo, hi + 1):
                term = (nij / n) * log(n * nij / (ai * bj))
                logp = (
                    lg(ai + 1) + lg(bj + 1) + lg(n - ai + 1) + lg(n - bj + 1)
                    - lg(n + 1) - lg(nij + 1) - lg(ai - nij + 1)
                    - lg(bj - nij + 1) - lg(n - ai - bj + nij + 1)
                )
                emi += term * np.exp(logp)
    return emi


def ami(pred, truth) -> float:
    """Adjusted mutual information; 1.0 for identical partitions, 0.0 when
    the adjustment denominator degenerates."""
    pred, truth = _check(pred, truth)
    if same_partition(pred, truth):
        return 1.0
    table = contingency_table(pred, truth)
    n = int(table.sum())
    mi = mutual_information(table)
    emi = expected_mutual_information(
        [int(x) for x in table.sum(axis=1)],
        [int(x) for x in table.sum(axis=0)],
        n,
    )
    mean_h = (_entropy(table.sum(axis=1), n) + _entropy(table.sum(axis=0), n)) / 2.0
    denom = mean_h - emi
    if abs(denom) < 1e-15:
        return 0.0
    return (mi - emi) / denom


def fm(pred, truth) -> float:
    """Fowlkes-Mallows score: geometric mean of pairwise precision and
    recall; 0.0 when either has no positive pairs."""
    table = contingency_table(pred, truth)
    tp = int(_comb2(table).sum())
    pp = int(_comb2(table.sum(axis=1)).sum())   # same-cluster pairs in pred
    tq = int(_comb2(table.sum(axis=0)).sum())   # same-class pairs in truth
    if pp == 0 or tq == 0:
        return 0.0
    return tp / np.sqrt(pp * tq)


def all_indices(pred, truth) -> dict[str, float]:
    return {
        "acc": accuracy(pred, truth),
        "ari": ari(pred, truth),
        "ami": ami(pred, truth),
        "fm": float(fm(pred, truth)),
    }
