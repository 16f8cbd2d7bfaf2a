"""Independent reference implementations used to validate the metrics.

Everything here is deliberately written by a different route than
catclust.metrics: indices are computed by explicit pair enumeration,
exhaustive matching enumeration, and exact rational hypergeometric sums,
so agreement between the two is meaningful evidence of correctness.
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import comb, log

import numpy as np


def set_partitions(elements):
    """All set partitions of `elements` as lists of blocks (lists)."""
    elements = list(elements)
    if not elements:
        return [[]]
    first, rest = elements[0], elements[1:]
    out = []
    for smaller in set_partitions(rest):
        for i in range(len(smaller)):
            out.append(smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:])
        out.append([[first]] + smaller)
    return out


def partition_labels(partition, n):
    """Label vector (block index per element) for a partition of range(n)."""
    labels = np.empty(n, dtype=np.int64)
    for block_id, block in enumerate(partition):
        for el in block:
            labels[el] = block_id
    return labels


def _pair_counts(pred, truth):
    """(TP, FP, FN, TN) over all unordered object pairs."""
    tp = fp = fn = tn = 0
    for i, j in combinations(range(len(pred)), 2):
        same_p = pred[i] == pred[j]
        same_t = truth[i] == truth[j]
        if same_p and same_t:
            tp += 1
        elif same_p:
            fp += 1
        elif same_t:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def rand_pairs_ari(pred, truth):
    """ARI via direct pair counting and the exact adjustment formula."""
    tp, fp, fn, tn = _pair_counts(pred, truth)
    total = tp + fp + fn + tn
    index = tp
    sum_a = tp + fp       # same-cluster pairs in pred
    sum_b = tp + fn       # same-class pairs in truth
    expected = Fraction(sum_a * sum_b, total) if total else Fraction(0)
    maximum = Fraction(sum_a + sum_b, 2)
    if maximum == expected:
        # Degenerate adjustment: defined as 1 for equal partitions, else 0.
        return 1.0 if _equal_partitions(pred, truth) else 0.0
    return float(Fraction(index) - expected) / float(maximum - expected)


def pairs_fm(pred, truth):
    tp, fp, fn, _ = _pair_counts(pred, truth)
    if tp + fp == 0 or tp + fn == 0:
        return 0.0
    return tp / ((tp + fp) * (tp + fn)) ** 0.5


def _equal_partitions(pred, truth):
    blocks_p = {}
    blocks_t = {}
    for i, (p, t) in enumerate(zip(pred, truth)):
        blocks_p.setdefault(p, set()).add(i)
        blocks_t.setdefault(t, set()).add(i)
    return set(map(frozenset, blocks_p.values())) == set(map(frozenset, blocks_t.values()))


def exhaustive_accuracy(pred, truth):
    """Best fraction correct over every one-to-one relabeling, by brute
    force over all permutations of the padded contingency matrix."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    k = max(pi.max(), ti.max()) + 1
    table = np.zeros((k, k), dtype=np.int64)
    np.add.at(table, (pi, ti), 1)
    best = 0
    for perm in permutations(range(k)):
        best = max(best, int(table[np.arange(k), perm].sum()))
    return best / len(pred)


def exact_emi(a, b, n):
    """Expected mutual information under the fixed-marginals
    hypergeometric model, with exact rational pair probabilities."""
    emi = 0.0
    for ai in a:
        for bj in b:
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            for nij in range(lo, hi + 1):
                p = Fraction(comb(ai, nij) * comb(n - ai, bj - nij), comb(n, bj))
                emi += float(p) * (nij / n) * log(n * nij / (ai * bj))
    return emi


def reference_ami(pred, truth):
    """AMI with the package's documented conventions, computed from
    scratch: natural logs, arithmetic-mean normalization, exact EMI."""
    if _equal_partitions(pred, truth):
        return 1.0
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    n = len(pred)
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    a = np.bincount(pi)
    b = np.bincount(ti)

    mi = 0.0
    for u in range(len(a)):
        for v in range(len(b)):
            nij = int(np.sum((pi == u) & (ti == v)))
            if nij:
                mi += (nij / n) * log(n * nij / (a[u] * b[v]))
    h_a = -sum((x / n) * log(x / n) for x in a if x)
    h_b = -sum((x / n) * log(x / n) for x in b if x)
    emi = exact_emi([int(x) for x in a], [int(x) for x in b], n)
    denom = (h_a + h_b) / 2 - emi
    if abs(denom) < 1e-15:
        return 0.0
    return (mi - emi) / denom
