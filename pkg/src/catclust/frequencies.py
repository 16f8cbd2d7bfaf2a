"""Per-cluster value-frequency statistics and similarity measures.

A cluster is summarised by, for every feature r, the count of members
holding each value code and the count of members with a non-null value in
r. Object-cluster similarity is the (optionally feature-weighted) average
of per-feature in-cluster value frequencies.
"""

from __future__ import annotations

import numpy as np

from .dataset import MISSING


class EmptyClusterError(ValueError):
    """Similarity queried against a cluster with no members."""


class FrequencyTable:
    """Incremental value-frequency statistics for one cluster.

    counts[r][t] is the number of members with code t in feature r;
    nn[r] the number of members with a non-null value in feature r.
    """

    def __init__(self, cardinalities):
        self.m = np.asarray(cardinalities, dtype=np.int64)
        self.d = len(self.m)
        self.counts = [np.zeros(m_r, dtype=np.int64) for m_r in self.m]
        self.nn = np.zeros(self.d, dtype=np.int64)
        self.member_count = 0

    def add(self, row):
        for r in range(self.d):
            c = int(row[r])
            if c != MISSING:
                self.counts[r][c] += 1
                self.nn[r] += 1
        self.member_count += 1

    def remove(self, row):
        if self.member_count == 0:
            raise ValueError("remove from empty frequency table")
        for r in range(self.d):
            c = int(row[r])
            if c != MISSING:
                if self.counts[r][c] == 0:
                    raise ValueError(
                        f"inconsistent remove: feature {r} code {c} not present"
                    )
                self.counts[r][c] -= 1
                self.nn[r] -= 1
        self.member_count -= 1

    def copy(self):
        out = FrequencyTable(self.m)
        out.counts = [c.copy() for c in self.counts]
        out.nn = self.nn.copy()
        out.member_count = self.member_count
        return out

    @classmethod
    def from_rows(cls, cardinalities, rows):
        table = cls(cardinalities)
        for row in rows:
            table.add(row)
        return table


def value_similarity(code: int, r: int, table: FrequencyTable) -> float:
    """Frequency of `code` among the cluster's non-null values in feature r."""
    if table.member_count < 1:
        raise EmptyClusterError("similarity against empty cluster")
    if code == MISSING or table.nn[r] == 0:
        return 0.0
    return table.counts[r][code] / table.nn[r]


def object_cluster_similarity(row, table: FrequencyTable, weights,
                              keep_mean_prefactor=False) -> float:
    """Weighted sum of per-feature value similarities.

    `weights` must sum to 1; the uniform weight 1/d recovers the plain
    averaged similarity. With keep_mean_prefactor the sum is additionally
    divided by d (compatibility behaviour; rescales, never reorders).
    """
    weights = np.asarray(weights, dtype=np.float64)
    if abs(weights.sum() - 1.0) > 1e-6:
        raise ValueError("feature weights must sum to 1")
    s = 0.0
    for r in range(table.d):
        s += weights[r] * value_similarity(int(row[r]), r, table)
    if keep_mean_prefactor:
        s /= table.d
    return s


def inter_cluster_difference(r: int, t_cluster: FrequencyTable,
                             t_rest: FrequencyTable) -> float:
    """Scaled Euclidean distance between in-cluster and rest-of-data value
    distributions over feature r; lies in [0, 1]."""
    if t_cluster.nn[r] == 0 or t_rest.nn[r] == 0:
        return 0.0
    p = t_cluster.counts[r] / t_cluster.nn[r]
    q = t_rest.counts[r] / t_rest.nn[r]
    return float(np.sqrt(np.sum((p - q) ** 2)) / np.sqrt(2.0))


def intra_cluster_similarity(r: int, rows, table: FrequencyTable) -> float:
    """Average over members of each member's own value frequency in r."""
    if table.member_count < 1:
        raise EmptyClusterError("intra-cluster similarity of empty cluster")
    total = 0.0
    for row in rows:
        c = int(row[r])
        if c != MISSING and table.nn[r] > 0:
            total += table.counts[r][c] / table.nn[r]
    return total / table.member_count


def stacked_tables(values, labels, k, cardinalities):
    """Build dense (k, d, m_max) count arrays from an assignment vector.

    Objects with label -1 are unassigned and excluded. Returns
    (counts, nn, members) matching the incremental kernel layout.
    """
    values = np.asarray(values, dtype=np.int32)
    labels = np.asarray(labels, dtype=np.int32)
    n, d = values.shape
    m_max = int(np.max(cardinalities))
    counts = np.zeros((k, d, m_max), dtype=np.int64)
    nn = np.zeros((k, d), dtype=np.int64)
    members = np.zeros(k, dtype=np.int64)
    for i in range(n):
        l = labels[i]
        if l < 0:
            continue
        members[l] += 1
        for r in range(d):
            c = values[i, r]
            if c != MISSING:
                counts[l, r, c] += 1
                nn[l, r] += 1
    return counts, nn, members


def feature_weight_tables(values, labels, counts, nn, members):
    """Compute per-cluster feature separation, compactness and weights.

    Returns (alpha, beta, H, omega), each of shape (k, d). alpha is the
    scaled distribution distance between a cluster and the rest of the
    data, beta the average in-cluster value frequency of the members, H
    their product and omega the per-cluster normalisation of H (uniform
    1/d when a cluster's H row sums to zero, and for empty clusters).
    """
    values = np.asarray(values, dtype=np.int32)
    labels = np.asarray(labels)
    k, d, m_max = counts.shape
    n = values.shape[0]

    total_counts = counts.sum(axis=0)           # (d, m_max)
    total_nn = nn.sum(axis=0)                   # (d,)
    rest_counts = total_counts[None, :, :] - counts
    rest_nn = total_nn[None, :] - nn

    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(nn[:, :, None] > 0, counts / nn[:, :, None], 0.0)
        q = np.where(rest_nn[:, :, None] > 0, rest_counts / rest_nn[:, :, None], 0.0)
    alpha = np.sqrt(np.sum((p - q) ** 2, axis=2)) / np.sqrt(2.0)
    alpha[(nn == 0) | (rest_nn == 0)] = 0.0

    # Per-cell lookup of each object's own value frequency in its cluster.
    beta = np.zeros((k, d))
    assigned = labels >= 0
    if assigned.any():
        rows = np.nonzero(assigned)[0]
        lab = labels[rows].astype(np.intp)
        cols = np.arange(d)[None, :]
        codes = values[rows]
        safe_codes = np.where(codes == MISSING, 0, codes)
        freq = counts[lab[:, None], cols, safe_codes].astype(np.float64)
        denom = nn[lab]                          # (n_assigned, d)
        with np.errstate(divide="ignore", invalid="ignore"):
            cell = np.where((codes != MISSING) & (denom > 0), freq / denom, 0.0)
        for r in range(d):
            np.add.at(beta[:, r], lab, cell[:, r])
    nonempty = members > 0
    beta[nonempty] /= members[nonempty, None]
    beta[~nonempty] = 0.0

    H = alpha * beta
    omega = np.full((k, d), 1.0 / d)
    row_sum = H.sum(axis=1)
    ok = row_sum > 0
    omega[ok] = H[ok] / row_sum[ok, None]
    return alpha, beta, H, omega
