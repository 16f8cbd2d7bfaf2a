"""Weighted k-modes aggregation of multi-granular partitions.

The encoding matrix (one column per granularity level) is clustered with
per-column importance weights: objects go to the mode minimizing the
weighted per-cell Hamming distance, modes are per-column majorities, and a
column's weight is its share of object-mode matches. Run on a raw value
matrix with frozen uniform weights this is plain k-modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_CHUNK = 8192


class AggregationError(ValueError):
    pass


@dataclass
class AggregationState:
    data: np.ndarray        # (n, p) int codes
    theta: np.ndarray       # (p,) column weights, sum 1
    modes: np.ndarray       # (k, p) mode table
    assignment: np.ndarray  # (n,) cluster ids


def weighted_distance(row, mode, theta) -> float:
    """Column-weighted Hamming distance between two code vectors."""
    row = np.asarray(row)
    mode = np.asarray(mode)
    theta = np.asarray(theta, dtype=np.float64)
    if row.shape != mode.shape or row.shape != theta.shape:
        raise AggregationError("row, mode and theta lengths must match")
    return float(theta[row != mode].sum())


def _distance_matrix(data, modes, theta):
    """(n, k) weighted Hamming distances, chunked to bound memory."""
    n = data.shape[0]
    k = modes.shape[0]
    out = np.empty((n, k))
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        mism = data[start:stop, None, :] != modes[None, :, :]
        out[start:stop] = mism @ theta
    return out


def assign_objects(state: AggregationState) -> np.ndarray:
    """Nearest-mode assignment, ties to the lowest cluster id."""
    dist = _distance_matrix(state.data, state.modes, state.theta)
    return np.argmin(dist, axis=1).astype(np.int64)


def update_modes(state: AggregationState):
    """Set each mode cell to the most frequent member code (ties to the
    smallest code). An empty cluster steals the single worst-fit object:
    the one with maximal weighted distance to its own current mode."""
    data = state.data
    k, p = state.modes.shape
    for l in range(k):
        sel = state.assignment == l
        if not sel.any():
            dist = _distance_matrix(data, state.modes, state.theta)
            fit = dist[np.arange(len(data)), state.assignment]
            worst = int(np.argmax(fit))
            state.assignment[worst] = l
            state.modes[l] = data[worst]
            continue
        block = data[sel]
        for r in range(p):
            codes, freq = np.unique(block[:, r], return_counts=True)
            state.modes[l, r] = codes[np.argmax(freq)]


def update_theta(state: AggregationState):
    """Reweight columns by their count of object-mode matches; uniform
    when nothing matches anywhere."""
    matches = (state.data == state.modes[state.assignment]).sum(axis=0)
    total = matches.sum()
    p = len(state.theta)
    if total == 0:
        state.theta = np.full(p, 1.0 / p)
    else:
        state.theta = matches / total


def objective(state: AggregationState) -> float:
    """Total weighted Hamming distance of objects to their modes."""
    mism = state.data != state.modes[state.assignment]
    return float((mism @ state.theta).sum())


def _density_distance_init(distinct, counts, k):
    """Deterministic mode seeding: start from the most frequent distinct
    row, then greedily add the row maximizing frequency times its minimum
    uniform-Hamming distance to the modes chosen so far."""
    density = counts / counts.sum()
    p = distinct.shape[1]
    chosen = [int(np.argmax(density))]
    min_dist = (distinct != distinct[chosen[0]]).sum(axis=1) / p
    for _ in range(1, k):
        score = density * min_dist
        score[chosen] = -1.0
        nxt = int(np.argmax(score))
        chosen.append(nxt)
        min_dist = np.minimum(min_dist, (distinct != distinct[nxt]).sum(axis=1) / p)
    return np.array(chosen)


def run_aggregation(data, k, seed=0, max_iter=100, weighting=True,
                    frozen_modes=False,
                    init="density") -> tuple[np.ndarray, np.ndarray, bool]:
    """Cluster the code matrix into k groups by alternating assignment,
    mode update and column reweighting until the assignment is stable.

    weighting=False freezes uniform column weights (plain k-modes on raw
    data, unweighted aggregation on encodings). frozen_modes pins the mode
    table to its initial sample. init="density" (default) seeds modes
    deterministically by frequency and spread; init="random" samples k
    distinct rows without replacement using `seed`. Returns
    (labels, theta, converged).
    """
    data = np.ascontiguousarray(data)
    if data.ndim != 2:
        raise AggregationError("data must be a 2-D code matrix")
    n, p = data.shape
    if not (1 <= k <= n):
        raise AggregationError(f"k must be in [1, n]; got {k}")
    distinct, dcounts = np.unique(data, axis=0, return_counts=True)
    if k > distinct.shape[0]:
        raise AggregationError(
            f"insufficient distinct objects: k={k} but only "
            f"{distinct.shape[0]} distinct rows"
        )

    if init == "density":
        pick = _density_distance_init(distinct, dcounts, k)
    elif init == "random":
        rng = np.random.default_rng(seed)
        pick = rng.choice(distinct.shape[0], size=k, replace=False)
    else:
        raise AggregationError(f"unknown init {init!r}")
    state = AggregationState(
        data=data,
        theta=np.full(p, 1.0 / p),
        modes=distinct[pick].copy(),
        assignment=np.zeros(n, dtype=np.int64),
    )

    state.assignment = assign_objects(state)
    converged = False
    for _ in range(max_iter):
        if not frozen_modes:
            update_modes(state)
        if weighting:
            update_theta(state)
        new_assignment = assign_objects(state)
        if np.array_equal(new_assignment, state.assignment):
            converged = True
            break
        state.assignment = new_assignment
    return state.assignment, state.theta, converged
