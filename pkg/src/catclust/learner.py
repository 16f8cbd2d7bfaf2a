"""Multi-granular competitive learner with rival penalization.

Clusters seeded from data objects compete online for every object: the
winner absorbs the object and is awarded, the runner-up is penalized in
proportion to how strongly it contested the object. Penalized clusters
starve and empty out; dropping them at each epoch boundary and re-running
the competition yields a strictly decreasing ladder of natural cluster
counts, one converged partition per granularity level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .dataset import Dataset
from .frequencies import feature_weight_tables, stacked_tables

DEFAULT_ETA = 0.03
DEFAULT_MAX_PASSES = 100
DEFAULT_MAX_EPOCHS = 50


class LearnerError(ValueError):
    pass


def cluster_weight(delta: float) -> float:
    """Sigmoid importance weight of a cluster's award/penalty accumulator."""
    return 1.0 / (1.0 + math.exp(-10.0 * delta + 5.0))


@dataclass
class LearnerState:
    """All mutable per-epoch learning state.

    Cluster slots are dense 0..k-1 within an epoch; slots emptied mid-epoch
    stay addressable (and can be re-won) until the epoch boundary drops
    them. labels[i] == -1 means object i has not been assigned yet.
    """

    labels: np.ndarray          # (n,) int32, cluster id or -1
    counts: np.ndarray          # (k, d, m_max) int64 value counts
    nn: np.ndarray              # (k, d) int64 non-null member counts
    members: np.ndarray         # (k,) int64
    g: np.ndarray               # (k,) int64 wins in the current pass/epoch
    g_total: int                # running sum of g
    rho: np.ndarray             # (k,) float64 winning ratios of the last pass
    delta: np.ndarray           # (k,) float64 accumulators
    u: np.ndarray               # (k,) float64, sigmoid of delta
    omega: np.ndarray           # (k, d) float64 per-cluster feature weights
    eta: float = DEFAULT_ETA

    @property
    def k(self) -> int:
        return self.counts.shape[0]

    @classmethod
    def from_assignment(cls, values, labels, k, cardinalities, eta=DEFAULT_ETA):
        """Fresh-epoch state for a (possibly partial) assignment vector."""
        values = np.ascontiguousarray(values, dtype=np.int32)
        labels = np.ascontiguousarray(labels, dtype=np.int32)
        counts, nn, members = stacked_tables(values, labels, k, cardinalities)
        d = values.shape[1]
        delta = np.ones(k)
        u = np.array([cluster_weight(x) for x in delta])
        return cls(
            labels=labels,
            counts=counts,
            nn=nn,
            members=members,
            g=np.zeros(k, dtype=np.int64),
            g_total=0,
            rho=np.zeros(k),
            delta=delta,
            u=u,
            omega=np.full((k, d), 1.0 / d),
            eta=eta,
        )


@dataclass
class MultiGranularResult:
    """Ladder of converged partitions, finest to coarsest."""

    kappa: list[int]                    # strictly decreasing cluster counts
    partitions: list[np.ndarray]        # one (n,) label vector per level
    level_weights: list[np.ndarray]     # converged (k_j, d) feature weights
    converged: bool                     # outer loop hit its fixed point
    epoch_converged: list[bool]         # inner loop converged at each level

    @property
    def sigma(self) -> int:
        return len(self.kappa)

    def encoding(self) -> np.ndarray:
        """The (n, sigma) matrix whose columns are the level partitions."""
        return np.stack(self.partitions, axis=1).astype(np.int32)


def _scores(x, state: LearnerState, scale: float, competition=True,
            cumulative_wins=False):
    """Per-cluster similarity and competition score for one object."""
    k, d = state.omega.shape
    s = np.zeros(k)
    for l in range(k):
        total = 0.0
        for r in range(d):
            c = int(x[r])
            if c < 0 or state.nn[l, r] == 0:
                continue
            total += state.omega[l, r] * state.counts[l, r, c] / state.nn[l, r]
        s[l] = total * scale
    if not competition:
        return s, s.copy()
    if cumulative_wins:
        rho = state.g / state.g_total if state.g_total > 0 else np.zeros(k)
    else:
        rho = state.rho
    return s, (1.0 - rho) * state.u * s


def select_winner(x, state: LearnerState, scale=1.0) -> int:
    """Winning cluster: argmax of handicapped weighted similarity, ties to
    the lowest cluster id."""
    if state.k < 1:
        raise LearnerError("no live clusters")
    _, score = _scores(x, state, scale)
    return int(np.argmax(score))


def select_rival(x, winner: int, state: LearnerState, scale=1.0) -> int | None:
    """Best non-winning cluster, or None with a single live cluster."""
    if state.k <= 1:
        return None
    _, score = _scores(x, state, scale)
    score[winner] = -np.inf
    return int(np.argmax(score))


def apply_award_penalty(state: LearnerState, winner: int, rival: int | None,
                        rival_similarity: float = 0.0):
    """Record a win: award the winner, penalize the rival by its own
    similarity to the contested object."""
    state.g[winner] += 1
    state.g_total += 1
    state.delta[winner] += state.eta
    state.u[winner] = cluster_weight(state.delta[winner])
    if rival is not None:
        state.delta[rival] -= state.eta * rival_similarity
        state.u[rival] = cluster_weight(state.delta[rival])


def run_epoch(values, state: LearnerState, max_passes=DEFAULT_MAX_PASSES,
              keep_mean_prefactor=False, competition=True, penalty=True,
              learn_weights=True, cumulative_wins=False, kernel=None):
    """Iterate full passes until no assignment changes or max_passes.

    Objects are visited in dataset order; feature weights are refreshed
    after every pass. The winning-ratio handicap uses each cluster's win
    share of the previous pass; cumulative_wins instead accumulates wins
    over the whole epoch and recomputes the ratio per object. Returns
    (live_cluster_count, inner_converged).
    """
    if kernel is None:
        kernel = backend.get_backend(None)
    values = np.ascontiguousarray(values, dtype=np.int32)
    d = values.shape[1]
    scale = 1.0 / d if keep_mean_prefactor else 1.0
    converged = False
    for _ in range(max_passes):
        changed, state.g_total = kernel.run_pass(
            values, state.labels, state.counts, state.nn, state.members,
            state.g, state.g_total, state.rho, state.delta, state.u,
            state.omega, state.eta, scale, competition, penalty,
            cumulative_wins,
        )
        if learn_weights:
            _, _, _, state.omega = feature_weight_tables(
                values, state.labels, state.counts, state.nn, state.members
            )
        if competition and not cumulative_wins:
            total = state.g.sum()
            state.rho = state.g / total if total > 0 else np.zeros(state.k)
            state.g[:] = 0
            state.g_total = 0
        if changed == 0:
            converged = True
            break
    return int(np.count_nonzero(state.members)), converged


def _compact(labels, members):
    """Renumber live clusters to 0..k_new-1, preserving id order."""
    live = np.nonzero(members > 0)[0]
    remap = np.full(len(members), -1, dtype=np.int32)
    remap[live] = np.arange(len(live), dtype=np.int32)
    return remap[labels], len(live)


def seed_singletons(n, seed_indices):
    """Assignment vector with each seed object alone in its own cluster."""
    labels = np.full(n, -1, dtype=np.int32)
    for l, i in enumerate(seed_indices):
        labels[i] = l
    return labels


def run_multigranular(ds: Dataset, eta=DEFAULT_ETA, k0=None, seed=0,
                      max_passes=DEFAULT_MAX_PASSES,
                      max_epochs=DEFAULT_MAX_EPOCHS,
                      keep_mean_prefactor=False, random_reseed=False,
                      stop_on_partition=False, cumulative_wins=False,
                      kernel=None) -> MultiGranularResult:
    """Run competitive penalization epochs until the cluster count stops
    decreasing; record the converged partition of each granularity level.

    k0 defaults to floor(sqrt(n)). Survivor clusters carry their members
    into the next epoch with statistics reset; random_reseed instead
    restarts each epoch from freshly drawn singleton seeds.
    stop_on_partition additionally stops when two consecutive epochs
    converge to the identical partition even if k could still shrink.
    """
    n = ds.n
    if k0 is None:
        k0 = max(1, int(math.isqrt(n)))
    if not (1 <= k0 <= n):
        raise LearnerError(f"k0 must be in [1, n]; got {k0} for n={n}")

    rng = np.random.default_rng(seed)
    cards = ds.cardinalities
    labels = seed_singletons(n, rng.choice(n, size=k0, replace=False))
    k_prev = k0
    prev_partition = None

    kappa: list[int] = []
    partitions: list[np.ndarray] = []
    level_weights: list[np.ndarray] = []
    epoch_converged: list[bool] = []
    outer_converged = False

    for _ in range(max_epochs):
        state = LearnerState.from_assignment(ds.values, labels, k_prev, cards, eta)
        k_new, inner_ok = run_epoch(
            ds.values, state, max_passes=max_passes,
            keep_mean_prefactor=keep_mean_prefactor,
            cumulative_wins=cumulative_wins, kernel=kernel,
        )
        compact_labels, k_new = _compact(state.labels, state.members)
        live = np.nonzero(state.members > 0)[0]

        if k_new < k_prev or not kappa:
            kappa.append(k_new)
            partitions.append(compact_labels.copy())
            level_weights.append(state.omega[live].copy())
            epoch_converged.append(inner_ok)

        if k_new == k_prev:
            outer_converged = True
            break
        if stop_on_partition and prev_partition is not None \
                and np.array_equal(compact_labels, prev_partition):
            outer_converged = True
            break

        prev_partition = compact_labels
        k_prev = k_new
        if random_reseed:
            labels = seed_singletons(n, rng.choice(n, size=k_new, replace=False))
        else:
            labels = compact_labels

    return MultiGranularResult(kappa, partitions, level_weights,
                               outer_converged, epoch_converged)


def run_single_granularity(ds: Dataset, k, eta=DEFAULT_ETA, seed=0,
                           max_passes=DEFAULT_MAX_PASSES, competition=True,
                           penalty=False, learn_weights=False,
                           cumulative_wins=False, kernel=None) -> np.ndarray:
    """One epoch of (optionally competition-free) online assignment from k
    random singleton seeds; the ablation baselines of the full learner."""
    n = ds.n
    if not (1 <= k <= n):
        raise LearnerError(f"k must be in [1, n]; got {k} for n={n}")
    rng = np.random.default_rng(seed)
    labels = seed_singletons(n, rng.choice(n, size=k, replace=False))
    state = LearnerState.from_assignment(ds.values, labels, k, ds.cardinalities, eta)
    run_epoch(ds.values, state, max_passes=max_passes, competition=competition,
              penalty=penalty, learn_weights=learn_weights,
              cumulative_wins=cumulative_wins, kernel=kernel)
    compact_labels, _ = _compact(state.labels, state.members)
    return compact_labels


def overall_similarity(values, state: LearnerState, keep_mean_prefactor=False) -> float:
    """Importance-weighted sum of every object's similarity to its own
    cluster; diagnostic for the competition objective."""
    scale = 1.0 / values.shape[1] if keep_mean_prefactor else 1.0
    total = 0.0
    for i in range(values.shape[0]):
        l = int(state.labels[i])
        if l < 0:
            continue
        s, _ = _scores(values[i], state, scale)
        total += state.u[l] * s[l]
    return total
