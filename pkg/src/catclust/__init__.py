"""Cluster analysis toolkit for categorical data.

Pipeline: a rival-penalized competitive learner discovers a decreasing
ladder of natural cluster counts with one partition per granularity, and a
weighted k-modes aggregator fuses those partitions into a final clustering.
Also ships validity indices (ACC/ARI/AMI/FM), a synthetic data generator,
ablation variants and a timing benchmark, all behind the `catclust` CLI.

The hot per-object learning pass runs in a compiled extension when
available, with a bit-identical pure-Python fallback (see catclust.backend).
"""

from .aggregate import run_aggregation
from .backend import BACKEND
from .dataset import (
    MISSING,
    Dataset,
    SynthSpec,
    drop_missing,
    generate_synthetic,
    load_csv,
)
from .learner import MultiGranularResult, run_multigranular
from .metrics import accuracy, all_indices, ami, ari, fm

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "MISSING",
    "Dataset",
    "MultiGranularResult",
    "SynthSpec",
    "accuracy",
    "all_indices",
    "ami",
    "ari",
    "drop_missing",
    "fm",
    "generate_synthetic",
    "load_csv",
    "run_aggregation",
    "run_multigranular",
]
