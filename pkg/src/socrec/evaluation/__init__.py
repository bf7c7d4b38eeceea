"""Offline evaluation: splitting, metrics, reports, sweeps and synthetic data."""

from .metrics import ndcg_at_k, precision_at_k, recall_at_k
from .report import (ALL_ALGORITHMS, AlgorithmResult, EmptySample, EvaluationReport,
                     evaluate, measure_runtime, run_evaluation)
from .split import NoEvaluableUsers, SplitSpec, split_train_test
from .sweeps import InsufficientPool, SweepSeries, run_coldstart_sweep, run_profile_sweep
from .synthetic import SyntheticParams, generate_synthetic

__all__ = [
    "ALL_ALGORITHMS", "AlgorithmResult", "EmptySample", "EvaluationReport", "InsufficientPool",
    "NoEvaluableUsers", "SplitSpec", "SweepSeries", "SyntheticParams", "evaluate",
    "generate_synthetic", "measure_runtime", "ndcg_at_k", "precision_at_k", "recall_at_k",
    "run_coldstart_sweep", "run_evaluation", "run_profile_sweep", "split_train_test",
]
