"""Per-algorithm benchmark reports and runtime measurement."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Mapping, Optional

from ..jsonfmt import dumps
from ..model import AlgorithmId, Dataset
from ..recommenders import build_item_index, recommend
from .metrics import ndcg_at_k, precision_at_k, recall_at_k
from .split import SplitSpec, split_train_test

ALL_ALGORITHMS = tuple(AlgorithmId)


class EmptySample(ValueError):
    pass


@dataclass(frozen=True)
class AlgorithmResult:
    algorithm: AlgorithmId
    precision: float
    recall: float
    ndcg: float
    user_coverage: float
    mean_runtime_ms: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm.value,
            "precisionAtK": self.precision,
            "recallAtK": self.recall,
            "ndcgAtK": self.ndcg,
            "userCoverage": self.user_coverage,
            "meanRuntimeMs": self.mean_runtime_ms,
        }


@dataclass(frozen=True)
class EvaluationReport:
    k: int
    evaluated_users: int
    results: tuple

    def __getitem__(self, algorithm) -> AlgorithmResult:
        algorithm = AlgorithmId(algorithm)
        for r in self.results:
            if r.algorithm == algorithm:
                return r
        raise KeyError(algorithm)

    def to_dict(self) -> dict:
        return {"k": self.k, "evaluatedUserCount": self.evaluated_users,
                "results": [r.to_dict() for r in self.results]}

    def to_json(self) -> str:
        return dumps(self.to_dict())


def evaluate(algorithms, train: Dataset, test_sets: Mapping, index: Mapping, k: int = 10,
             measure_runtime: bool = False, hybrids: Mapping = None) -> EvaluationReport:
    """Score each algorithm on every test user.

    Users with empty lists count as zero in the rank metrics and are left
    out of coverage. Wall-clock timing is opt-in because it makes the
    report non-reproducible.
    """
    users = sorted(test_sets)
    results = []
    for alg in algorithms:
        alg = AlgorithmId(alg)
        p, r, n, covered, elapsed = [], [], [], 0, 0.0
        for user in users:
            start = time.perf_counter()
            items = [rec.item for rec in recommend(alg, user, train, index, k, hybrids=hybrids)]
            elapsed += time.perf_counter() - start
            relevant = test_sets[user]
            covered += bool(items)
            p.append(precision_at_k(items, relevant, k))
            r.append(recall_at_k(items, relevant, k))
            n.append(ndcg_at_k(items, relevant, k))
        count = len(users)
        results.append(AlgorithmResult(
            alg,
            math.fsum(p) / count if count else 0.0,
            math.fsum(r) / count if count else 0.0,
            math.fsum(n) / count if count else 0.0,
            covered / count if count else 0.0,
            1000.0 * elapsed / count if measure_runtime and count else None,
        ))
    return EvaluationReport(k, len(users), tuple(results))


def run_evaluation(dataset: Dataset, algorithms=ALL_ALGORITHMS, k: int = 10, seed: int = 0,
                   spec: SplitSpec = SplitSpec(), measure_runtime: bool = False) -> EvaluationReport:
    """Split, index and evaluate in one call."""
    train, test_sets = split_train_test(dataset, spec, seed)
    return evaluate(algorithms, train, test_sets, build_item_index(train), k, measure_runtime)


def measure_runtime(algorithm, train: Dataset, index: Mapping, users, repetitions: int = 3,
                    k: int = 10) -> float:
    """Mean wall-clock milliseconds of one top-``k`` call, warm caches."""
    users = list(users)
    if not users:
        raise EmptySample("no users to time")
    algorithm = AlgorithmId(algorithm)
    train.warm()
    recommend(algorithm, users[0], train, index, k)
    total = 0.0
    for _ in range(repetitions):
        for user in users:
            start = time.perf_counter()
            recommend(algorithm, user, train, index, k)
            total += time.perf_counter() - start
    return 1000.0 * total / (len(users) * repetitions)
