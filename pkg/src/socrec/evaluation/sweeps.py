"""Experiment sweeps: social-profile replacement and cold-start growth."""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..jsonfmt import format_number
from ..model import Dataset, restrict_to_users
from ..recommenders import build_item_index
from .report import ALL_ALGORITHMS, evaluate
from .split import NoEvaluableUsers, SplitSpec, split_train_test

METRICS = ("ndcg", "precision", "recall", "user_coverage")
TSV_HEADER = "condition\talgorithm\tmetric\tvalue"


class InsufficientPool(ValueError):
    pass


@dataclass(frozen=True)
class SweepSeries:
    conditions: tuple  # ((label, EvaluationReport), ...)

    def __post_init__(self):
        labels = [c for c, _ in self.conditions]
        if any(a >= b for a, b in zip(labels, labels[1:])):
            raise ValueError("condition labels must be strictly increasing")

    def labels(self) -> list:
        return [c for c, _ in self.conditions]

    def series(self, algorithm, metric: str) -> list:
        return [getattr(report[algorithm], metric) for _, report in self.conditions]

    def rows(self) -> list:
        rows = []
        for label, report in self.conditions:
            for res in report.results:
                for metric in METRICS:
                    rows.append((label, res.algorithm.value, metric, getattr(res, metric)))
        rows.sort(key=lambda r: r[:3])
        return rows

    def to_tsv(self) -> str:
        lines = [TSV_HEADER]
        lines += [f"{format_number(c)}\t{a}\t{m}\t{format_number(v)}" for c, a, m, v in self.rows()]
        return "\n".join(lines) + "\n"


def user_pools(dataset: Dataset):
    """(users with marketplace and social data, marketplace-only users), both sorted."""
    market, social = dataset.marketplace_users, dataset.social_users
    both = sorted(market & social)
    market_only = sorted(market - social)
    return both, market_only


def _ceil_share(i: int, size: int) -> int:
    return (i * size + 9) // 10


def _evaluate_population(dataset, population, spec, seed, k, index, algorithms):
    condition = restrict_to_users(dataset, population)
    train, test_sets = split_train_test(condition, spec, seed)
    return evaluate(algorithms, train, test_sets, index, k)


def run_profile_sweep(dataset: Dataset, spec: SplitSpec = SplitSpec(), seed: int = 0, k: int = 10,
                      algorithms=ALL_ALGORITHMS) -> SweepSeries:
    """Swap 0%, 10%, ..., 100% of social users for marketplace-only users.

    Replacement is cumulative: one seeded permutation of each pool fixes
    the order in which users leave and enter. The label of a condition is
    the share of marketplace-only users in the population.
    """
    both, market_only = user_pools(dataset)
    if not both:
        raise NoEvaluableUsers("no user has both marketplace and social data")
    if len(market_only) < len(both):
        raise InsufficientPool(
            f"{len(market_only)} marketplace-only users cannot replace {len(both)} social users")
    rng = random.Random(seed)
    leave = rng.sample(both, len(both))
    enter = rng.sample(market_only, len(market_only))
    index = build_item_index(dataset)

    conditions, done = [], set()
    for i in range(11):
        n = _ceil_share(i, len(both))
        if n in done:
            continue
        done.add(n)
        population = set(leave[n:]) | set(enter[:n])
        report = _evaluate_population(dataset, population, spec, seed, k, index, algorithms)
        conditions.append((n / len(both), report))
    return SweepSeries(tuple(conditions))


def run_coldstart_sweep(dataset: Dataset, spec: SplitSpec = SplitSpec(), seed: int = 0, k: int = 10,
                        algorithms=ALL_ALGORITHMS) -> SweepSeries:
    """Evaluate nested 10%, 20%, ..., 100% subsets of the social users."""
    both, _ = user_pools(dataset)
    if not both:
        raise NoEvaluableUsers("no user has both marketplace and social data")
    order = random.Random(seed).sample(both, len(both))
    index = build_item_index(dataset)
    conditions = []
    for i in range(1, 11):
        population = order[:_ceil_share(i, len(both))]
        report = _evaluate_population(dataset, population, spec, seed, k, index, algorithms)
        conditions.append((i / 10, report))
    return SweepSeries(tuple(conditions))
