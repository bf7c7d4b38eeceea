"""Temporal per-user holdout of purchases."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

from ..model import Dataset, build_dataset


class NoEvaluableUsers(ValueError):
    pass


@dataclass(frozen=True)
class SplitSpec:
    min_purchases: int = 2
    test_fraction: float = 0.2

    def __post_init__(self):
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must lie strictly between 0 and 1")
        if self.min_purchases < 2:
            raise ValueError("min_purchases must be >= 2")

    def test_count(self, n_purchases: int) -> int:
        # guard against float noise such as 0.2 * 15 = 3.0000000000000004
        return max(1, math.ceil(self.test_fraction * n_purchases - 1e-9))


def split_train_test(dataset: Dataset, spec: SplitSpec = SplitSpec(), seed: int = 0):
    """Hold out each eligible user's most recent purchases.

    Returns ``(train, test_sets)`` where ``test_sets`` maps user -> set of
    held-out item ids. The policy is deterministic, so ``seed`` does not
    change the result; it is accepted so callers can thread one seed
    through a whole experiment.
    """
    by_user = defaultdict(list)
    for p in dataset.purchases:
        by_user[p.user].append(p)

    train_purchases, test_sets = [], {}
    for user in sorted(by_user):
        events = by_user[user]
        if len(events) < spec.min_purchases:
            train_purchases.extend(events)
            continue
        events = sorted(events, key=lambda p: (-p.timestamp, p.item))
        n_test = spec.test_count(len(events))
        test_sets[user] = frozenset(p.item for p in events[:n_test])
        train_purchases.extend(events[n_test:])

    if not test_sets:
        raise NoEvaluableUsers(f"no user has at least {spec.min_purchases} purchases")
    train = build_dataset(dataset.items.values(), train_purchases, dataset.social_records())
    return train, test_sets
