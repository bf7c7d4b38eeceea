"""Binary-relevance top-k ranking metrics."""

import math


def _check_k(k):
    if k < 1:
        raise ValueError("k must be >= 1")


def precision_at_k(recommended, relevant, k: int) -> float:
    _check_k(k)
    return sum(1 for item in recommended[:k] if item in relevant) / k


def recall_at_k(recommended, relevant, k: int) -> float:
    _check_k(k)
    if not relevant:
        return 0.0
    return sum(1 for item in recommended[:k] if item in relevant) / len(relevant)


def ndcg_at_k(recommended, relevant, k: int) -> float:
    """nDCG with gain 1 for relevant items and discount log2(rank + 1)."""
    _check_k(k)
    dcg = math.fsum(1.0 / math.log2(i + 2)
                    for i, item in enumerate(recommended[:k]) if item in relevant)
    ideal = math.fsum(1.0 / math.log2(i + 2) for i in range(min(k, len(relevant))))
    if ideal == 0:
        return 0.0
    return dcg / ideal
