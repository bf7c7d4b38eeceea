"""The twelve recommendation algorithms.

Every function here is pure over an immutable training :class:`Dataset`
and item index, and every ranking breaks ties by id so outputs are
bit-stable. Score aggregation uses ``math.fsum`` which makes sums
independent of accumulation order.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping

from .model import AlgorithmId, CF_ALGORITHMS, CONTENT_ALGORITHMS, Dataset
from .textindex import index_documents, more_like_this, tokenize

A = AlgorithmId

DEFAULT_NEIGHBORS = 20

CF_FEATURES = {
    A.CF_p: "purchases",
    A.CF_l: "likes",
    A.CF_c: "comments",
    A.CF_g: "groups",
    A.CF_i: "interests",
}

CONTENT_FIELDS = {A.C_t: "title", A.C_d: "description", A.C_st: "text"}


class EmptyValidation(ValueError):
    pass


@dataclass(frozen=True)
class Recommendation:
    item: str
    score: float
    rank: int


def _ranked(scored, k) -> list:
    """``scored`` holds (-score, item) pairs."""
    return [Recommendation(item, -neg, rank)
            for rank, (neg, item) in enumerate(heapq.nsmallest(k, scored), start=1)]


def build_item_index(dataset: Dataset) -> dict:
    """Title, description and combined-text indexes over the item catalogue."""
    docs = ((it.id, {"title": it.title, "description": it.description,
                     "text": f"{it.title} {it.description}"})
            for it in dataset.items.values())
    return index_documents(docs, fields=("title", "description", "text"))


def most_popular(train: Dataset, user: str, k: int) -> list:
    own = train.purchased.get(user, frozenset())
    out = []
    for item, count in train.popularity:
        if item in own:
            continue
        out.append(Recommendation(item, float(count), len(out) + 1))
        if len(out) == k:
            break
    return out


def cf_similarity(source: str, u: str, v: str, train: Dataset) -> float:
    """Cosine over binary feature-incidence sets."""
    sets = train.feature_sets(source)
    fu, fv = sets.get(u, frozenset()), sets.get(v, frozenset())
    if not fu or not fv:
        return 0.0
    return len(fu & fv) / math.sqrt(len(fu) * len(fv))


def interaction_similarity(u: str, v: str, train: Dataset) -> float:
    w = train.interaction_graph.get(u, {}).get(v, 0)
    if not w:
        return 0.0
    totals = train.interaction_totals
    return w / math.sqrt(totals[u] * totals[v])


def neighbors(algorithm: AlgorithmId, user: str, train: Dataset,
              n: int = DEFAULT_NEIGHBORS) -> dict:
    """Top-``n`` most similar users with positive similarity."""
    if algorithm == A.CF_in:
        partners = train.interaction_graph.get(user, {})
        totals = train.interaction_totals
        scored = [(-(w / math.sqrt(totals[user] * totals[v])), v) for v, w in partners.items()]
    else:
        kind = CF_FEATURES[algorithm]
        sets = train.feature_sets(kind)
        mine = sets.get(user)
        if not mine:
            return {}
        holders = train.feature_users(kind)
        overlap = Counter()
        for feat in mine:
            overlap.update(holders[feat])
        overlap.pop(user, None)
        size = len(mine)
        scored = [(-(c / math.sqrt(size * len(sets[v]))), v) for v, c in overlap.items()]
    return {v: -neg for neg, v in heapq.nsmallest(n, scored)}


def knn_recommend(algorithm: AlgorithmId, user: str, train: Dataset, k: int,
                  n: int = DEFAULT_NEIGHBORS) -> list:
    if algorithm not in CF_ALGORITHMS:
        raise ValueError(f"{algorithm} is not a collaborative-filtering variant")
    own = train.purchased.get(user, frozenset())
    purchased = train.purchased
    parts = defaultdict(list)
    for v, sim in neighbors(algorithm, user, train, n).items():
        for item in purchased.get(v, ()):
            if item not in own:
                parts[item].append(sim)
    return _ranked([(-math.fsum(sims), item) for item, sims in parts.items()], k)


def content_profile(algorithm: AlgorithmId, user: str, train: Dataset) -> dict:
    """Term-frequency profile from purchased item text or the user's stream posts."""
    if algorithm == A.C_st:
        texts = train.stream_texts.get(user, ())
    elif algorithm in (A.C_t, A.C_d):
        attr = "title" if algorithm == A.C_t else "description"
        texts = [getattr(train.items[i], attr) for i in train.purchase_lists.get(user, ())]
    else:
        raise ValueError(f"{algorithm} is not a content-based variant")
    profile = Counter()
    for text in texts:
        profile.update(tokenize(text))
    return dict(profile)


def content_recommend(algorithm: AlgorithmId, user: str, train: Dataset,
                      index: Mapping, k: int) -> list:
    profile = content_profile(algorithm, user, train)
    if not profile:
        return []
    own = train.purchased.get(user, frozenset())
    hits = more_like_this(profile, index[CONTENT_FIELDS[algorithm]], k + len(own))
    out = []
    for doc_id, score in hits:
        if doc_id not in own:
            out.append(Recommendation(doc_id, score, len(out) + 1))
            if len(out) == k:
                break
    return out


@dataclass(frozen=True)
class HybridConfig:
    """Weighted component algorithms; weights are renormalised at use."""

    components: tuple

    def __post_init__(self):
        comps = tuple((AlgorithmId(a), float(w)) for a, w in self.components)
        if not comps:
            raise ValueError("hybrid needs at least one component")
        ids = [a for a, _ in comps]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate hybrid component")
        for a, w in comps:
            if a.is_hybrid:
                raise ValueError(f"hybrid component {a} may not itself be a hybrid")
            if not (w >= 0 and math.isfinite(w)):
                raise ValueError(f"invalid weight {w} for {a}")
        if not any(w > 0 for _, w in comps):
            raise ValueError("at least one hybrid weight must be positive")
        object.__setattr__(self, "components", comps)

    @classmethod
    def equal(cls, *algorithms) -> "HybridConfig":
        return cls(tuple((a, 1.0) for a in algorithms))


DEFAULT_HYBRIDS = {
    A.CCF_m: HybridConfig.equal(A.CF_p, A.C_t, A.C_d),
    A.CCF_s: HybridConfig.equal(A.CF_in, A.CF_l, A.CF_c, A.CF_g, A.CF_i, A.C_st),
}


def _normalized(recs) -> dict:
    """Min-max normalise a component's scores; constant lists map to 1.0."""
    if not recs:
        return {}
    lo = min(r.score for r in recs)
    hi = max(r.score for r in recs)
    if hi == lo:
        return {r.item: 1.0 for r in recs}
    return {r.item: (r.score - lo) / (hi - lo) for r in recs}


def fuse(component_scores, weights, k: int) -> list:
    """Weighted sum of normalised component scores, top ``k``."""
    total = math.fsum(weights)
    parts = defaultdict(list)
    for scores, w in zip(component_scores, weights):
        if w <= 0:
            continue
        share = w / total
        for item, s in scores.items():
            parts[item].append(share * s)
    return _ranked([(-math.fsum(p), item) for item, p in parts.items()], k)


def hybrid_recommend(config: HybridConfig, user: str, train: Dataset, index: Mapping,
                     k: int, n: int = DEFAULT_NEIGHBORS) -> list:
    scores, weights = [], []
    for alg, w in config.components:
        if w > 0:
            scores.append(_normalized(recommend(alg, user, train, index, k, n=n)))
            weights.append(w)
    return fuse(scores, weights, k)


def recommend(algorithm: AlgorithmId, user: str, train: Dataset, index: Mapping,
              k: int = 10, *, n: int = DEFAULT_NEIGHBORS, hybrids: Mapping = None) -> list:
    """Top-``k`` recommendations for ``user`` from any algorithm."""
    algorithm = AlgorithmId(algorithm)
    if k < 1:
        raise ValueError("k must be >= 1")
    if algorithm == A.MP:
        return most_popular(train, user, k)
    if algorithm in CF_ALGORITHMS:
        return knn_recommend(algorithm, user, train, k, n)
    if algorithm in CONTENT_ALGORITHMS:
        return content_recommend(algorithm, user, train, index, k)
    config = (hybrids or DEFAULT_HYBRIDS).get(algorithm, DEFAULT_HYBRIDS[algorithm])
    return hybrid_recommend(config, user, train, index, k, n)


def weight_grid(m: int, step: float = 0.25) -> list:
    """Every weight tuple of length ``m`` over ``{0, step, ..., 1}``."""
    levels = [i * step for i in range(round(1 / step) + 1)]
    return list(itertools.product(levels, repeat=m))


def tune_weights(config: HybridConfig, validation, k: int = 10, step: float = 0.25,
                 index: Mapping = None, n: int = DEFAULT_NEIGHBORS) -> HybridConfig:
    """Exhaustive grid search of hybrid weights maximising mean nDCG@k.

    ``validation`` is a ``(train, test_sets)`` pair as returned by
    ``split_train_test``. Ties go to the lexicographically smallest
    normalised weight tuple. The returned weights sum to 1.
    """
    from .evaluation.metrics import ndcg_at_k

    train, test_sets = validation
    if not test_sets:
        raise EmptyValidation("validation split has no test users")
    algs = [a for a, _ in config.components]
    if len(algs) == 1:
        return HybridConfig(((algs[0], 1.0),))
    if index is None:
        index = build_item_index(train)

    users = sorted(test_sets)
    per_user = [[_normalized(recommend(a, u, train, index, k, n=n)) for a in algs]
                for u in users]

    best = None
    tried = set()
    for raw in weight_grid(len(algs), step):
        total = math.fsum(raw)
        if total == 0:
            continue
        weights = tuple(w / total for w in raw)
        if weights in tried:
            continue
        tried.add(weights)
        quality = math.fsum(
            ndcg_at_k([r.item for r in fuse(scores, weights, k)], test_sets[u], k)
            for u, scores in zip(users, per_user)) / len(users)
        key = (-quality, weights)
        if best is None or key < best:
            best = key
    return HybridConfig(tuple(zip(algs, best[1])))
