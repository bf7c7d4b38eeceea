"""Embedded inverted index: tokenizer, TF-IDF postings, MoreLikeThis and facets."""

from __future__ import annotations

import heapq
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

STOPWORDS = frozenset("""
a about all an and are as at be been but by can do for from has have he
if in into is it its more no not of on or our so than that the their them then
there these they this to was we were which will with
""".split())

_TOKEN_RE = re.compile(r"[^\W_]+")


class DuplicateDocId(ValueError):
    pass


def tokenize(text: str) -> list:
    """Lowercase, split on non-alphanumerics, drop 1-char tokens and stopwords."""
    return [t for t in _TOKEN_RE.findall(text.lower())
            if len(t) >= 2 and t not in STOPWORDS]


def tf_weight(tf: float) -> float:
    """Sublinear term-frequency damping, extended linearly below 1."""
    return 1.0 + math.log(tf) if tf >= 1 else tf


def idf_weight(doc_count: int, df: int) -> float:
    return math.log(1.0 + doc_count / df)


@dataclass(frozen=True)
class InvertedIndex:
    field: str
    doc_count: int = 0
    postings: Mapping[str, tuple] = field(default_factory=dict)
    doc_norm: Mapping[str, float] = field(default_factory=dict)

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def idf(self, term: str) -> float:
        return idf_weight(self.doc_count, self.df(term))

    def weight(self, term: str, tf: int) -> float:
        return tf_weight(tf) * self.idf(term)


def index_documents(docs: Iterable, fields: Iterable[str] = ()) -> dict:
    """Build one :class:`InvertedIndex` per field.

    ``docs`` is an iterable of ``(doc_id, {field: text})``. Fields listed in
    ``fields`` get an index even when no document carries them.
    """
    seen = set()
    counts = defaultdict(dict)  # field -> doc -> Counter
    for doc_id, texts in docs:
        if doc_id in seen:
            raise DuplicateDocId(doc_id)
        seen.add(doc_id)
        for name, text in texts.items():
            counts[name][doc_id] = Counter(tokenize(text))
    for name in fields:
        counts.setdefault(name, {})

    n = len(seen)
    out = {}
    for name, per_doc in counts.items():
        postings = defaultdict(list)
        for doc_id in sorted(per_doc):
            for term, tf in per_doc[doc_id].items():
                postings[term].append((doc_id, tf))
        postings = {t: tuple(p) for t, p in postings.items()}
        norms = {}
        for doc_id in seen:
            tfs = per_doc.get(doc_id, {})
            norms[doc_id] = math.sqrt(math.fsum(
                (tf_weight(tf) * idf_weight(n, len(postings[t]))) ** 2 for t, tf in tfs.items()))
        out[name] = InvertedIndex(name, n, postings, norms)
    return out


def select_query_terms(profile: Mapping[str, float], index: InvertedIndex,
                       max_query_terms: int = 25, min_doc_freq: int = 1) -> dict:
    """Pick the highest TF-IDF profile terms present in the index.

    Returns ``{term: query weight}``; ties broken by term.
    """
    weighted = []
    for term, w in profile.items():
        df = index.df(term)
        if w > 0 and df >= max(min_doc_freq, 1):
            weighted.append((-(tf_weight(w) * idf_weight(index.doc_count, df)), term))
    return {term: -neg for neg, term in heapq.nsmallest(max_query_terms, weighted)}


def more_like_this(profile: Mapping[str, float], index: InvertedIndex, k: int,
                   max_query_terms: int = 25, min_doc_freq: int = 1) -> list:
    """Cosine-ranked ``(doc_id, score)`` list of the top ``k`` documents."""
    if k < 1:
        raise ValueError("k must be >= 1")
    query = select_query_terms(profile, index, max_query_terms, min_doc_freq)
    if not query:
        return []
    qnorm = math.sqrt(math.fsum(w * w for w in query.values()))
    parts = defaultdict(list)
    for term, qw in query.items():
        idf = index.idf(term)
        for doc_id, tf in index.postings[term]:
            parts[doc_id].append(qw * (tf_weight(tf) * idf))
    scored = []
    for doc_id, terms in parts.items():
        score = math.fsum(terms) / (qnorm * index.doc_norm[doc_id])
        if score > 0:
            scored.append((-score, doc_id))
    return [(doc_id, -neg) for neg, doc_id in heapq.nsmallest(k, scored)]


def facet_count(pairs: Iterable) -> list:
    """Count keys of ``(key, doc_id)`` pairs; sorted by count desc, key asc."""
    counts = Counter(key for key, _ in pairs)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
