"""Domain types for marketplace and social data, and validated dataset construction."""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union


class DatasetError(ValueError):
    """Base class for dataset validation failures."""


class DanglingReference(DatasetError):
    def __init__(self, record, item_id):
        self.record = record
        self.item_id = item_id
        super().__init__(f"{type(record).__name__} references unknown item {item_id!r}: {record}")


class DuplicateItemId(DatasetError):
    def __init__(self, item_id):
        self.item_id = item_id
        super().__init__(f"duplicate item id {item_id!r}")


class InvalidRecord(DatasetError):
    pass


@dataclass(frozen=True, order=True)
class Item:
    id: str
    title: str = ""
    description: str = ""
    kind = "item"


@dataclass(frozen=True, order=True)
class PurchaseEvent:
    user: str
    item: str
    timestamp: int
    kind = "purchase"


@dataclass(frozen=True, order=True)
class Like:
    user: str
    item: str
    kind = "like"


@dataclass(frozen=True, order=True)
class Comment:
    user: str
    item: str
    text: str = ""
    kind = "comment"


@dataclass(frozen=True, order=True)
class Interaction:
    userA: str
    userB: str
    weight: int = 1
    kind = "interaction"


@dataclass(frozen=True, order=True)
class StreamPost:
    user: str
    text: str
    kind = "stream"


@dataclass(frozen=True, order=True)
class GroupMembership:
    user: str
    group: str
    kind = "group"


@dataclass(frozen=True, order=True)
class Interest:
    user: str
    term: str
    kind = "interest"


SocialRecord = Union[Like, Comment, Interaction, StreamPost, GroupMembership, Interest]
Record = Union[Item, PurchaseEvent, SocialRecord]

RECORD_TYPES = {cls.kind: cls for cls in
                (Item, PurchaseEvent, Like, Comment, Interaction, StreamPost, GroupMembership, Interest)}
MARKETPLACE_KINDS = frozenset({"item", "purchase"})
SOCIAL_KINDS = frozenset({"like", "comment", "interaction", "stream", "group", "interest"})


class AlgorithmId(str, enum.Enum):
    MP = "MP"
    CF_p = "CF_p"
    CF_l = "CF_l"
    CF_c = "CF_c"
    CF_in = "CF_in"
    CF_g = "CF_g"
    CF_i = "CF_i"
    C_t = "C_t"
    C_d = "C_d"
    C_st = "C_st"
    CCF_m = "CCF_m"
    CCF_s = "CCF_s"

    @classmethod
    def parse(cls, text: str) -> "AlgorithmId":
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown algorithm {text!r}; expected one of "
                             f"{', '.join(a.value for a in cls)}") from None

    def __str__(self):
        return self.value

    @property
    def is_hybrid(self) -> bool:
        return self in (AlgorithmId.CCF_m, AlgorithmId.CCF_s)


CF_ALGORITHMS = (AlgorithmId.CF_p, AlgorithmId.CF_l, AlgorithmId.CF_c,
                 AlgorithmId.CF_in, AlgorithmId.CF_g, AlgorithmId.CF_i)
CONTENT_ALGORITHMS = (AlgorithmId.C_t, AlgorithmId.C_d, AlgorithmId.C_st)

# feature kinds consumed by incidence-based similarity
FEATURE_KINDS = ("purchases", "likes", "comments", "groups", "interests")


@dataclass(frozen=True)
class Dataset:
    """Immutable store of items, purchases and social records.

    Record collections are kept sorted so that two datasets built from the
    same multiset of records compare equal. Derived lookup tables are
    computed lazily and cached on the instance.
    """

    items: Mapping[str, Item]
    purchases: tuple = ()
    likes: tuple = ()
    comments: tuple = ()
    interactions: tuple = ()
    streams: tuple = ()
    groups: tuple = ()
    interests: tuple = ()
    users: frozenset = field(default_factory=frozenset)

    def records(self) -> list:
        """All records, items first, in canonical order."""
        out = [self.items[i] for i in sorted(self.items)]
        for coll in (self.purchases, self.likes, self.comments, self.interactions,
                     self.streams, self.groups, self.interests):
            out.extend(coll)
        return out

    def social_records(self) -> list:
        out = []
        for coll in (self.likes, self.comments, self.interactions,
                     self.streams, self.groups, self.interests):
            out.extend(coll)
        return out

    # -- derived views -------------------------------------------------

    @cached_property
    def purchase_lists(self) -> dict:
        """user -> tuple of purchased item ids, one entry per event."""
        acc = defaultdict(list)
        for p in self.purchases:
            acc[p.user].append(p.item)
        return {u: tuple(items) for u, items in acc.items()}

    @cached_property
    def purchased(self) -> dict:
        """user -> frozenset of distinct purchased item ids."""
        return {u: frozenset(items) for u, items in self.purchase_lists.items()}

    @cached_property
    def popularity(self) -> list:
        """(item, purchase count) sorted by count desc, item asc."""
        from .textindex import facet_count
        return facet_count([(p.item, p.user) for p in self.purchases])

    @cached_property
    def _features(self) -> dict:
        pairs = {
            "purchases": ((p.user, p.item) for p in self.purchases),
            "likes": ((r.user, r.item) for r in self.likes),
            "comments": ((r.user, r.item) for r in self.comments),
            "groups": ((r.user, r.group) for r in self.groups),
            "interests": ((r.user, r.term) for r in self.interests),
        }
        out = {}
        for kind, it in pairs.items():
            by_user = defaultdict(set)
            for user, feat in it:
                by_user[user].add(feat)
            by_feature = defaultdict(list)
            for user in sorted(by_user):
                for feat in by_user[user]:
                    by_feature[feat].append(user)
            out[kind] = ({u: frozenset(f) for u, f in by_user.items()},
                         {f: tuple(us) for f, us in by_feature.items()})
        return out

    def feature_sets(self, kind: str) -> dict:
        """user -> frozenset of features of the given kind."""
        return self._features[kind][0]

    def feature_users(self, kind: str) -> dict:
        """feature -> tuple of users holding it, sorted."""
        return self._features[kind][1]

    @cached_property
    def interaction_graph(self) -> dict:
        """user -> {partner: undirected weight}."""
        graph = defaultdict(dict)
        for r in self.interactions:
            graph[r.userA][r.userB] = r.weight
            graph[r.userB][r.userA] = r.weight
        return dict(graph)

    @cached_property
    def interaction_totals(self) -> dict:
        return {u: sum(nbrs.values()) for u, nbrs in self.interaction_graph.items()}

    @cached_property
    def stream_texts(self) -> dict:
        acc = defaultdict(list)
        for r in self.streams:
            acc[r.user].append(r.text)
        return {u: tuple(t) for u, t in acc.items()}

    @cached_property
    def marketplace_users(self) -> frozenset:
        return frozenset(p.user for p in self.purchases)

    @cached_property
    def social_users(self) -> frozenset:
        out = set()
        for r in self.social_records():
            if isinstance(r, Interaction):
                out.update((r.userA, r.userB))
            else:
                out.add(r.user)
        return frozenset(out)

    def warm(self) -> "Dataset":
        """Materialise every cached view (used before latency-sensitive serving)."""
        self.purchased, self.popularity, self.interaction_totals, self.stream_texts
        self._features
        return self


def _record_users(r) -> tuple:
    if isinstance(r, Interaction):
        return (r.userA, r.userB)
    return (r.user,)


def _check_str(r, name):
    v = getattr(r, name)
    if not isinstance(v, str):
        raise InvalidRecord(f"{r.kind}.{name} must be a string: {r}")
    return v


def build_dataset(items: Iterable[Item] = (), purchases: Iterable[PurchaseEvent] = (),
                  social: Iterable[SocialRecord] = ()) -> Dataset:
    """Validate records and assemble an immutable :class:`Dataset`.

    Interactions are canonicalised to ``userA < userB`` and weights of
    both directions are summed. Repeated purchases are kept.
    """
    item_map = {}
    for it in items:
        if not isinstance(it, Item):
            raise InvalidRecord(f"expected item record, got {it!r}")
        if not isinstance(it.id, str) or not it.id:
            raise InvalidRecord(f"item id must be a non-empty string: {it}")
        _check_str(it, "title")
        _check_str(it, "description")
        if it.id in item_map:
            raise DuplicateItemId(it.id)
        item_map[it.id] = it

    users = set()
    purchase_list = []
    for p in purchases:
        if not isinstance(p, PurchaseEvent):
            raise InvalidRecord(f"expected purchase record, got {p!r}")
        if not _check_str(p, "user"):
            raise InvalidRecord(f"empty user id: {p}")
        if (not isinstance(p.timestamp, int) or isinstance(p.timestamp, bool)
                or p.timestamp < 0):
            raise InvalidRecord(f"timestamp must be a non-negative integer: {p}")
        if p.item not in item_map:
            raise DanglingReference(p, p.item)
        purchase_list.append(p)
        users.add(p.user)

    buckets = defaultdict(list)
    weights = Counter()
    for r in social:
        if r.kind not in SOCIAL_KINDS or not isinstance(r, RECORD_TYPES[r.kind]):
            raise InvalidRecord(f"expected social record, got {r!r}")
        for u in _record_users(r):
            if not isinstance(u, str) or not u:
                raise InvalidRecord(f"user id must be a non-empty string: {r}")
        if isinstance(r, (Like, Comment)):
            if r.item not in item_map:
                raise DanglingReference(r, r.item)
            if isinstance(r, Comment):
                _check_str(r, "text")
        elif isinstance(r, Interaction):
            if not isinstance(r.weight, int) or isinstance(r.weight, bool) or r.weight < 1:
                raise InvalidRecord(f"interaction weight must be a positive integer: {r}")
            if r.userA == r.userB:
                raise InvalidRecord(f"self-interaction is not allowed: {r}")
            weights[tuple(sorted((r.userA, r.userB)))] += r.weight
            users.update((r.userA, r.userB))
            continue
        else:
            for name in ("text", "group", "term"):
                if hasattr(r, name):
                    _check_str(r, name)
        buckets[r.kind].append(r)
        users.add(r.user)

    interactions = tuple(Interaction(a, b, w) for (a, b), w in sorted(weights.items()))
    return Dataset(
        items=item_map,
        purchases=tuple(sorted(purchase_list)),
        likes=tuple(sorted(buckets["like"])),
        comments=tuple(sorted(buckets["comment"])),
        interactions=interactions,
        streams=tuple(sorted(buckets["stream"])),
        groups=tuple(sorted(buckets["group"])),
        interests=tuple(sorted(buckets["interest"])),
        users=frozenset(users),
    )


def rebuild(dataset: Dataset) -> Dataset:
    """Build a fresh dataset from another dataset's records."""
    return build_dataset(dataset.items.values(), dataset.purchases, dataset.social_records())


def restrict_to_users(dataset: Dataset, keep) -> Dataset:
    """Sub-dataset holding only records whose users are all in ``keep``.

    The item catalogue is kept whole.
    """
    keep = frozenset(keep)
    social = [r for r in dataset.social_records() if all(u in keep for u in _record_users(r))]
    return build_dataset(dataset.items.values(),
                         [p for p in dataset.purchases if p.user in keep], social)
