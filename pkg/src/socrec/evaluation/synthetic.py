"""Seeded synthetic marketplace with planted user communities."""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..model import (Comment, GroupMembership, Interaction, Interest, Item, Like,
                     PurchaseEvent, StreamPost, build_dataset)
from ..textindex import STOPWORDS

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class SyntheticParams:
    user_count: int = 1000
    item_count: int = 500
    community_count: int = 10
    purchases_per_user: int = 10
    social_fraction: float = 0.5
    preferred_share: float = 0.8
    circle_size: int = 8
    circle_items: int = 8
    circle_share: float = 0.4
    community_words: int = 12
    interest_terms: int = 5
    global_words: int = 30
    likes_per_user: int = 3
    comments_per_user: int = 2
    partners_per_user: int = 3
    posts_per_user: int = 3

    def validate(self):
        for name in ("user_count", "item_count", "community_count", "purchases_per_user"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.community_count > self.item_count:
            raise ValueError("need at least one item per community")
        if not 0 <= self.social_fraction <= 1:
            raise ValueError("social_fraction must lie in [0, 1]")
        for name in ("preferred_share", "circle_share"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.circle_size < 1 or self.circle_items < 1:
            raise ValueError("circle_size and circle_items must be positive")


def _vocabulary(rng, size, taken):
    words = []
    while len(words) < size:
        word = "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS)
                       for _ in range(rng.randint(2, 3)))
        if word not in taken and word not in STOPWORDS:
            taken.add(word)
            words.append(word)
    return words


def _skewed(rng, seq):
    # quadratic skew puts more mass on the head of each community's catalogue
    return seq[int(len(seq) * rng.random() ** 2)]


def generate_synthetic(params: SyntheticParams = SyntheticParams(), seed: int = 0):
    """Build a :class:`~socrec.model.Dataset` with planted community structure.

    Users and items are assigned round-robin to communities. Each community
    has its own vocabulary and interest terms, and is further split into
    friend circles that share a few favourite items. A purchase comes from
    the circle favourites with probability ``circle_share``; otherwise from
    the community catalogue with probability ``preferred_share`` and from
    the whole catalogue the rest of the time. A ``social_fraction`` of users
    also get likes, comments, stream posts, a group and interests drawn from
    their community, plus interactions with social users of their circle
    (topped up from the community when the circle is too small).
    """
    params.validate()
    rng = random.Random(seed)
    c_count = params.community_count
    taken = set()
    global_vocab = _vocabulary(rng, params.global_words, taken)
    vocab = [_vocabulary(rng, params.community_words, taken) for _ in range(c_count)]
    interests = [_vocabulary(rng, params.interest_terms, taken) for _ in range(c_count)]

    iw = len(str(params.item_count - 1))
    uw = len(str(params.user_count - 1))
    item_ids = [f"i{j:0{iw}d}" for j in range(params.item_count)]
    user_ids = [f"u{j:0{uw}d}" for j in range(params.user_count)]
    catalogue = [item_ids[c::c_count] for c in range(c_count)]
    members = [user_ids[c::c_count] for c in range(c_count)]
    circle_of, favourites = {}, {}
    for c in range(c_count):
        shuffled = rng.sample(members[c], len(members[c]))
        for start in range(0, len(shuffled), params.circle_size):
            key = (c, start)
            favourites[key] = rng.sample(catalogue[c], min(params.circle_items, len(catalogue[c])))
            for user in shuffled[start:start + params.circle_size]:
                circle_of[user] = key

    def words(c, n, local_share):
        return " ".join(rng.choice(vocab[c]) if rng.random() < local_share
                        else rng.choice(global_vocab) for _ in range(n))

    items = []
    for j, item_id in enumerate(item_ids):
        c = j % c_count
        items.append(Item(item_id, words(c, 3, 0.7), words(c, 8, 0.6)))

    purchases = []
    for u, user in enumerate(user_ids):
        c = u % c_count
        t = rng.randrange(1_000_000)
        for _ in range(params.purchases_per_user):
            t += rng.randint(1, 86_400)
            if rng.random() < params.circle_share:
                item = rng.choice(favourites[circle_of[user]])
            elif rng.random() < params.preferred_share:
                item = _skewed(rng, catalogue[c])
            else:
                item = rng.choice(item_ids)
            purchases.append(PurchaseEvent(user, item, t))

    n_social = round(params.social_fraction * params.user_count)
    social_users = set(rng.sample(user_ids, n_social))
    social_members = [[u for u in m if u in social_users] for m in members]

    social = []
    for u, user in enumerate(user_ids):
        if user not in social_users:
            continue
        c = u % c_count
        for _ in range(params.likes_per_user):
            social.append(Like(user, _skewed(rng, catalogue[c])))
        for _ in range(params.comments_per_user):
            social.append(Comment(user, _skewed(rng, catalogue[c]), words(c, 4, 0.8)))
        friends = [v for v in social_members[c] if v != user and circle_of[v] == circle_of[user]]
        others = [v for v in social_members[c] if v != user and circle_of[v] != circle_of[user]]
        n_friends = min(params.partners_per_user, len(friends))
        partners = rng.sample(friends, n_friends)
        partners += rng.sample(others, min(params.partners_per_user - n_friends, len(others)))
        for v in partners:
            social.append(Interaction(user, v, rng.randint(1, 5)))
        for _ in range(params.posts_per_user):
            social.append(StreamPost(user, words(c, 6, 0.8)))
        social.append(GroupMembership(user, f"g{c}"))
        for term in rng.sample(interests[c], min(2, len(interests[c]))):
            social.append(Interest(user, term))

    return build_dataset(items, purchases, social)
