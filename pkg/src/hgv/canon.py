"""Canonical keys for parallel compositions under restrictions.

A flat form is a list of restricted name pairs and a multiset of items.
Two flat forms get the same key exactly when some bijection of the
restricted names and some permutation of the items make them equal.
Items are ordered by a name-blind shape key; ties and the orientation of
symmetric items are resolved by bounded brute force.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Hashable, Sequence

PERM_LIMIT = 5040


def canonical_key(
    pairs: Sequence[tuple[str, str]],
    items: Sequence[object],
    item_key: Callable[[object, dict], Hashable],
    item_names: Callable[[object, bool], list[str]],
    flippable: Callable[[object], bool],
    pair_key: Callable[[int, int, int], Hashable],
) -> str:
    """``item_key(item, env)`` keys an item with restricted names mapped to
    negative levels by ``env``. ``item_names(item, flip)`` lists its free
    names in occurrence order. ``pair_key(index, ix, iy)`` keys the pair at
    ``index`` given the levels of its two names.
    """
    bound = {n for p in pairs for n in p}
    shape_env = {n: -1 for n in bound}
    shaped = sorted(((repr(item_key(t, shape_env)), t) for t in items), key=lambda p: p[0])
    groups = [list(g) for _, g in itertools.groupby(shaped, key=lambda p: p[0])]
    n_flip = sum(1 for _, t in shaped if flippable(t))

    count = math.prod(math.factorial(len(g)) for g in groups) * (2**n_flip)
    if count > PERM_LIMIT:
        choices = [itertools.islice(itertools.permutations(g), 1) for g in groups]
        flips = [(False,) * n_flip]
    else:
        choices = [itertools.permutations(g) for g in groups]
        flips = list(itertools.product((False, True), repeat=n_flip))
    best = None
    for combo in itertools.product(*choices):
        order = [t for grp in combo for _, t in grp]
        for flip in flips:
            k = _key_for(order, flip, pairs, bound, item_key, item_names, flippable, pair_key)
            if best is None or k < best:
                best = k
    return best if best is not None else repr(((), ()))


def _key_for(order, flip, pairs, bound, item_key, item_names, flippable, pair_key) -> str:
    env: dict[str, int] = {}
    fi = 0
    for t in order:
        f = False
        if flippable(t):
            f = flip[fi]
            fi += 1
        for n in item_names(t, f):
            if n in bound and n not in env:
                env[n] = -(len(env) + 1)
    keys = tuple(item_key(t, env) for t in order)
    pkeys = sorted(
        (pair_key(i, env.get(x, 0), env.get(y, 0)) for i, (x, y) in enumerate(pairs)), key=repr
    )
    return repr((keys, tuple(pkeys)))
