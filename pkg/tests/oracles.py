"""Independent brute-force oracles for the tests.

Nothing here calls the package's greedy, enumeration or minor code: only
``is_independent`` (or networkx for graphic matroids) and itertools.
"""

from __future__ import annotations

import itertools
import random

import networkx as nx

from matroid_auction.catalog import GraphicMatroid, RandomParams, random_instance


def independent_sets(matroid, pool=None):
    items = list(matroid.ground_set if pool is None else pool)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            s = frozenset(combo)
            if matroid.is_independent(s):
                yield s


def bases(matroid):
    sets = list(independent_sets(matroid))
    top = max(len(s) for s in sets)
    return [s for s in sets if len(s) == top]


def nx_forest(matroid: GraphicMatroid, items) -> bool:
    g = nx.MultiGraph()
    g.add_nodes_from(range(1, matroid.vertices + 1))
    for e in items:
        g.add_edge(*matroid.edges[e], key=e)
    return nx.is_forest(g) if g.number_of_edges() else True


def max_weight(matroid, weights, avoid=frozenset(), fixed=frozenset()):
    """Best weight of X with X disjoint from ``avoid`` and ``fixed``, X | fixed independent."""
    pool = [e for e in matroid.ground_set if e not in avoid and e not in fixed]
    best = None
    for r in range(len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            if matroid.is_independent(fixed | set(combo)):
                w = sum(weights[e] for e in combo)
                best = w if best is None or w > best else best
    return best


def vcg_prices(instance, base, bids=None, presold=frozenset()):
    """Vickrey prices at winning ``base``; ``presold`` items are contracted first."""
    bids = instance.valuations if bids is None else bids
    presold = frozenset(presold)
    prices = {}
    for b in instance.buyers:
        own = instance.interest[b]
        rest = base - presold - own
        prices[b] = max_weight(instance.matroid, bids, avoid=own, fixed=presold) - sum(bids[e] for e in rest)
    return prices


def corpus_params(seed: int) -> tuple[str, RandomParams]:
    """Parameters of corpus instance ``seed``: three families in rotation."""
    rng = random.Random(seed * 7919 + 13)
    family = ("graphic", "uniform", "partition")[seed % 3]
    buyers = rng.randint(2, 4)
    if family == "graphic":
        return family, RandomParams("graphic", vertices=rng.randint(2, 5), max_edges=8, buyers=buyers,
                                    value_bound=9, min_value=0)
    return family, RandomParams(family, max_items=8, buyers=buyers, value_bound=9, min_value=0)


CORPUS_SIZE = 510


def corpus(size: int = CORPUS_SIZE):
    for seed in range(size):
        family, params = corpus_params(seed)
        yield seed, family, random_instance(params, seed)
