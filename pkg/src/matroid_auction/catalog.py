"""Concrete matroids, auction instances, and seeded instance generation."""

from __future__ import annotations

import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable

from .core import AXIOM_GUARD, Matroid, fmt_set, item_key, sort_items
from .errors import InputError, SchemaError


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y) -> bool:
        """Merge the classes of x and y; False if they were already joined."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


class GraphicMatroid(Matroid):
    """Cycle-free edge sets of a multigraph on vertices ``1..vertices``.

    Parallel edges and self-loops are allowed. Disconnected graphs are fine:
    bases are spanning forests.
    """

    kind = "graphic"

    def __init__(self, vertices: int, edges: Mapping[str, tuple], name: str | None = None):
        self.vertices = vertices
        self.edges = {str(e): tuple(uv) for e, uv in edges.items()}
        for e, (u, v) in self.edges.items():
            for end in (u, v):
                if not (isinstance(end, int) and 1 <= end <= vertices):
                    raise SchemaError(f"edges.{e}", f"endpoint {end!r} outside vertex range 1..{vertices}")
        super().__init__(self.edges, name=name)

    def _independent(self, items: frozenset) -> bool:
        uf = UnionFind()
        edges = self.edges
        for e in items:
            u, v = edges[e]
            if not uf.union(u, v):
                return False
        return True

    def to_spec(self) -> dict:
        return {"kind": "graphic", "vertices": self.vertices,
                "edges": {e: list(self.edges[e]) for e in self.ground_set}}


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, n: int, k: int, items: Iterable[str] | None = None, name: str | None = None):
        if not 0 <= k <= n:
            raise SchemaError("k", f"need 0 <= k <= n, got n={n}, k={k}")
        items = [f"e{i}" for i in range(1, n + 1)] if items is None else [str(e) for e in items]
        if len(items) != n:
            raise SchemaError("items", f"expected {n} items, got {len(items)}")
        self.k = k
        super().__init__(items, name=name or f"U({n},{k})")

    def _independent(self, items: frozenset) -> bool:
        return len(items) <= self.k

    def to_spec(self) -> dict:
        return {"kind": "uniform", "n": len(self.ground_set), "k": self.k, "items": list(self.ground_set)}


class PartitionMatroid(Matroid):
    """At most ``capacity`` items from each block."""

    kind = "partition"

    def __init__(self, blocks: Iterable[tuple[Iterable[str], int]], name: str | None = None):
        self.blocks = []
        self._block_of = {}
        for b, (items, cap) in enumerate(blocks):
            items = [str(e) for e in items]
            if isinstance(cap, bool) or not isinstance(cap, int) or not 0 <= cap <= len(items):
                raise SchemaError(f"blocks[{b}].capacity", f"capacity {cap} not in 0..{len(items)}")
            for e in items:
                if e in self._block_of:
                    raise SchemaError(f"blocks[{b}].items", f"item {e!r} appears in two blocks")
                self._block_of[e] = b
            self.blocks.append((tuple(items), cap))
        super().__init__(self._block_of, name=name)

    def _independent(self, items: frozenset) -> bool:
        used = [0] * len(self.blocks)
        for e in items:
            b = self._block_of[e]
            used[b] += 1
            if used[b] > self.blocks[b][1]:
                return False
        return True

    def to_spec(self) -> dict:
        return {"kind": "partition",
                "blocks": [{"items": sort_items(items), "capacity": cap} for items, cap in self.blocks]}


def base_exchange_witness(bases: list[frozenset]):
    """First (B1, B2, e) where no f in B2 - B1 makes B1 - e + f a base, else None."""
    family = set(bases)
    ordered = sorted(bases, key=lambda b: [item_key(e) for e in sort_items(b)])
    for b1 in ordered:
        for b2 in ordered:
            for e in sort_items(b1 - b2):
                if not any((b1 - {e}) | {f} in family for f in b2 - b1):
                    return b1, b2, e
    return None


class ExplicitMatroid(Matroid):
    """Independent sets are the subsets of the listed bases."""

    kind = "explicit"

    def __init__(self, items: Iterable[str], bases: Iterable[Iterable[str]], name: str | None = None):
        items = [str(e) for e in items]
        super().__init__(items, name=name)
        self.bases = []
        for i, b in enumerate(bases):
            b = frozenset(map(str, b))
            stray = b - self._ground
            if stray:
                raise SchemaError(f"bases[{i}]", f"unknown item {sort_items(stray)[0]!r}")
            self.bases.append(b)
        self.bases = sorted(set(self.bases), key=lambda b: [item_key(e) for e in sort_items(b)])
        if not self.bases:
            raise SchemaError("bases", "at least one base is required (use [[]] for rank 0)")
        if len({len(b) for b in self.bases}) != 1:
            raise SchemaError("bases", "bases must all have the same cardinality")
        if len(self.ground_set) <= AXIOM_GUARD:
            bad = base_exchange_witness(self.bases)
            if bad:
                b1, b2, e = bad
                raise SchemaError("bases", f"base exchange fails: {e!r} in {fmt_set(b1)} has no swap into {fmt_set(b2)}")

    def _independent(self, items: frozenset) -> bool:
        return any(items <= b for b in self.bases)

    def to_spec(self) -> dict:
        return {"kind": "explicit", "items": list(self.ground_set), "bases": [sort_items(b) for b in self.bases]}


class ParallelCopyMatroid(Matroid):
    """``original`` with some items replaced by mutually parallel copies.

    ``origin`` maps every new item to the original item it stands for.
    """

    kind = "parallel"

    def __init__(self, original: Matroid, origin: Mapping[str, str], name: str | None = None):
        self.original = original
        self.origin = dict(origin)
        super().__init__(self.origin, name=name or f"{original.name}+copies")

    def _independent(self, items: frozenset) -> bool:
        projected = {self.origin[e] for e in items}
        return len(projected) == len(items) and self.original._independent(frozenset(projected))


def build_matroid(spec: Mapping) -> Matroid:
    """Construct a matroid from a JSON-compatible payload (see the README for the schema)."""
    if not isinstance(spec, Mapping):
        raise SchemaError("matroid", "expected an object")
    kind = spec.get("kind")

    def need(key, typ, path=None):
        if key not in spec:
            raise SchemaError(path or f"matroid.{key}", "missing field")
        val = spec[key]
        if typ is int and (isinstance(val, bool) or not isinstance(val, int)):
            raise SchemaError(path or f"matroid.{key}", f"expected integer, got {val!r}")
        if typ is not int and not isinstance(val, typ):
            raise SchemaError(path or f"matroid.{key}", f"expected {typ.__name__}")
        return val

    try:
        if kind == "graphic":
            vertices = need("vertices", int)
            edges = need("edges", Mapping)
            parsed = {}
            for e, uv in edges.items():
                if not (isinstance(uv, (list, tuple)) and len(uv) == 2):
                    raise SchemaError(f"matroid.edges.{e}", "expected [u, v]")
                parsed[e] = tuple(uv)
            return GraphicMatroid(vertices, parsed)
        if kind == "uniform":
            n, k = need("n", int), need("k", int)
            return UniformMatroid(n, k, spec.get("items"))
        if kind == "partition":
            blocks = []
            for i, block in enumerate(need("blocks", list)):
                if not isinstance(block, Mapping) or "items" not in block or "capacity" not in block:
                    raise SchemaError(f"matroid.blocks[{i}]", "expected {items, capacity}")
                blocks.append((block["items"], block["capacity"]))
            return PartitionMatroid(blocks)
        if kind == "explicit":
            return ExplicitMatroid(need("items", list), need("bases", list))
    except SchemaError as exc:
        if exc.path.startswith("matroid"):
            raise
        raise SchemaError(f"matroid.{exc.path}", str(exc).split(": ", 1)[-1]) from None
    raise SchemaError("matroid.kind", f"unknown matroid kind {kind!r}")


@dataclass(frozen=True)
class Instance:
    """Matroid, disjoint buyer interest sets covering the ground set, integer valuations.

    ``origin`` maps parallel copies back to the raw item they were made from.
    """

    matroid: Matroid
    interest: Mapping[str, frozenset]
    valuations: Mapping[str, int]
    origin: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        interest = {str(b): frozenset(map(str, items)) for b, items in self.interest.items()}
        object.__setattr__(self, "interest", interest)
        object.__setattr__(self, "valuations", {str(e): v for e, v in self.valuations.items()})
        seen: dict[str, str] = {}
        ground = set(self.matroid.ground_set)
        for b in self.buyers:
            for e in sort_items(interest[b]):
                if e not in ground:
                    raise InputError(f"buyer {b}: unknown item {e!r}")
                if e in seen:
                    raise InputError(f"item {e!r} wanted by buyers {seen[e]} and {b}; interest sets must be disjoint")
                seen[e] = b
        missing = ground - set(seen)
        if missing:
            raise InputError(f"item {sort_items(missing)[0]!r} is not wanted by any buyer")
        for e in self.matroid.ground_set:
            v = self.valuations.get(e)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise InputError(f"valuation of {e!r} must be a nonnegative integer, got {v!r}")
        object.__setattr__(self, "_owner", seen)

    @property
    def buyers(self) -> list[str]:
        return sorted(self.interest, key=item_key)

    @property
    def items(self) -> tuple[str, ...]:
        return self.matroid.ground_set

    def owner(self, item: str) -> str:
        return self._owner[item]

    def buyer_valuation(self, buyer: str) -> dict[str, int]:
        return {e: self.valuations[e] for e in sort_items(self.interest[buyer])}

    def with_valuations(self, valuations: Mapping[str, int]) -> Instance:
        return Instance(self.matroid, self.interest, valuations, self.origin)


def parallel_copy_reduction(matroid: Matroid, wants: Mapping[str, Mapping[str, int]]) -> Instance:
    """Make interest sets disjoint by splitting shared items into parallel copies.

    ``wants`` maps each buyer to its {item: valuation}. An item wanted by buyers
    ``i1..ik`` (k >= 2) becomes items ``item#i1 .. item#ik``.
    """
    wanted_by: dict[str, list[str]] = {e: [] for e in matroid.ground_set}
    for b in sorted(wants, key=item_key):
        for e in wants[b]:
            if e not in wanted_by:
                raise InputError(f"buyer {b}: unknown item {e!r}")
            wanted_by[e].append(str(b))
    for e, bs in wanted_by.items():
        if not bs:
            raise InputError(f"item {e!r} has an empty interest list")
    origin, interest, values = {}, {str(b): set() for b in wants}, {}
    for e in matroid.ground_set:
        for b in wanted_by[e]:
            new = e if len(wanted_by[e]) == 1 else f"{e}#{b}"
            origin[new] = e
            interest[b].add(new)
            values[new] = wants[b][e]
    if all(k == v for k, v in origin.items()):
        return Instance(matroid, interest, values)
    if isinstance(matroid, GraphicMatroid):
        reduced = GraphicMatroid(matroid.vertices, {new: matroid.edges[e] for new, e in origin.items()},
                                 name=matroid.name)
    else:
        reduced = ParallelCopyMatroid(matroid, origin)
    return Instance(reduced, interest, values, origin)


@dataclass(frozen=True)
class RandomParams:
    family: str = "graphic"
    vertices: int = 5
    max_edges: int = 8
    n: int | None = None
    k: int | None = None
    max_items: int = 8
    buyers: int = 3
    value_bound: int = 6
    min_value: int = 1


def random_matroid(params: RandomParams, rng: random.Random) -> Matroid:
    if params.family == "graphic":
        nv = params.vertices
        if nv < 1 or params.max_edges < nv - 1:
            raise InputError(f"a connected graph on {nv} vertices needs at least {nv - 1} edges")
        m = rng.randint(max(nv - 1, 1), params.max_edges)
        order = list(range(1, nv + 1))
        rng.shuffle(order)
        pairs = [(order[rng.randrange(i)], order[i]) for i in range(1, nv)]
        while len(pairs) < m:
            if nv < 2:
                raise InputError("extra edges need at least 2 vertices")
            u, v = rng.sample(range(1, nv + 1), 2)
            pairs.append((u, v))
        rng.shuffle(pairs)
        return GraphicMatroid(nv, {f"e{i}": uv for i, uv in enumerate(pairs, 1)})
    if params.family == "uniform":
        n = params.n if params.n is not None else rng.randint(2, params.max_items)
        k = params.k if params.k is not None else rng.randint(1, n)
        return UniformMatroid(n, k)
    if params.family == "partition":
        n = params.n if params.n is not None else rng.randint(2, params.max_items)
        items = [f"e{i}" for i in range(1, n + 1)]
        rng.shuffle(items)
        cuts = sorted(rng.sample(range(1, n), min(rng.randint(0, 2), n - 1)))
        blocks = [items[a:b] for a, b in zip([0] + cuts, cuts + [n])]
        return PartitionMatroid([(b, rng.randint(1, len(b))) for b in blocks])
    raise InputError(f"unknown random family {params.family!r}")


def random_instance(params: RandomParams | Mapping, seed: int) -> Instance:
    """Deterministic random instance: same (params, seed), same instance."""
    if isinstance(params, Mapping):
        params = RandomParams(**params)
    if params.buyers < 1:
        raise InputError("need at least one buyer")
    if not 0 <= params.min_value <= params.value_bound:
        raise InputError("need 0 <= min_value <= value_bound")
    rng = random.Random(seed)
    matroid = random_matroid(params, rng)
    buyers = [str(b) for b in range(1, params.buyers + 1)]
    interest: dict[str, set] = {b: set() for b in buyers}
    values = {}
    for e in matroid.ground_set:
        interest[rng.choice(buyers)].add(e)
        values[e] = rng.randint(params.min_value, params.value_bound)
    return Instance(matroid, interest, values)
