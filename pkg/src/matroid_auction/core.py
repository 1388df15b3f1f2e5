"""Oracle-based matroids, minors, and cocircuit machinery.

A :class:`Matroid` answers independence queries for subsets of its ground set.
A :class:`MinorView` is the matroid ``M \\ D / I`` obtained by deleting ``D``
and contracting ``I``; independence in the view is answered by the base
matroid's oracle on ``X | contraction_base``.

Item ids are strings. Their total order is "natural" (``e2 < e10``) and is used
for every tie-break in the package.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator

from .errors import InputError, ResourceGuardError

ENUMERATION_GUARD = 16
AXIOM_GUARD = 12

_DIGITS = re.compile(r"(\d+)")


def item_key(item: str):
    """Natural sort key: digit runs compare numerically, ties fall back to the raw string."""
    parts = _DIGITS.split(str(item))
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts)), str(item)


def sort_items(items: Iterable[str]) -> list[str]:
    return sorted(items, key=item_key)


def fmt_set(items: Iterable[str]) -> str:
    return "{" + ",".join(sort_items(items)) + "}"


class Matroid:
    """A matroid given by its ground set and an independence oracle.

    Subclasses override :meth:`_independent`; alternatively pass ``oracle``,
    a predicate on frozensets of items.
    """

    kind = "oracle"

    def __init__(self, ground_set: Iterable[str], oracle: Callable[[frozenset], bool] | None = None,
                 name: str | None = None):
        items = [str(e) for e in ground_set]
        if len(set(items)) != len(items):
            raise InputError("duplicate item ids in ground set")
        self.ground_set: tuple[str, ...] = tuple(sort_items(items))
        self._ground = frozenset(self.ground_set)
        self._oracle = oracle
        self.name = name or self.kind

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} |E|={len(self.ground_set)}>"

    def _independent(self, items: frozenset) -> bool:
        if self._oracle is None:
            raise NotImplementedError
        return bool(self._oracle(items))

    def is_independent(self, items: Iterable[str]) -> bool:
        items = frozenset(items)
        stray = items - self._ground
        if stray:
            raise InputError(f"item {sort_items(stray)[0]!r} is not in the ground set")
        return self._independent(items)

    def rank(self, items: Iterable[str] | None = None) -> int:
        return self.view().rank(self.ground_set if items is None else items)

    def view(self) -> MinorView:
        return MinorView(self)

    def to_spec(self) -> dict:
        """Serializable description; the generic fallback lists all bases."""
        view = self.view()
        return {
            "kind": "explicit",
            "items": list(self.ground_set),
            "bases": [sort_items(b) for b in enumerate_bases(view)],
        }


@dataclass(frozen=True)
class Cocircuit:
    """Minimal set meeting every base of its view (a coloop when it has one item)."""

    items: frozenset

    def __post_init__(self):
        if not self.items:
            raise InputError("a cocircuit is nonempty")

    def __iter__(self):
        return iter(sort_items(self.items))

    def __len__(self):
        return len(self.items)

    def __contains__(self, item):
        return item in self.items

    def sorted(self) -> tuple[str, ...]:
        return tuple(sort_items(self.items))

    def __str__(self):
        return fmt_set(self.items)


@dataclass(frozen=True, eq=False)
class MinorView:
    """The minor ``base \\ deleted / contracted`` of ``base``.

    ``contraction_base`` is a maximal independent subset of ``contracted``;
    when omitted it is grown greedily in ascending item order.
    """

    base: Matroid
    deleted: frozenset = frozenset()
    contracted: frozenset = frozenset()
    contraction_base: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "deleted", frozenset(self.deleted))
        object.__setattr__(self, "contracted", frozenset(self.contracted))
        ground = frozenset(self.base.ground_set)
        for label, part in (("deleted", self.deleted), ("contracted", self.contracted)):
            stray = part - ground
            if stray:
                raise InputError(f"{label} item {sort_items(stray)[0]!r} is not in the ground set")
        if self.deleted & self.contracted:
            raise InputError("deleted and contracted sets overlap: " + fmt_set(self.deleted & self.contracted))
        if self.contraction_base is None:
            cb: set = set()
            for e in sort_items(self.contracted):
                if self.base.is_independent(cb | {e}):
                    cb.add(e)
            object.__setattr__(self, "contraction_base", frozenset(cb))
        else:
            cb = frozenset(self.contraction_base)
            object.__setattr__(self, "contraction_base", cb)
            if not cb <= self.contracted:
                raise InputError("contraction_base must lie inside the contracted set")
            if not self.base.is_independent(cb):
                raise InputError("contraction_base is dependent")
            for e in self.contracted - cb:
                if self.base.is_independent(cb | {e}):
                    raise InputError(f"contraction_base does not span contracted item {e!r}")

    @cached_property
    def active(self) -> tuple[str, ...]:
        gone = self.deleted | self.contracted
        return tuple(e for e in self.base.ground_set if e not in gone)

    @cached_property
    def _active_set(self) -> frozenset:
        return frozenset(self.active)

    @cached_property
    def full_rank(self) -> int:
        return self.rank(self.active)

    def _check(self, items: Iterable[str]) -> frozenset:
        items = frozenset(items)
        stray = items - self._active_set
        if stray:
            raise InputError(f"item {sort_items(stray)[0]!r} is not in the active ground set")
        return items

    def _indep(self, items: frozenset) -> bool:
        return self.base._independent(items | self.contraction_base)

    def is_independent(self, items: Iterable[str]) -> bool:
        return self._indep(self._check(items))

    def rank(self, items: Iterable[str] | None = None) -> int:
        if items is None:
            return self.full_rank
        items = self._check(items)
        grown: frozenset = frozenset()
        for e in sort_items(items):
            if self._indep(grown | {e}):
                grown = grown | {e}
        return len(grown)

    def is_base(self, items: Iterable[str]) -> bool:
        items = self._check(items)
        return len(items) == self.full_rank and self._indep(items)

    def minor(self, delete: Iterable[str] = (), contract: Iterable[str] = ()) -> MinorView:
        delete = self._check(delete)
        contract = self._check(contract)
        if delete & contract:
            raise InputError("cannot both delete and contract " + fmt_set(delete & contract))
        cb = set(self.contraction_base)
        for e in sort_items(contract):
            if not self.base._independent(frozenset(cb | {e})):
                raise InputError(f"cannot contract {e!r}: it is a loop of the current minor")
            cb.add(e)
        return MinorView(self.base, self.deleted | delete, self.contracted | contract, frozenset(cb))

    def find_cocircuit_within(self, items: Iterable[str]) -> Cocircuit | None:
        """Return a cocircuit contained in ``items``, or ``None`` if some base avoids ``items``."""
        items = self._check(items)
        r = self.full_rank
        rest = [e for e in self.active if e not in items]
        if self.rank(rest) == r:
            return None
        hit = set(items)
        for e in sort_items(items):
            trial = hit - {e}
            if self.rank(e2 for e2 in self.active if e2 not in trial) < r:
                hit = trial
        return Cocircuit(frozenset(hit))

    def element_class(self, item: str) -> str:
        self._check([item])
        if not self._indep(frozenset([item])):
            return "loop"
        if self.rank(e for e in self.active if e != item) < self.full_rank:
            return "coloop"
        return "regular"

    def closure(self, items: Iterable[str]) -> frozenset:
        items = self._check(items)
        r = self.rank(items)
        return frozenset(e for e in self.active if e in items or self.rank(items | {e}) == r)

    def as_matroid(self) -> Matroid:
        """Freeze this minor into a standalone matroid on the active items."""
        return MinorMatroid(self)

    def describe(self) -> str:
        parts = [self.base.name]
        if self.deleted:
            parts.append("\\" + fmt_set(self.deleted))
        if self.contracted:
            parts.append("/" + fmt_set(self.contracted))
        return "".join(parts)

    def __repr__(self):
        return f"MinorView({self.describe()})"


class MinorMatroid(Matroid):
    kind = "minor"

    def __init__(self, view: MinorView):
        self.source = view
        super().__init__(view.active, name=view.describe())

    def _independent(self, items: frozenset) -> bool:
        return self.source._indep(items)


def _guard(view: MinorView, limit: int = ENUMERATION_GUARD) -> tuple[str, ...]:
    if len(view.active) > limit:
        raise ResourceGuardError(f"{len(view.active)} active items exceed the enumeration guard of {limit}")
    return view.active


def _as_view(m: Matroid | MinorView) -> MinorView:
    return m if isinstance(m, MinorView) else m.view()


def subsets(items: tuple[str, ...], size: int | None = None) -> Iterator[frozenset]:
    sizes = range(len(items) + 1) if size is None else [size]
    for k in sizes:
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def _exhaustive_rank(view: MinorView, items: tuple[str, ...]) -> int:
    """Size of the largest independent subset, found without the greedy rank."""
    for r in range(len(items), 0, -1):
        if any(view._indep(s) for s in subsets(items, r)):
            return r
    return 0


def enumerate_bases(m: Matroid | MinorView) -> list[frozenset]:
    view = _as_view(m)
    items = _guard(view)
    r = _exhaustive_rank(view, items)
    return [b for b in subsets(items, r) if view._indep(b)]


def enumerate_independent(m: Matroid | MinorView) -> list[frozenset]:
    view = _as_view(m)
    return [s for s in subsets(_guard(view)) if view._indep(s)]


def _cocircuit_masks(view: MinorView) -> tuple[tuple[str, ...], list[int]]:
    items = _guard(view)
    n = len(items)
    full = (1 << n) - 1
    # spans[m]: the items of mask m contain a base of the view
    spans = bytearray(1 << n)
    r = _exhaustive_rank(view, items)
    for combo in itertools.combinations(range(n), r):
        if view._indep(frozenset(items[i] for i in combo)):
            spans[sum(1 << i for i in combo)] = 1
    for m in range(1 << n):
        if not spans[m]:
            b = m
            while b:
                low = b & -b
                if spans[m ^ low]:
                    spans[m] = 1
                    break
                b ^= low
    found = []
    for s in range(1, 1 << n):
        if spans[full ^ s]:
            continue
        b, minimal = s, True
        while b:
            low = b & -b
            if not spans[full ^ (s ^ low)]:
                minimal = False
                break
            b ^= low
        if minimal:
            found.append(s)
    return items, found


def _canonical(sets: Iterable[frozenset]) -> list[frozenset]:
    return sorted(sets, key=lambda s: (len(s), [item_key(e) for e in sort_items(s)]))


def enumerate_cocircuits(m: Matroid | MinorView) -> list[Cocircuit]:
    """All cocircuits, by exhaustive search over subsets of the active items."""
    view = _as_view(m)
    items, masks = _cocircuit_masks(view)
    sets = [frozenset(items[i] for i in range(len(items)) if s >> i & 1) for s in masks]
    return [Cocircuit(s) for s in _canonical(sets)]


def enumerate_circuits(m: Matroid | MinorView) -> list[frozenset]:
    """All minimal dependent sets, by exhaustive search."""
    view = _as_view(m)
    items = _guard(view)
    n = len(items)
    indep = bytearray(1 << n)
    for s in range(1 << n):
        indep[s] = view._indep(frozenset(items[i] for i in range(n) if s >> i & 1))
    # below[s]: some proper subset of s is dependent
    below = bytearray(1 << n)
    out = []
    for s in range(1, 1 << n):
        b = s
        while b:
            low = b & -b
            if below[s ^ low] or not indep[s ^ low]:
                below[s] = 1
                break
            b ^= low
        if not indep[s] and not below[s]:
            out.append(frozenset(items[i] for i in range(n) if s >> i & 1))
    return _canonical(out)


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witness: tuple

    def __str__(self):
        sets = ", ".join(fmt_set(w) for w in self.witness)
        return f"{self.axiom} violated by ({sets})"


@dataclass
class AxiomReport:
    violations: list[AxiomViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def verify_axioms(family: Iterable[Iterable[str]], ground_set: Iterable[str] | None = None) -> AxiomReport:
    """Exhaustively check (I1)-(I3) on an explicit family of sets.

    Reports at most one witness per violated axiom; an empty report means the
    family is the independence system of a matroid.
    """
    fam = {frozenset(map(str, s)) for s in family}
    ground = frozenset(map(str, ground_set)) if ground_set is not None else frozenset().union(*fam) if fam else frozenset()
    if len(ground) > AXIOM_GUARD:
        raise ResourceGuardError(f"{len(ground)} items exceed the axiom-check guard of {AXIOM_GUARD}")
    ordered = _canonical(fam)
    report = AxiomReport()
    if frozenset() not in fam:
        report.violations.append(AxiomViolation("I1", (frozenset(),)))
    for s in ordered:
        stray = s - ground
        if stray:
            report.violations.append(AxiomViolation("ground", (s,)))
            break
    for s in ordered:
        bad = next((s - {e} for e in sort_items(s) if s - {e} not in fam), None)
        if bad is not None:
            report.violations.append(AxiomViolation("I2", (s, bad)))
            break
    done = False
    for big in reversed(ordered):
        for small in ordered:
            if len(small) >= len(big):
                break
            if not any(small | {e} in fam for e in big - small):
                report.violations.append(AxiomViolation("I3", (big, small)))
                done = True
                break
        if done:
            break
    return report
