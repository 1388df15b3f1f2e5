"""The ascending matroid auction: unit-step and long-step runs, monopsony handling, trace audit.

The auctioneer keeps the minor ``M \\ D / I`` of sold items ``I`` and deleted
items ``D``. Prices rise for all items at once; items announced critical are
deleted one by one in ascending id, and whenever a buyer's item set contains a
cocircuit of the current minor (a monopsony) the buyer picks one item of it and
buys it at the current price.

Tie-breaks: announced items are deleted in ascending item id, monopsonies are
looked for in ascending buyer id. Before the first price increase there is an
opening announcement round at price 0.
"""

from __future__ import annotations

import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple, Protocol, Union

from .catalog import Instance
from .core import Cocircuit, MinorView, enumerate_cocircuits, fmt_set, item_key, sort_items
from .errors import InputError, InternalInvariantError, ProtocolError
from .greedy import max_weight_base

UNIT = "unit"
LONG = "long"
BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True)
class PriceRaised:
    price: int


@dataclass(frozen=True)
class CriticalAnnounced:
    buyer: str
    item: str
    price: int


@dataclass(frozen=True)
class Deleted:
    item: str
    price: int


@dataclass(frozen=True)
class MonopsonyDetected:
    buyer: str
    cocircuit: tuple
    price: int


@dataclass(frozen=True)
class Sold:
    buyer: str
    item: str
    price: int


@dataclass(frozen=True)
class InitialSale:
    buyer: str
    item: str
    price: int = 0


AuctionEvent = Union[PriceRaised, CriticalAnnounced, Deleted, MonopsonyDetected, Sold, InitialSale]
EVENT_TYPES = (PriceRaised, CriticalAnnounced, Deleted, MonopsonyDetected, Sold, InitialSale)


@dataclass(frozen=True)
class Observation:
    """What a buyer sees when the auctioneer asks it something.

    ``active`` holds the buyer's own items still on sale; ``history`` is the
    public event log up to (not including) the current round of announcements.
    """

    buyer: str
    price: int
    active: frozenset
    history: tuple


class Signals(Protocol):
    def next_critical_threshold(self, obs: Observation) -> int | None: ...

    def critical_items_at(self, price: int, obs: Observation) -> set: ...

    def choose_from_monopsony(self, cocircuit: Cocircuit, obs: Observation) -> str: ...


@dataclass(frozen=True)
class Outcome:
    base: frozenset
    item_prices: dict
    buyer_payments: dict
    welfare: int

    def payments_tuple(self) -> tuple:
        return tuple(self.buyer_payments[b] for b in sorted(self.buyer_payments, key=item_key))


class AuctionRun(NamedTuple):
    outcome: Outcome
    trace: list


@dataclass
class AuctionState:
    view: MinorView
    price: int = 0
    sold: list = field(default_factory=list)
    pending_critical: list = field(default_factory=list)
    phase: str = "resolving"


def detect_monopsony(view: MinorView, interest: Mapping[str, frozenset],
                     order: Sequence[str] | None = None) -> tuple[str, Cocircuit] | None:
    """First buyer (in ``order``, default ascending id) owning a cocircuit of ``view``."""
    active = set(view.active)
    for buyer in order or sorted(interest, key=item_key):
        own = interest[buyer] & active
        if own:
            found = view.find_cocircuit_within(own)
            if found is not None:
                return buyer, found
    return None


def _default_strategies(instance: Instance) -> dict:
    from .strategies import truthful_strategy

    return {b: truthful_strategy(instance.buyer_valuation(b)) for b in instance.buyers}


class _Auction:
    def __init__(self, instance: Instance, strategies: Mapping | None, buyer_order: Sequence[str] | None):
        self.instance = instance
        self.strategies = dict(_default_strategies(instance) if strategies is None else strategies)
        missing = [b for b in instance.buyers if b not in self.strategies]
        if missing:
            raise InputError(f"no strategy for buyer {missing[0]}")
        self.order = list(buyer_order) if buyer_order is not None else instance.buyers
        self.state = AuctionState(instance.matroid.view())
        self.events: list = []
        self.rank = self.state.view.full_rank

    def emit(self, event):
        self.events.append(event)

    def observe(self, buyer: str, history: tuple | None = None) -> Observation:
        view = self.state.view
        active = frozenset(e for e in self.instance.interest[buyer] if e in view._active_set)
        return Observation(buyer, self.state.price, active, tuple(self.events) if history is None else history)

    def done(self) -> bool:
        return len(self.state.view.contraction_base) == self.rank

    def resolve(self, initial: bool = False):
        st = self.state
        prev_phase, st.phase = st.phase, "resolving"
        while True:
            hit = detect_monopsony(st.view, self.instance.interest, self.order)
            if hit is None:
                break
            buyer, cocircuit = hit
            self.emit(MonopsonyDetected(buyer, cocircuit.sorted(), st.price))
            choice = self.strategies[buyer].choose_from_monopsony(cocircuit, self.observe(buyer))
            if choice not in cocircuit:
                raise ProtocolError(buyer, f"chose {choice!r} outside its monopsony {cocircuit}")
            self.emit(InitialSale(buyer, choice) if initial else Sold(buyer, choice, st.price))
            st.view = st.view.minor(contract=[choice])
            st.sold.append((choice, st.price))
        st.phase = prev_phase

    def announce(self, price: int) -> dict:
        history = tuple(self.events)
        announced = {}
        for buyer in self.instance.buyers:
            obs = self.observe(buyer, history)
            items = set(self.strategies[buyer].critical_items_at(price, obs))
            bad = items - obs.active
            if bad:
                raise ProtocolError(buyer, f"announced {fmt_set(bad)} critical but owns no such active item")
            announced[buyer] = items
        for buyer in self.instance.buyers:
            for e in sort_items(announced[buyer]):
                self.emit(CriticalAnnounced(buyer, e, price))
        return announced

    def next_price(self, mode: str) -> tuple[int, list]:
        p = self.state.price
        if mode == UNIT:
            return p + 1, []
        thresholds = {}
        for buyer in self.instance.buyers:
            obs = self.observe(buyer)
            if not obs.active:
                continue
            q = self.strategies[buyer].next_critical_threshold(obs)
            if q is None:
                continue
            if q <= p:
                raise ProtocolError(buyer, f"threshold {q} does not exceed the current price {p}")
            thresholds[buyer] = q
        if not thresholds:
            raise InternalInvariantError(f"auction stalled at price {p}: no buyer reports a further critical price")
        q = min(thresholds.values())
        return q, [b for b, t in thresholds.items() if t == q]

    def run(self, mode: str, ceiling: int) -> AuctionRun:
        st = self.state
        self.resolve(initial=True)
        opening = True
        while not self.done():
            if opening:
                minimizers = []
            else:
                st.phase = "raising"
                price, minimizers = self.next_price(mode)
                if price > ceiling:
                    raise InternalInvariantError(f"price {price} passed the ceiling {ceiling} without reaching a base")
                st.price = price
                self.emit(PriceRaised(price))
            announced = self.announce(st.price)
            for buyer in minimizers:
                if not announced[buyer]:
                    raise ProtocolError(buyer, f"set the price to {st.price} but announced nothing critical")
            st.pending_critical = sort_items(set().union(*announced.values()))
            st.phase = "deleting"
            for f in st.pending_critical:
                if f not in st.view._active_set:
                    continue
                st.view = st.view.minor(delete=[f])
                self.emit(Deleted(f, st.price))
                self.resolve()
            opening = False
        st.phase = "done"
        return AuctionRun(self.outcome(), self.events)

    def outcome(self) -> Outcome:
        inst = self.instance
        prices = {e: p for e, p in self.state.sold}
        payments = {b: sum(prices[e] for e in inst.interest[b] if e in prices) for b in inst.buyers}
        base = frozenset(prices)
        return Outcome(base, prices, payments, sum(inst.valuations[e] for e in base))


def _ceiling(instance: Instance, strategies: Mapping | None) -> int:
    bound = max(instance.valuations.values(), default=0)
    for s in (strategies or {}).values():
        hint = getattr(s, "price_bound", None)
        if hint is not None:
            bound = max(bound, hint())
    return bound + 1


def resolve_initial_monopsonies(instance: Instance, strategies: Mapping | None = None,
                                buyer_order: Sequence[str] | None = None) -> tuple[list, MinorView]:
    """Sell one item of each initial monopsony at price 0 until none is left."""
    auction = _Auction(instance, strategies, buyer_order)
    auction.resolve(initial=True)
    return [e for e in auction.events if isinstance(e, InitialSale)], auction.state.view


def run_auction(instance: Instance, strategies: Mapping | None = None, mode: str = UNIT,
                price_ceiling: int | None = None, buyer_order: Sequence[str] | None = None,
                seed: int | None = None) -> AuctionRun:
    """Run the ascending auction and return its outcome and event trace.

    ``strategies`` maps buyer id to a :class:`Signals` implementation (truthful
    by default). ``mode`` is ``"unit"`` (price +1 per round) or ``"long"`` (jump
    to the smallest announced critical threshold). ``seed`` shuffles the buyer
    order used to look for monopsonies; the outcome must not depend on it.
    """
    if mode not in (UNIT, LONG):
        raise InputError(f"unknown mode {mode!r}")
    if seed is not None and buyer_order is None:
        buyer_order = list(instance.buyers)
        random.Random(seed).shuffle(buyer_order)
    ceiling = _ceiling(instance, strategies) if price_ceiling is None else price_ceiling
    return _Auction(instance, strategies, buyer_order).run(mode, ceiling)


def new_monopsonies(before: MinorView, deleted: str, interest: Mapping[str, frozenset]) -> dict:
    """Per buyer, the cocircuits inside its item set created by deleting ``deleted`` from ``before``.

    Brute force over all subsets of the active items.
    """
    after = before.minor(delete=[deleted])
    old = {c.items for c in enumerate_cocircuits(before)}
    created = {}
    for c in enumerate_cocircuits(after):
        if c.items in old:
            continue
        for buyer, own in interest.items():
            if c.items <= own:
                created.setdefault(buyer, []).append(c)
    return created


@dataclass(frozen=True)
class Violation:
    index: int
    message: str

    def __str__(self):
        return f"event {self.index}: {self.message}"


@dataclass
class TraceReport:
    violations: list = field(default_factory=list)
    monopsony_checks: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_trace(trace: Sequence, instance: Instance, truthful: bool = True,
                   brute_force_limit: int = BRUTE_FORCE_LIMIT) -> TraceReport:
    """Replay ``trace`` against a fresh view of ``instance`` and report broken invariants.

    Protocol checks always run. With ``truthful`` the instance valuations are
    taken as the signals' source and the value-based invariants are checked as
    well: max-weight-base extendability after each sale and a price-setting
    deletion of value equal to the sale price. New-monopsony counting after each
    deletion runs by brute force while the view has at most
    ``brute_force_limit`` active items.
    """
    report = TraceReport()
    bad = report.violations.append
    for i, ev in enumerate(trace):
        if not isinstance(ev, EVENT_TYPES):
            raise InputError(f"event {i} is not an auction event: {ev!r}")
    interest = instance.interest
    values = instance.valuations
    root = instance.matroid.view()
    target = max_weight_base(root, values).weight
    view = root
    price = 0
    started = False
    epoch_announced: set = set()
    epoch_deleted: list = []
    pending: MonopsonyDetected | None = None

    def open_monopsony(at: int) -> bool:
        hit = detect_monopsony(view, interest)
        if hit:
            bad(Violation(at, f"unresolved monopsony {hit[1]} of buyer {hit[0]}"))
        return hit is not None

    for i, ev in enumerate(trace):
        if not started and not isinstance(ev, (InitialSale, MonopsonyDetected)):
            started = True
            if not isinstance(ev, PriceRaised):
                open_monopsony(i)
        if isinstance(ev, PriceRaised):
            if pending:
                bad(Violation(i, "price raised while a monopsony awaits its sale"))
            if ev.price <= price:
                bad(Violation(i, f"price {ev.price} does not exceed {price}"))
            open_monopsony(i)
            price, epoch_announced, epoch_deleted = ev.price, set(), []
        elif isinstance(ev, CriticalAnnounced):
            if ev.price != price:
                bad(Violation(i, f"announcement at {ev.price} during price epoch {price}"))
            if epoch_deleted:
                bad(Violation(i, "announcement after deletions started in this epoch"))
            if ev.buyer not in interest or ev.item not in interest[ev.buyer]:
                bad(Violation(i, f"buyer {ev.buyer} does not own {ev.item!r}"))
            if ev.item not in view._active_set:
                bad(Violation(i, f"announced item {ev.item!r} is no longer on sale"))
            epoch_announced.add(ev.item)
        elif isinstance(ev, Deleted):
            if pending:
                bad(Violation(i, "deletion while a monopsony awaits its sale"))
            if ev.price != price:
                bad(Violation(i, f"deletion at {ev.price} during price epoch {price}"))
            if ev.item not in epoch_announced:
                bad(Violation(i, f"deleted {ev.item!r} was not announced critical at price {price}"))
            if ev.item not in view._active_set:
                bad(Violation(i, f"deleted {ev.item!r} is not on sale"))
                continue
            if truthful and values[ev.item] > price:
                bad(Violation(i, f"deleted {ev.item!r} is worth {values[ev.item]} > price {price}"))
            if len(view.active) <= brute_force_limit:
                report.monopsony_checks += 1
                for buyer, made in new_monopsonies(view, ev.item, interest).items():
                    if len(made) > 1:
                        bad(Violation(i, f"deleting {ev.item!r} created {len(made)} monopsonies for buyer {buyer}: "
                                         + ", ".join(map(str, made))))
            view = view.minor(delete=[ev.item])
            epoch_deleted.append(ev.item)
        elif isinstance(ev, MonopsonyDetected):
            if pending:
                bad(Violation(i, "new monopsony reported before the previous one was sold"))
            cset = frozenset(ev.cocircuit)
            expected_price = price if started else 0
            if ev.price != expected_price:
                bad(Violation(i, f"monopsony reported at {ev.price} during price epoch {expected_price}"))
            if ev.buyer not in interest or not cset <= interest[ev.buyer]:
                bad(Violation(i, f"cocircuit {fmt_set(cset)} is not inside buyer {ev.buyer}'s items"))
            if not cset or not cset <= view._active_set:
                bad(Violation(i, f"cocircuit {fmt_set(cset)} is not made of items on sale"))
            else:
                rest = [e for e in view.active if e not in cset]
                genuine = view.rank(rest) < view.full_rank and all(
                    view.rank(rest + [e]) == view.full_rank for e in cset)
                if not genuine:
                    bad(Violation(i, f"{fmt_set(cset)} is not a cocircuit of the current minor"))
            pending = ev
        elif isinstance(ev, (Sold, InitialSale)):
            if isinstance(ev, InitialSale) and started:
                bad(Violation(i, "initial sale after the auction started"))
            if isinstance(ev, Sold) and not started:
                bad(Violation(i, "sale before the auction started"))
            if pending is None or pending.buyer != ev.buyer or ev.item not in pending.cocircuit:
                bad(Violation(i, f"sold {ev.item!r} outside its preceding monopsony cocircuit"))
            sale_price = ev.price if isinstance(ev, Sold) else 0
            if isinstance(ev, Sold) and sale_price != price:
                bad(Violation(i, f"price {sale_price} != price at preceding deletion epoch ({price})"))
            if truthful and isinstance(ev, Sold):
                if not epoch_deleted:
                    bad(Violation(i, f"sale of {ev.item!r} not preceded by a deletion at price {price}"))
                elif values[epoch_deleted[-1]] != sale_price:
                    f = epoch_deleted[-1]
                    bad(Violation(i, f"price-setting item {f!r} is worth {values[f]}, not the price {sale_price}"))
            pending = None
            if ev.item not in view._active_set:
                bad(Violation(i, f"sold {ev.item!r} is not on sale"))
                continue
            try:
                view = view.minor(contract=[ev.item])
            except InputError as exc:
                bad(Violation(i, str(exc)))
                continue
            if truthful:
                sold = view.contracted
                rest = root.minor(contract=sold)
                if sum(values[e] for e in sold) + max_weight_base(rest, values).weight != target:
                    bad(Violation(i, f"sold set {fmt_set(sold)} no longer extends to a max-weight base"))
    end = len(trace)
    if pending:
        bad(Violation(end, "trace ends with an unsold monopsony"))
    if len(view.contraction_base) != root.full_rank:
        bad(Violation(end, f"sold set {fmt_set(view.contracted)} is not a base"))
    return report
