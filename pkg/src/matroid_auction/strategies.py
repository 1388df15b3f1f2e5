"""Buyer signaling strategies: truthful, reported (proxy), and scripted deviations."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

from .core import Cocircuit, item_key, sort_items
from .engine import (CriticalAnnounced, Deleted, InitialSale, MonopsonyDetected, Observation, PriceRaised,
                     Sold)
from .errors import SchemaError

EVENT_NAMES = {
    "PRICE": PriceRaised,
    "CRITICAL": CriticalAnnounced,
    "DELETE": Deleted,
    "MONOPSONY": MonopsonyDetected,
    "SELL": Sold,
    "INITSALE": InitialSale,
}


class TruthfulStrategy:
    """Signals consistent with ``valuation``.

    An item is announced critical once the price reaches its value, and a
    monopsony is answered with its most valuable item (ties: smallest id).
    """

    kind = "truthful"

    def __init__(self, valuation: Mapping[str, int]):
        self.valuation = {str(e): v for e, v in valuation.items()}

    def __repr__(self):
        return f"{type(self).__name__}({self.valuation})"

    def price_bound(self) -> int:
        return max(self.valuation.values(), default=0)

    def next_critical_threshold(self, obs: Observation) -> int | None:
        values = [max(self.valuation[e], obs.price + 1) for e in obs.active]
        return min(values, default=None)

    def critical_items_at(self, price: int, obs: Observation) -> set:
        return {e for e in obs.active if self.valuation[e] <= price}

    def choose_from_monopsony(self, cocircuit: Cocircuit, obs: Observation) -> str:
        return min(cocircuit, key=lambda e: (-self.valuation[e], item_key(e)))


class ReportedStrategy(TruthfulStrategy):
    """Proxy bidder: answers every query truthfully with respect to a fixed bid vector."""

    kind = "reported"


def truthful_strategy(valuation: Mapping[str, int]) -> TruthfulStrategy:
    return TruthfulStrategy(valuation)


def reported_strategy(bids: Mapping[str, int]) -> ReportedStrategy:
    return ReportedStrategy(bids)


def _matches(pattern: Mapping, event) -> bool:
    if not isinstance(event, EVENT_NAMES[pattern["event"]]):
        return False
    for key, want in pattern.items():
        if key == "event":
            continue
        got = getattr(event, key, None)
        if key == "cocircuit":
            if set(map(str, want)) != set(got):
                return False
        elif str(got) != str(want):
            return False
    return True


@dataclass(frozen=True)
class Rule:
    """One scripted override, applied on top of the truthful behavior.

    The rule fires at prices in ``[min_price, max_price]`` when every pattern
    in ``if_seen`` matches some past public event and none in ``unless_seen``
    does. A firing rule adds ``announce`` items to and removes ``withhold``
    items from the critical set; ``choose`` overrides a monopsony answer (only
    for ``monopsony`` if given, and only when the item is in the cocircuit).
    """

    min_price: int = 0
    max_price: int | None = None
    if_seen: tuple = ()
    unless_seen: tuple = ()
    announce: frozenset = frozenset()
    withhold: frozenset = frozenset()
    choose: str | None = None
    monopsony: frozenset | None = None

    def fires(self, price: int, history) -> bool:
        if price < self.min_price or (self.max_price is not None and price > self.max_price):
            return False
        if not all(any(_matches(p, ev) for ev in history) for p in self.if_seen):
            return False
        return not any(_matches(p, ev) for p in self.unless_seen for ev in history)

    def horizon(self) -> int:
        return self.max_price if self.max_price is not None else self.min_price


class ScriptedStrategy(TruthfulStrategy):
    kind = "scripted"

    def __init__(self, valuation: Mapping[str, int], rules, name: str | None = None):
        super().__init__(valuation)
        self.rules = tuple(rules)
        self.name = name

    def __repr__(self):
        return f"ScriptedStrategy({self.name or len(self.rules)})"

    def price_bound(self) -> int:
        return max([super().price_bound()] + [r.horizon() + 1 for r in self.rules])

    def critical_items_at(self, price: int, obs: Observation) -> set:
        items = super().critical_items_at(price, obs)
        for rule in self.rules:
            if (rule.announce or rule.withhold) and rule.fires(price, obs.history):
                items = (items | rule.announce) - rule.withhold
        return items & obs.active

    def next_critical_threshold(self, obs: Observation) -> int | None:
        if not obs.active:
            return None
        for q in range(obs.price + 1, self.price_bound() + 1):
            if self.critical_items_at(q, obs):
                return q
        return None

    def choose_from_monopsony(self, cocircuit: Cocircuit, obs: Observation) -> str:
        choice = super().choose_from_monopsony(cocircuit, obs)
        for rule in self.rules:
            if rule.choose is None or rule.choose not in cocircuit:
                continue
            if rule.monopsony is not None and rule.monopsony != cocircuit.items:
                continue
            if rule.fires(obs.price, obs.history):
                choice = rule.choose
        return choice


def _parse_pattern(raw, path: str) -> dict:
    if not isinstance(raw, Mapping) or raw.get("event") not in EVENT_NAMES:
        raise SchemaError(path, f"expected an event pattern with event in {sorted(EVENT_NAMES)}")
    return dict(raw)


def parse_rule(raw: Mapping, path: str = "rules[0]") -> Rule:
    if not isinstance(raw, Mapping):
        raise SchemaError(path, "expected an object")
    known = {"price", "min_price", "max_price", "if_seen", "unless_seen", "announce", "withhold",
             "choose", "monopsony"}
    extra = set(raw) - known
    if extra:
        raise SchemaError(f"{path}.{sorted(extra)[0]}", "unknown rule field")
    lo, hi = raw.get("min_price", 0), raw.get("max_price")
    checks = [("min_price", lo), ("max_price", hi)]
    if "price" in raw:
        lo = hi = raw["price"]
        checks = [("price", lo)]
    for key, val in checks:
        if val is not None and (isinstance(val, bool) or not isinstance(val, int) or val < 0):
            raise SchemaError(f"{path}.{key}", f"expected a nonnegative integer, got {val!r}")
    if not any(k in raw for k in ("announce", "withhold", "choose")):
        raise SchemaError(path, "a rule needs announce, withhold or choose")
    return Rule(
        min_price=lo,
        max_price=hi,
        if_seen=tuple(_parse_pattern(p, f"{path}.if_seen[{i}]") for i, p in enumerate(raw.get("if_seen", []))),
        unless_seen=tuple(_parse_pattern(p, f"{path}.unless_seen[{i}]")
                          for i, p in enumerate(raw.get("unless_seen", []))),
        announce=frozenset(map(str, raw.get("announce", []))),
        withhold=frozenset(map(str, raw.get("withhold", []))),
        choose=str(raw["choose"]) if raw.get("choose") is not None else None,
        monopsony=frozenset(map(str, raw["monopsony"])) if raw.get("monopsony") is not None else None,
    )


def load_script(source: str | Path | Mapping, valuation: Mapping[str, int]) -> ScriptedStrategy:
    """Build a scripted strategy from a script document or a JSON file path.

    ``valuation`` is the buyer's truthful baseline; a ``valuation`` object in
    the script overrides it item by item.
    """
    name = None
    if not isinstance(source, Mapping):
        name = str(source)
        with open(source) as fh:
            source = json.load(fh)
    if not isinstance(source, Mapping):
        raise SchemaError("", "a script must be a JSON object")
    rules = source.get("rules", [])
    if not isinstance(rules, list):
        raise SchemaError("rules", "expected a list")
    base = dict(valuation)
    for e, v in (source.get("valuation") or {}).items():
        if str(e) not in base:
            raise SchemaError(f"valuation.{e}", "item not owned by this buyer")
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise SchemaError(f"valuation.{e}", "expected a nonnegative integer")
        base[str(e)] = v
    parsed = [parse_rule(r, f"rules[{i}]") for i, r in enumerate(rules)]
    for i, rule in enumerate(parsed):
        stray = (rule.announce | rule.withhold | ({rule.choose} if rule.choose else set())) - set(base)
        if stray:
            raise SchemaError(f"rules[{i}]", f"item {sort_items(stray)[0]!r} not owned by this buyer")
    return ScriptedStrategy(base, parsed, name=source.get("name", name))

