"""JSON instance documents, the line-oriented trace format, and report payloads."""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Mapping
from pathlib import Path

from .catalog import Instance, build_matroid, parallel_copy_reduction
from .core import sort_items
from .engine import CriticalAnnounced, Deleted, InitialSale, MonopsonyDetected, Outcome, PriceRaised, Sold
from .errors import SchemaError, TraceParseError
from .greedy import VcgResult


def _load(source) -> object:
    if isinstance(source, Mapping):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        with open(source) as fh:
            text = fh.read()
    else:
        text = source
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"not valid JSON: {exc}") from None


def _nonneg_int(val, path: str) -> int:
    if isinstance(val, bool) or not isinstance(val, int) or val < 0:
        raise SchemaError(path, f"expected a nonnegative integer, got {val!r}")
    return val


def parse_instance(document) -> Instance:
    """Build an Instance from a JSON document, a JSON string or a file path.

    Schema::

        {"matroid": {...},
         "buyers": [{"id": "1", "items": {"x": 2}}, ...],
         "flags": {"allow_overlap": false}}
    """
    doc = _load(document)
    if not isinstance(doc, Mapping):
        raise SchemaError("", "expected a JSON object")
    extra = set(doc) - {"matroid", "buyers", "flags", "name"}
    if extra:
        raise SchemaError(sorted(extra)[0], "unknown field")
    if "matroid" not in doc:
        raise SchemaError("matroid", "missing field")
    matroid = build_matroid(doc["matroid"])
    flags = doc.get("flags") or {}
    if not isinstance(flags, Mapping):
        raise SchemaError("flags", "expected an object")
    overlap = flags.get("allow_overlap", False)
    if not isinstance(overlap, bool):
        raise SchemaError("flags.allow_overlap", "expected a boolean")
    buyers = doc.get("buyers")
    if not isinstance(buyers, list) or not buyers:
        raise SchemaError("buyers", "expected a nonempty list")
    ground = set(matroid.ground_set)
    wants: dict[str, dict[str, int]] = {}
    owner: dict[str, str] = {}
    for i, entry in enumerate(buyers):
        path = f"buyers[{i}]"
        if not isinstance(entry, Mapping) or "id" not in entry or "items" not in entry:
            raise SchemaError(path, "expected {id, items}")
        bid = str(entry["id"])
        if bid in wants:
            raise SchemaError(f"{path}.id", f"duplicate buyer id {bid!r}")
        items = entry["items"]
        if not isinstance(items, Mapping):
            raise SchemaError(f"{path}.items", "expected an object mapping item id to valuation")
        wants[bid] = {}
        for e, v in items.items():
            e = str(e)
            if e not in ground:
                raise SchemaError(f"{path}.items.{e}", f"unknown item {e!r}")
            if e in owner and not overlap:
                raise SchemaError(f"{path}.items.{e}",
                                  f"item {e!r} also wanted by buyer {owner[e]}; set flags.allow_overlap")
            owner.setdefault(e, bid)
            wants[bid][e] = _nonneg_int(v, f"{path}.items.{e}")
    unwanted = ground - set(owner)
    if unwanted:
        raise SchemaError("buyers", f"item {sort_items(unwanted)[0]!r} is not wanted by any buyer")
    if overlap:
        return parallel_copy_reduction(matroid, wants)
    return Instance(matroid, {b: set(w) for b, w in wants.items()},
                    {e: v for w in wants.values() for e, v in w.items()})


def instance_document(instance: Instance) -> dict:
    return {
        "matroid": instance.matroid.to_spec(),
        "buyers": [{"id": b, "items": instance.buyer_valuation(b)} for b in instance.buyers],
    }


def emit_instance(instance: Instance) -> str:
    return json.dumps(instance_document(instance), indent=2)


def parse_bids(source, instance: Instance) -> dict[str, int]:
    """Bid documents are flat ``{item: bid}`` objects covering every item."""
    doc = _load(source)
    if not isinstance(doc, Mapping):
        raise SchemaError("", "expected an object mapping item id to bid")
    bids = {}
    for e, v in doc.items():
        if str(e) not in instance.valuations:
            raise SchemaError(str(e), f"unknown item {e!r}")
        bids[str(e)] = _nonneg_int(v, str(e))
    missing = [e for e in instance.items if e not in bids]
    if missing:
        raise SchemaError(missing[0], "no bid for this item")
    return bids


def emit_event(ev) -> str:
    if isinstance(ev, PriceRaised):
        return f"PRICE {ev.price}"
    if isinstance(ev, CriticalAnnounced):
        return f"CRITICAL buyer={ev.buyer} item={ev.item} price={ev.price}"
    if isinstance(ev, Deleted):
        return f"DELETE item={ev.item} price={ev.price}"
    if isinstance(ev, MonopsonyDetected):
        return f"MONOPSONY buyer={ev.buyer} cocircuit=[{','.join(ev.cocircuit)}] price={ev.price}"
    if isinstance(ev, Sold):
        return f"SELL buyer={ev.buyer} item={ev.item} price={ev.price}"
    if isinstance(ev, InitialSale):
        return f"INITSALE buyer={ev.buyer} item={ev.item}"
    raise TypeError(f"not a trace event: {ev!r}")


def emit_trace(trace: Iterable) -> str:
    return "".join(emit_event(ev) + "\n" for ev in trace)


_TOKEN = r"[^\s=,\[\]]+"
_GRAMMAR = {
    "PRICE": (re.compile(rf"PRICE (?P<price>\d+)"), PriceRaised),
    "CRITICAL": (re.compile(rf"CRITICAL buyer=(?P<buyer>{_TOKEN}) item=(?P<item>{_TOKEN}) price=(?P<price>\d+)"),
                 CriticalAnnounced),
    "DELETE": (re.compile(rf"DELETE item=(?P<item>{_TOKEN}) price=(?P<price>\d+)"), Deleted),
    "MONOPSONY": (re.compile(rf"MONOPSONY buyer=(?P<buyer>{_TOKEN}) "
                             rf"cocircuit=\[(?P<cocircuit>{_TOKEN}(?:,{_TOKEN})*)\] price=(?P<price>\d+)"),
                  MonopsonyDetected),
    "SELL": (re.compile(rf"SELL buyer=(?P<buyer>{_TOKEN}) item=(?P<item>{_TOKEN}) price=(?P<price>\d+)"), Sold),
    "INITSALE": (re.compile(rf"INITSALE buyer=(?P<buyer>{_TOKEN}) item=(?P<item>{_TOKEN})"), InitialSale),
}


def parse_event(line: str, lineno: int = 1):
    keyword = line.split(" ", 1)[0]
    if keyword not in _GRAMMAR:
        raise TraceParseError(f"line {lineno}: unknown event {keyword!r}")
    pattern, cls = _GRAMMAR[keyword]
    m = pattern.fullmatch(line)
    if m is None:
        raise TraceParseError(f"line {lineno}: malformed {keyword} event: {line!r}")
    fields = m.groupdict()
    if "price" in fields:
        fields["price"] = int(fields["price"])
    if "cocircuit" in fields:
        fields["cocircuit"] = tuple(fields["cocircuit"].split(","))
    return cls(**fields)


def parse_trace(text: str) -> list:
    """Inverse of :func:`emit_trace`; blank lines are skipped."""
    events = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if line:
            events.append(parse_event(line, lineno))
    return events


def read_trace(path) -> list:
    with open(path) as fh:
        return parse_trace(fh.read())


def outcome_payload(outcome: Outcome) -> dict:
    return {
        "base": sort_items(outcome.base),
        "item_prices": {e: outcome.item_prices[e] for e in sort_items(outcome.item_prices)},
        "buyer_payments": {b: outcome.buyer_payments[b] for b in sort_items(outcome.buyer_payments)},
        "welfare": outcome.welfare,
    }


def vcg_payload(result: VcgResult) -> dict:
    return {
        "base": result.base.sorted(),
        "weight": result.base.weight,
        "buyer_prices": {b: result.buyer_prices[b] for b in sort_items(result.buyer_prices)},
    }


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)
