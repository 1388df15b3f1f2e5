"""Matroid greedy algorithm and the sealed-bid Vickrey (VCG) benchmark."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Iterable

from .catalog import Instance
from .core import Matroid, MinorView, item_key, sort_items
from .errors import InputError, PreconditionError


@dataclass(frozen=True)
class WeightedBase:
    items: frozenset
    weight: int

    def sorted(self) -> list[str]:
        return sort_items(self.items)


@dataclass(frozen=True)
class VcgResult:
    base: WeightedBase
    buyer_prices: dict


def max_weight_base(view: MinorView | Matroid, weights: Mapping[str, int]) -> WeightedBase:
    """Scan items by non-increasing weight (ties: ascending id), keeping each one that stays independent."""
    if isinstance(view, Matroid):
        view = view.view()
    missing = [e for e in view.active if e not in weights]
    if missing:
        raise InputError(f"no weight for item {missing[0]!r}")
    chosen: set = set()
    for e in sorted(view.active, key=lambda e: (-weights[e], item_key(e))):
        if view.is_independent(chosen | {e}):
            chosen.add(e)
    return WeightedBase(frozenset(chosen), sum(weights[e] for e in chosen))


def welfare(instance: Instance, base) -> int:
    return sum(instance.valuations[e] for e in base)


def sealed_bid_vcg(instance: Instance, bids: Mapping[str, int] | None = None,
                   base: Iterable[str] | None = None) -> VcgResult:
    """Max-weight base under ``bids`` and each buyer's Vickrey price.

    Buyer i pays the best bid-weight of a base avoiding E_i minus the bid-weight
    of the winning base outside E_i. Under ties the prices depend on which
    optimum wins, so ``base`` may name it (it must be a max-weight base);
    otherwise the greedy base is used.
    """
    bids = dict(instance.valuations if bids is None else bids)
    for e in instance.items:
        b = bids.get(e)
        if isinstance(b, bool) or not isinstance(b, int) or b < 0:
            raise InputError(f"bid for {e!r} must be a nonnegative integer, got {b!r}")
    view = instance.matroid.view()
    best = max_weight_base(view, bids)
    if base is not None:
        chosen = frozenset(base)
        if not chosen <= set(view.active) or not view.is_base(chosen):
            raise InputError("given winning set is not a base")
        weight = sum(bids[e] for e in chosen)
        if weight != best.weight:
            raise InputError(f"given base has bid-weight {weight}, the optimum is {best.weight}")
        best = WeightedBase(chosen, weight)
    prices = {}
    for buyer in instance.buyers:
        own = instance.interest[buyer]
        without = view.minor(delete=own)
        if without.full_rank < view.full_rank:
            raise PreconditionError(f"buyer {buyer} holds a monopsony: M minus E_{buyer} has no base")
        others = sum(bids[e] for e in best.items - own)
        prices[buyer] = max_weight_base(without, bids).weight - others
    return VcgResult(best, prices)
