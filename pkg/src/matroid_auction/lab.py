"""Incentive experiments: proxy auctions, signal consistency, ex-post checks, the non-dominance example."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .catalog import Instance
from .core import sort_items
from .engine import (LONG, UNIT, CriticalAnnounced, Deleted, InitialSale, MonopsonyDetected, Outcome,
                     PriceRaised, Sold, resolve_initial_monopsonies, run_auction)
from .errors import InputError, ResourceGuardError
from .fixtures import appendix_b_strategies, fig4
from .greedy import VcgResult, WeightedBase, sealed_bid_vcg
from .strategies import reported_strategy, truthful_strategy

GRID_GUARD = 10 ** 5


def vcg_benchmark(instance: Instance, bids: Mapping[str, int] | None = None,
                  base: Iterable[str] | None = None) -> VcgResult:
    """Sealed-bid VCG that tolerates initial monopsonies.

    Initial monopsonies are first resolved the way the ascending auction does
    (one item sold at price 0, highest bid first); VCG prices are then computed
    on the contracted instance. Without initial monopsonies this is exactly
    :func:`sealed_bid_vcg`. ``base`` pins the winning optimum, as there.
    """
    bids = dict(instance.valuations if bids is None else bids)
    proxies = {b: reported_strategy({e: bids[e] for e in instance.interest[b]}) for b in instance.buyers}
    presales, view = resolve_initial_monopsonies(instance, proxies)
    if not presales:
        return sealed_bid_vcg(instance, bids, base)
    sold = {s.item for s in presales}
    reduced = Instance(view.as_matroid(), {b: items - sold for b, items in instance.interest.items()},
                       {e: instance.valuations[e] for e in view.active})
    if base is not None:
        base = frozenset(base)
        if not sold <= base:
            raise InputError("given base does not contain the initial monopsony sales")
        base = base - sold
    inner = sealed_bid_vcg(reduced, {e: bids[e] for e in view.active}, base)
    won = inner.base.items | sold
    return VcgResult(WeightedBase(won, inner.base.weight + sum(bids[e] for e in sold)), inner.buyer_prices)


def proxy_auction(instance: Instance, bids: Mapping[str, int], mode: str = UNIT) -> tuple[Outcome, VcgResult]:
    """Run the ascending auction with every buyer answering from ``bids``, next to sealed-bid VCG on ``bids``.

    The VCG prices are taken at the auction's winning base, which must be a
    max-weight base for ``bids``.
    """
    missing = [e for e in instance.items if e not in bids]
    if missing:
        raise InputError(f"no bid for item {missing[0]!r}")
    proxies = {b: reported_strategy({e: bids[e] for e in instance.interest[b]}) for b in instance.buyers}
    outcome, _ = run_auction(instance, proxies, mode=mode)
    return outcome, vcg_benchmark(instance, bids, outcome.base)


@dataclass(frozen=True)
class Constraint:
    """One fact a buyer's signals reveal about its valuation.

    kinds: ``critical`` (v(item) <= price), ``silent`` (v(item) > price),
    ``choice`` (v(item) >= v(other)).
    """

    kind: str
    item: str
    price: int | None = None
    other: str | None = None
    index: int | None = None

    def __str__(self):
        at = f" (event {self.index})" if self.index is not None else ""
        if self.kind == "critical":
            return f"{self.item} announced critical at {self.price}: v({self.item}) <= {self.price}{at}"
        if self.kind == "silent":
            return f"{self.item} not critical at {self.price}: v({self.item}) >= {self.price + 1}{at}"
        return f"{self.item} chosen over {self.other} at {self.price}: v({self.item}) >= v({self.other}){at}"


@dataclass
class ConsistencyResult:
    consistent: bool
    witness: dict | None = None
    conflict: tuple | None = None
    chain: list = field(default_factory=list)
    constraints: list = field(default_factory=list)

    def __bool__(self):
        return self.consistent


def signal_constraints(trace: Sequence, buyer: str, instance: Instance) -> list[Constraint]:
    """Constraints on ``buyer``'s valuation implied by its signals in ``trace``.

    At every price round, items the buyer still had on offer but did not
    announce are constrained from below; announced ones from above; each
    monopsony answer orders the chosen item above the rest of the cocircuit.
    """
    own = instance.interest[buyer]
    active = set(own)
    out: list[Constraint] = []
    epoch: tuple | None = None  # (price, items on offer at announcement time, announced)

    def close():
        if epoch is None:
            return
        price, offered, said = epoch
        for e in sort_items(offered - said):
            out.append(Constraint("silent", e, price))

    pending = None
    for i, ev in enumerate(trace):
        if epoch is None and not isinstance(ev, (InitialSale, MonopsonyDetected)):
            epoch = (0, frozenset(active), set())
        if isinstance(ev, PriceRaised):
            close()
            epoch = (ev.price, frozenset(active), set())
        elif isinstance(ev, CriticalAnnounced) and ev.buyer == buyer:
            epoch[2].add(ev.item)
            out.append(Constraint("critical", ev.item, ev.price, index=i))
        elif isinstance(ev, MonopsonyDetected):
            pending = ev
        elif isinstance(ev, (Sold, InitialSale)):
            if ev.buyer == buyer and pending is not None:
                for f in pending.cocircuit:
                    if f != ev.item:
                        out.append(Constraint("choice", ev.item, ev.price, other=f, index=i))
            pending = None
            active.discard(ev.item)
        elif isinstance(ev, Deleted):
            active.discard(ev.item)
    if epoch is None:
        # only pre-sales: the opening round happened unless they already formed a base
        sold = {ev.item for ev in trace if isinstance(ev, InitialSale)}
        if len(sold) < instance.matroid.rank():
            epoch = (0, frozenset(active), set())
    close()
    return out


def consistency_check(trace: Sequence, buyer: str, instance: Instance) -> ConsistencyResult:
    """Decide whether some integer valuation explains all of ``buyer``'s signals.

    Lower bounds are pushed along the choice constraints to their least fixed
    point; the signals are consistent iff that least valuation respects every
    upper bound. On failure ``conflict`` is (upper-bound constraint, the
    constraint that delivered the violating lower bound) and ``chain`` the full
    derivation of that lower bound.
    """
    if buyer not in instance.interest:
        raise InputError(f"unknown buyer {buyer!r}")
    constraints = signal_constraints(trace, buyer, instance)
    items = sort_items(instance.interest[buyer])
    lower = {e: 0 for e in items}
    why: dict[str, list] = {e: [] for e in items}
    upper: dict[str, tuple] = {}
    edges = []
    for c in constraints:
        if c.kind == "critical":
            if c.item not in upper or c.price < upper[c.item][0]:
                upper[c.item] = (c.price, c)
        elif c.kind == "silent":
            if c.price + 1 > lower[c.item]:
                lower[c.item], why[c.item] = c.price + 1, [c]
        else:
            edges.append(c)
    changed = True
    while changed:
        changed = False
        for c in edges:
            if lower[c.other] > lower[c.item]:
                lower[c.item], why[c.item] = lower[c.other], why[c.other] + [c]
                changed = True
    for e in items:
        if e in upper and lower[e] > upper[e][0]:
            return ConsistencyResult(False, conflict=(upper[e][1], why[e][-1]), chain=why[e],
                                     constraints=constraints)
    return ConsistencyResult(True, witness=dict(lower), constraints=constraints)


@dataclass
class EquilibriumReport:
    buyer: str
    bound: int
    truthful_utility: int
    best_utility: int
    best_bids: dict
    runs: int
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def utility(instance: Instance, outcome: Outcome, buyer: str) -> int:
    won = outcome.base & instance.interest[buyer]
    return sum(instance.valuations[e] for e in won) - outcome.buyer_payments[buyer]


def ex_post_equilibrium_check(instance: Instance, buyer: str, bid_grid_bound: int,
                              mode: str = LONG) -> EquilibriumReport:
    """Try every reported bid vector in ``[0, bound]`` for ``buyer`` against truthful opponents."""
    own = sort_items(instance.interest[buyer])
    size = (bid_grid_bound + 1) ** len(own)
    if size > GRID_GUARD:
        raise ResourceGuardError(f"bid grid of {size} vectors exceeds {GRID_GUARD}")
    others = {b: truthful_strategy(instance.buyer_valuation(b)) for b in instance.buyers if b != buyer}
    truthful, _ = run_auction(instance, {**others, buyer: truthful_strategy(instance.buyer_valuation(buyer))},
                              mode=mode)
    base_u = utility(instance, truthful, buyer)
    report = EquilibriumReport(buyer, bid_grid_bound, base_u, base_u, instance.buyer_valuation(buyer), 0)
    for vector in itertools.product(range(bid_grid_bound + 1), repeat=len(own)):
        bids = dict(zip(own, vector))
        outcome, _ = run_auction(instance, {**others, buyer: reported_strategy(bids)}, mode=mode,
                                 price_ceiling=max(max(instance.valuations.values(), default=0), bid_grid_bound) + 1)
        report.runs += 1
        u = utility(instance, outcome, buyer)
        if u > report.best_utility:
            report.best_utility, report.best_bids = u, bids
        if u > base_u:
            report.counterexamples.append((bids, u))
    return report


@dataclass
class ProfileRow:
    profile: tuple
    utilities: dict
    payments: dict
    winners: dict
    supplementary: bool = False


@dataclass
class PayoffReport:
    rows: list

    def utility(self, profile: tuple, buyer: str = "1") -> int:
        for row in self.rows:
            if row.profile == profile:
                return row.utilities[buyer]
        raise KeyError(profile)

    def table(self) -> str:
        lines = [f"{'profile':<22} {'u1':>3} {'u2':>3}  winners"]
        for row in self.rows:
            label = "(" + ", ".join(row.profile) + ")"
            won = "; ".join(f"{b}:{','.join(sort_items(items)) or '-'}" for b, items in row.winners.items())
            mark = "  *" if row.supplementary else ""
            lines.append(f"{label:<22} {row.utilities['1']:>3} {row.utilities['2']:>3}  {won}{mark}")
        return "\n".join(lines)

    def dominance(self) -> list[str]:
        """Why neither best response of buyer 1 is dominant."""
        u = self.utility
        notes = []
        if u(("sigma1", "sigma2'")) < u(("sigma1'", "sigma2'")):
            notes.append("sigma1 is not a best response to sigma2'")
        if u(("sigma1'", "sigma2''")) < u(("sigma1", "sigma2''")):
            notes.append("sigma1' is not a best response to sigma2''")
        return notes


APPENDIX_B_PROFILES = [("sigma1", "sigma2"), ("sigma1'", "sigma2"), ("sigma1'", "sigma2'"), ("sigma1'", "sigma2''")]
SUPPLEMENTARY_PROFILES = [("sigma1", "sigma2'"), ("sigma1", "sigma2''")]


def appendix_b_scenarios(mode: str = UNIT) -> PayoffReport:
    """Replay the two-buyer example on the doubled path under each strategy profile."""
    instance = fig4()
    rows = []
    for profile in APPENDIX_B_PROFILES + SUPPLEMENTARY_PROFILES:
        pool = appendix_b_strategies()
        s1, s2 = profile
        outcome, _ = run_auction(instance, {"1": pool[s1], "2": pool[s2]}, mode=mode)
        rows.append(ProfileRow(
            profile,
            {b: utility(instance, outcome, b) for b in instance.buyers},
            dict(outcome.buyer_payments),
            {b: outcome.base & instance.interest[b] for b in instance.buyers},
            supplementary=profile in SUPPLEMENTARY_PROFILES,
        ))
    return PayoffReport(rows)
