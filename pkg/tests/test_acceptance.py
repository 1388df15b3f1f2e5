"""The eight acceptance criteria. Each test records one PASS/FAIL line shown in the terminal summary.

Tolerances: every comparison is exact integer equality; the only budgets are
the wall-clock limits below.
"""

import io
import itertools
import json
import re
import time

from conftest import record
from matroid_auction.cli import main
from matroid_auction.core import Matroid
from matroid_auction.engine import LONG, UNIT, Deleted, InitialSale, Sold, run_auction, validate_trace
from matroid_auction.errors import PreconditionError
from matroid_auction.fixtures import fig1, fig3, fig3_inconsistent_buyer1, fig4
from matroid_auction.greedy import max_weight_base, sealed_bid_vcg
from matroid_auction.lab import consistency_check, ex_post_equilibrium_check
from matroid_auction.props import SuiteConfig, corrupt_singleton, run_property_suite
from matroid_auction.strategies import truthful_strategy

from oracles import CORPUS_SIZE, bases, corpus, max_weight, vcg_prices

FIG1_BUDGET_S = 1.0
CORPUS_BUDGET_S = 60.0
PROPS_BUDGET_S = 120.0
EX_POST_BUDGET_S = 30.0
MIN_CORPUS = 500
MIN_PROPS_TRIALS = 200
MONOPSONY_LIMIT = 12


def cli(*argv):
    out = io.StringIO()
    return main([str(a) for a in argv], out), out.getvalue()


def test_1_fig1_reproduction(instances_dir):
    start = time.perf_counter()
    code, text = cli("run", "--instance", instances_dir / "fig1.json", "--json")
    elapsed = time.perf_counter() - start
    payload = json.loads(text)
    payments = tuple(payload["buyer_payments"][b] for b in ("1", "2", "3", "4"))
    ok = (code == 0 and len(payload["base"]) == 4 and set(payload["item_prices"].values()) == {2}
          and payload["welfare"] == 14 and payments == (0, 2, 4, 2) and elapsed < FIG1_BUDGET_S)
    record(1, "FIG1 reproduction", ok, f"payments {payments}, welfare {payload['welfare']}, {elapsed:.2f}s")
    assert ok


def test_2_vickrey_outcome_on_corpus():
    start = time.perf_counter()
    failures, count, plain = [], 0, 0
    for seed, family, inst in corpus():
        count += 1
        outcome, trace = run_auction(inst)
        best = max_weight(inst.matroid, inst.valuations)
        if outcome.welfare != best or max_weight_base(inst.matroid, inst.valuations).weight != best:
            failures.append((seed, "welfare"))
        presold = {ev.item for ev in trace if isinstance(ev, InitialSale)}
        if outcome.buyer_payments != vcg_prices(inst, outcome.base, presold=presold):
            failures.append((seed, "payments"))
        if not presold:
            try:
                direct = sealed_bid_vcg(inst, base=outcome.base).buyer_prices
            except PreconditionError:
                continue
            plain += 1
            if direct != outcome.buyer_payments:
                failures.append((seed, "sealed-bid"))
    elapsed = time.perf_counter() - start
    ok = not failures and count >= MIN_CORPUS and plain >= 100 and elapsed < CORPUS_BUDGET_S
    record(2, "welfare and Vickrey payments on the random corpus", ok,
           f"{count} instances ({plain} without presales), {len(failures)} mismatches, {elapsed:.1f}s")
    assert ok, failures[:5]


def test_3_long_step_equivalence():
    start = time.perf_counter()
    differ = []
    for seed, _, inst in corpus():
        unit, _ = run_auction(inst, mode=UNIT)
        long, _ = run_auction(inst, mode=LONG)
        if (unit.base, unit.item_prices) != (long.base, long.item_prices):
            differ.append(seed)
    elapsed = time.perf_counter() - start
    ok = not differ and elapsed < CORPUS_BUDGET_S
    record(3, "long-step equals unit-step", ok, f"{CORPUS_SIZE} instances, {len(differ)} differ, {elapsed:.1f}s")
    assert ok, differ[:5]


def test_4_lemma_suites():
    start = time.perf_counter()
    summary = run_property_suite(SuiteConfig(trials=MIN_PROPS_TRIALS, seed=2024))
    mutated = run_property_suite(SuiteConfig(trials=20, seed=2024, mutate=corrupt_singleton))
    elapsed = time.perf_counter() - start
    trials = {f: min(sum(r.values()) for r in rows.values()) for f, rows in summary.counts.items()}
    ok = (summary.ok and all(n >= MIN_PROPS_TRIALS for n in trials.values()) and len(trials) == 3
          and len(mutated.counterexamples) >= 1 and elapsed < PROPS_BUDGET_S)
    record(4, "matroid lemma suites", ok,
           f"{len(summary.counterexamples)} counterexamples over {trials}, mutation caught in "
           f"{len(mutated.counterexamples)} trials, {elapsed:.1f}s")
    assert ok


def cocircuits_of(view):
    """Cocircuits from the view's independence answers alone (minimal sets meeting every base)."""
    items = view.active
    bs = bases(Matroid(items, lambda s: view.is_independent(s))) if items else [frozenset()]
    meets = [frozenset(c) for r in range(1, len(items) + 1) for c in itertools.combinations(items, r)
             if all(set(c) & b for b in bs)]
    return {s for s in meets if not any(t < s for t in meets)}


def test_5_one_monopsony_per_buyer():
    violations, deletions = [], 0
    for seed, _, inst in corpus():
        if len(inst.items) > MONOPSONY_LIMIT:
            continue
        _, trace = run_auction(inst)
        if not validate_trace(trace, inst).ok:
            violations.append((seed, "validator"))
        view = inst.matroid.view()
        for ev in trace:
            if isinstance(ev, Deleted):
                deletions += 1
                before = cocircuits_of(view)
                view = view.minor(delete=[ev.item])
                fresh = cocircuits_of(view) - before
                for b, own in inst.interest.items():
                    if sum(1 for c in fresh if c <= own) > 1:
                        violations.append((seed, ev.item, b))
            elif isinstance(ev, (InitialSale, Sold)):
                view = view.minor(contract=[ev.item])
    ok = not violations and deletions > 0
    record(5, "at most one new monopsony per buyer per deletion", ok,
           f"{deletions} deletions checked, {len(violations)} violations")
    assert ok, violations[:5]


def test_6_appendix_b_payoffs():
    code, text = cli("scenarios", "appendix-b")
    found = {}
    for profile in ["(sigma1, sigma2)", "(sigma1', sigma2)", "(sigma1', sigma2')", "(sigma1', sigma2'')"]:
        m = re.search(re.escape(profile) + r"\s+(\d+)\s", text)
        found[profile] = int(m.group(1)) if m else None
    utilities = list(found.values())
    ok = (code == 0 and utilities == [1, 1, 2, 0] and "sigma1 is not a best response to sigma2'" in text
          and "sigma1' is not a best response to sigma2''" in text)
    record(6, "non-dominance payoff table", ok, f"buyer 1 utilities {utilities}")
    assert ok


def test_7_ex_post_equilibrium():
    start = time.perf_counter()
    bad, runs = [], 0
    for inst in (fig1(), fig4()):
        bound = max(inst.valuations.values()) + 1
        for b in inst.buyers:
            report = ex_post_equilibrium_check(inst, b, bound)
            runs += report.runs
            if not report.ok:
                bad.append((b, report.counterexamples[:1]))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < EX_POST_BUDGET_S
    record(7, "truthful signaling is an ex-post best response", ok,
           f"{runs} deviations tried, {len(bad)} profitable, {elapsed:.1f}s")
    assert ok, bad


def test_8_consistency_detector():
    inst = fig3()
    strategies = {b: truthful_strategy(inst.buyer_valuation(b)) for b in inst.buyers}
    strategies["1"] = fig3_inconsistent_buyer1()
    _, trace = run_auction(inst, strategies)
    flagged = consistency_check(trace, "1", inst)
    pair = flagged.conflict
    pair_ok = (not flagged and pair is not None and pair[0].kind == "critical" and pair[1].kind == "choice"
               and pair[0].item == pair[1].item)
    rejected = []
    for seed, _, corp in corpus():
        _, truthful = run_auction(corp)
        rejected += [(seed, b) for b in corp.buyers if not consistency_check(truthful, b, corp)]
    ok = pair_ok and not rejected
    detail = f"conflict: {pair[0]} / {pair[1]}" if pair else "no conflict reported"
    record(8, "inconsistent signals detected", ok, f"{detail}; {len(rejected)} truthful traces rejected")
    assert ok
