import pytest

from matroid_auction.catalog import RandomParams, random_instance
from matroid_auction.engine import LONG, InitialSale, Sold, run_auction
from matroid_auction.errors import InputError, ResourceGuardError
from matroid_auction.fixtures import appendix_b_strategies, fig1, fig3, fig3_inconsistent_buyer1, fig4
from matroid_auction.lab import (appendix_b_scenarios, consistency_check, ex_post_equilibrium_check, proxy_auction,
                                 signal_constraints, utility, vcg_benchmark)
from matroid_auction.strategies import truthful_strategy

from oracles import corpus, vcg_prices


def test_proxy_auction_fig1():
    inst = fig1()
    outcome, vcg = proxy_auction(inst, inst.valuations)
    assert outcome.payments_tuple() == (0, 2, 4, 2)
    assert vcg.buyer_prices == outcome.buyer_payments


def test_proxy_auction_fig4():
    outcome, vcg = proxy_auction(fig4(), {"e1": 2, "f1": 4, "e2": 3, "f2": 3})
    assert outcome.base == {"f1", "e2"}
    assert outcome.buyer_payments == vcg.buyer_prices == {"1": 3, "2": 2}


def test_proxy_auction_zero_bids():
    inst = fig1()
    outcome, vcg = proxy_auction(inst, {e: 0 for e in inst.items})
    assert outcome.payments_tuple() == (0, 0, 0, 0)
    assert vcg.buyer_prices == outcome.buyer_payments


def test_proxy_auction_missing_bid():
    with pytest.raises(InputError):
        proxy_auction(fig4(), {"e1": 1})


def test_vcg_benchmark_with_presales():
    for _, _, inst in corpus(60):
        outcome, trace = run_auction(inst)
        presold = {ev.item for ev in trace if isinstance(ev, InitialSale)}
        assert vcg_benchmark(inst, base=outcome.base).buyer_prices == \
            vcg_prices(inst, outcome.base, presold=presold)


def test_fig3_inconsistent():
    inst = fig3()
    strategies = {b: truthful_strategy(inst.buyer_valuation(b)) for b in inst.buyers}
    strategies["1"] = fig3_inconsistent_buyer1()
    _, trace = run_auction(inst, strategies)
    result = consistency_check(trace, "1", inst)
    assert not result
    upper, lower = result.conflict
    assert (upper.kind, upper.item, upper.price) == ("critical", "b", 2)
    assert (lower.kind, lower.item, lower.other) == ("choice", "b", "c")
    assert [c.kind for c in result.chain] == ["silent", "choice"]
    assert consistency_check(trace, "3", inst)


def test_truthful_trace_is_consistent_with_true_values():
    inst = fig1()
    _, trace = run_auction(inst)
    for b in inst.buyers:
        result = consistency_check(trace, b, inst)
        assert result
        witness = result.witness
        # the least consistent valuation never exceeds the truth
        assert all(witness[e] <= inst.valuations[e] for e in witness)


def test_silent_buyer_is_consistent():
    inst = fig4()
    _, trace = run_auction(inst)
    assert consistency_check(trace[:1], "2", inst)
    with pytest.raises(InputError):
        consistency_check(trace, "9", inst)


def test_signal_constraints_fig4():
    inst = fig4()
    _, trace = run_auction(inst)
    kinds = {(c.kind, c.item, c.price) for c in signal_constraints(trace, "1", inst)}
    assert ("critical", "e1", 2) in kinds and ("silent", "f1", 2) in kinds


def test_ex_post_fig4_bound5():
    report = ex_post_equilibrium_check(fig4(), "1", 5)
    assert report.runs == 36 and report.ok
    assert report.truthful_utility == 1 and report.best_utility == 1


def test_ex_post_guard():
    with pytest.raises(ResourceGuardError):
        ex_post_equilibrium_check(fig1(), "2", 400)


def test_ex_post_unit_mode():
    assert ex_post_equilibrium_check(fig4(), "2", 4, mode="unit").ok


def test_appendix_b():
    report = appendix_b_scenarios()
    assert [report.utility(p) for p in [("sigma1", "sigma2"), ("sigma1'", "sigma2"), ("sigma1'", "sigma2'"),
                                        ("sigma1'", "sigma2''")]] == [1, 1, 2, 0]
    assert len(report.dominance()) == 2
    assert report.table().count("\n") == 6
    assert appendix_b_scenarios(mode=LONG).utility(("sigma1'", "sigma2'")) == 2


def test_individual_rationality_against_scripts():
    inst = fig4()
    pool = appendix_b_strategies()
    for other in ("sigma2", "sigma2'", "sigma2''"):
        outcome, _ = run_auction(inst, {"1": truthful_strategy(inst.buyer_valuation("1")),
                                         "2": appendix_b_strategies()[other]})
        assert utility(inst, outcome, "1") >= 0
    for other in ("sigma1", "sigma1'"):
        outcome, _ = run_auction(inst, {"1": pool[other], "2": truthful_strategy(inst.buyer_valuation("2"))})
        assert utility(inst, outcome, "2") >= 0


def test_revelation_equivalence_random_bids():
    import random
    rng = random.Random(5)
    for seed in range(40):
        inst = random_instance(RandomParams("graphic", vertices=4, max_edges=7, buyers=3), seed)
        bids = {e: rng.randint(0, 9) for e in inst.items}
        outcome, vcg = proxy_auction(inst, bids)
        assert outcome.buyer_payments == vcg.buyer_prices
        assert sum(outcome.item_prices[e] for e in outcome.base) == sum(outcome.buyer_payments.values())
        assert not [ev for ev in run_auction(inst)[1] if isinstance(ev, Sold) and ev.price < 0]
