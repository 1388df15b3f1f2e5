import json

import pytest

from matroid_auction.core import Cocircuit
from matroid_auction.engine import CriticalAnnounced, Observation, run_auction
from matroid_auction.errors import SchemaError
from matroid_auction.fixtures import appendix_b_strategies, fig1, fig4
from matroid_auction.strategies import Rule, ScriptedStrategy, load_script, parse_rule, reported_strategy, \
    truthful_strategy


def obs(price, active, history=()):
    return Observation("1", price, frozenset(active), tuple(history))


def test_truthful_thresholds():
    s = truthful_strategy({"e1": 2, "f1": 4})
    assert s.next_critical_threshold(obs(0, {"e1", "f1"})) == 2
    assert s.next_critical_threshold(obs(2, {"f1"})) == 4
    assert s.critical_items_at(2, obs(2, {"e1", "f1"})) == {"e1"}
    assert s.choose_from_monopsony(Cocircuit(frozenset({"f1"})), obs(3, {"f1"})) == "f1"


def test_truthful_choice_and_ties():
    s = truthful_strategy({"y1": 2, "y2": 3})
    assert s.choose_from_monopsony(Cocircuit(frozenset({"y1", "y2"})), obs(2, {"y1", "y2"})) == "y2"
    tied = truthful_strategy({"b": 4, "a10": 4, "a2": 4})
    assert tied.choose_from_monopsony(Cocircuit(frozenset({"b", "a10", "a2"})), obs(0, {"b"})) == "a2"


def test_reported_behaves_like_truthful():
    inst = fig1()
    proxies = {b: reported_strategy(inst.buyer_valuation(b)) for b in inst.buyers}
    assert run_auction(inst, proxies) == run_auction(inst)


def test_rule_conditions():
    seen = CriticalAnnounced("1", "e1", 1)
    rule = Rule(min_price=2, max_price=3, if_seen=({"event": "CRITICAL", "buyer": "1", "item": "e1"},),
                announce=frozenset({"f2"}))
    assert not rule.fires(2, ())
    assert rule.fires(2, (seen,)) and rule.fires(3, (seen,))
    assert not rule.fires(4, (seen,))
    blocked = Rule(unless_seen=({"event": "CRITICAL", "price": 1},), choose="a")
    assert not blocked.fires(5, (seen,))


def test_scripted_announce_and_withhold():
    s = ScriptedStrategy({"e1": 2, "f1": 4}, [Rule(min_price=1, max_price=1, announce=frozenset({"e1"})),
                                              Rule(min_price=4, max_price=4, withhold=frozenset({"f1"}))])
    assert s.critical_items_at(1, obs(1, {"e1", "f1"})) == {"e1"}
    assert s.next_critical_threshold(obs(0, {"e1", "f1"})) == 1
    assert s.critical_items_at(4, obs(4, {"f1"})) == set()
    assert s.next_critical_threshold(obs(4, {"f1"})) == 5


def test_scripted_choice_override():
    s = ScriptedStrategy({"b": 2, "c": 3}, [Rule(choose="b")])
    c = Cocircuit(frozenset({"b", "c"}))
    assert s.choose_from_monopsony(c, obs(2, {"b", "c"})) == "b"
    pinned = ScriptedStrategy({"b": 2, "c": 3}, [Rule(choose="b", monopsony=frozenset({"b", "x"}))])
    assert pinned.choose_from_monopsony(c, obs(2, {"b", "c"})) == "c"


def test_parse_rule_errors():
    with pytest.raises(SchemaError, match="rules\\[0\\].price"):
        parse_rule({"price": "2", "announce": ["a"]})
    with pytest.raises(SchemaError, match="bogus"):
        parse_rule({"bogus": 1, "announce": ["a"]})
    with pytest.raises(SchemaError):
        parse_rule({"price": 1})
    with pytest.raises(SchemaError, match="if_seen"):
        parse_rule({"announce": ["a"], "if_seen": [{"event": "BID"}]})


def test_load_script(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"rules": [{"price": 1, "announce": ["e1"]}]}))
    s = load_script(str(path), {"e1": 2, "f1": 4})
    assert s.critical_items_at(1, obs(1, {"e1", "f1"})) == {"e1"}
    with pytest.raises(SchemaError, match="not owned"):
        load_script({"rules": [{"announce": ["e2"]}]}, {"e1": 2})
    with pytest.raises(SchemaError):
        load_script({"valuation": {"e1": -1}, "rules": []}, {"e1": 2})


def test_instances_dir_scripts_match_fixtures(instances_dir):
    inst = fig4()
    pool = appendix_b_strategies()
    s1 = load_script(instances_dir / "sigma1_prime.json", inst.buyer_valuation("1"))
    s2 = load_script(instances_dir / "sigma2_double_prime.json", inst.buyer_valuation("2"))
    assert run_auction(inst, {"1": s1, "2": s2}) == run_auction(inst, {"1": pool["sigma1'"], "2": pool["sigma2''"]})
