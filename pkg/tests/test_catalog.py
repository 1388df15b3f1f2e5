import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from matroid_auction.catalog import (ExplicitMatroid, GraphicMatroid, Instance, ParallelCopyMatroid,
                                     PartitionMatroid, RandomParams, UniformMatroid, build_matroid,
                                     parallel_copy_reduction, random_instance, random_matroid)
from matroid_auction.core import enumerate_bases
from matroid_auction.errors import InputError, SchemaError
from matroid_auction.fixtures import fig1, fig4, triangle

from oracles import bases as oracle_bases, nx_forest


def test_graphic_fig1_rank_and_bases():
    m = fig1().matroid
    assert m.rank() == 4
    assert len(enumerate_bases(m)) == 11


def test_graphic_parallel_and_loop():
    m = GraphicMatroid(2, {"p": (1, 2), "q": (1, 2), "l": (2, 2)})
    assert m.is_independent({"p"}) and not m.is_independent({"p", "q"})
    assert not m.is_independent({"l"})


def test_graphic_vertex_range():
    with pytest.raises(SchemaError):
        GraphicMatroid(2, {"a": (0, 1)})
    with pytest.raises(SchemaError):
        build_matroid({"kind": "graphic", "vertices": 2, "edges": {"a": [1, 3]}})


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_graphic_matches_networkx(seed):
    m = random_matroid(RandomParams("graphic", vertices=5, max_edges=8), random.Random(seed))
    for r in range(len(m.ground_set) + 1):
        for s in itertools.combinations(m.ground_set, r):
            assert m.is_independent(s) == nx_forest(m, s)


def test_uniform_and_partition():
    u = UniformMatroid(4, 2)
    assert u.ground_set == ("e1", "e2", "e3", "e4") and u.name == "U(4,2)"
    assert len(enumerate_bases(u)) == 6
    p = PartitionMatroid([(["a", "b"], 1), (["c", "d", "e"], 2)])
    assert len(enumerate_bases(p)) == 2 * 3
    with pytest.raises(SchemaError):
        UniformMatroid(2, 3)
    with pytest.raises(SchemaError):
        PartitionMatroid([(["a"], 1), (["a"], 1)])


def test_explicit_matroid_validation():
    # b is a coloop, a and c are parallel: a genuine matroid
    ok = ExplicitMatroid("abc", [["a", "b"], ["b", "c"]])
    assert ok.is_independent({"b"}) and not ok.is_independent({"a", "c"})
    with pytest.raises(InputError):
        ExplicitMatroid("abcd", [["a", "b"], ["c", "d"]])
    with pytest.raises(InputError):
        ExplicitMatroid("abc", [["a", "b"], ["c"]])


def test_build_matroid_kinds_and_errors():
    assert build_matroid({"kind": "uniform", "n": 3, "k": 2}).rank() == 2
    assert build_matroid({"kind": "partition", "blocks": [{"items": ["a", "b"], "capacity": 1}]}).rank() == 1
    assert build_matroid({"kind": "explicit", "items": ["a", "b"], "bases": [["a"], ["b"]]}).rank() == 1
    with pytest.raises(SchemaError, match="matroid.kind"):
        build_matroid({"kind": "vector"})
    with pytest.raises(SchemaError, match="matroid.n"):
        build_matroid({"kind": "uniform", "k": 1})


def test_spec_round_trip():
    for m in (triangle(), UniformMatroid(4, 2), PartitionMatroid([(["a", "b"], 1), (["c"], 1)])):
        again = build_matroid(m.to_spec())
        assert set(enumerate_bases(again)) == set(enumerate_bases(m))


def test_instance_validation():
    m = triangle()
    with pytest.raises(InputError, match="disjoint"):
        Instance(m, {"1": {"a", "b"}, "2": {"b", "c"}}, {"a": 1, "b": 1, "c": 1})
    with pytest.raises(InputError, match="'q'"):
        Instance(m, {"1": {"a", "b", "c", "q"}}, {"a": 1, "b": 1, "c": 1})
    with pytest.raises(InputError):
        Instance(m, {"1": {"a", "b", "c"}}, {"a": 1, "b": -1, "c": 1})
    with pytest.raises(InputError):
        Instance(m, {"1": {"a", "b"}}, {"a": 1, "b": 1, "c": 1})


def test_parallel_copy_reduction_graphic():
    inst = parallel_copy_reduction(triangle(), {"1": {"a": 3, "b": 1}, "2": {"a": 2, "c": 4}})
    assert set(inst.items) == {"a#1", "a#2", "b", "c"}
    assert inst.origin["a#1"] == "a"
    assert not inst.matroid.is_independent({"a#1", "a#2"})
    assert inst.valuations["a#2"] == 2
    assert isinstance(inst.matroid, GraphicMatroid)


def test_parallel_copy_reduction_generic():
    u = UniformMatroid(3, 2, "abc")
    inst = parallel_copy_reduction(u, {"1": {"a": 1, "b": 1}, "2": {"b": 5, "c": 1}})
    assert isinstance(inst.matroid, ParallelCopyMatroid)
    # copies are parallel, everything else as before
    assert not inst.matroid.is_independent({"b#1", "b#2"})
    assert inst.matroid.is_independent({"a", "b#2"})
    assert len(oracle_bases(inst.matroid)) == 5
    with pytest.raises(InputError):
        parallel_copy_reduction(u, {"1": {"a": 1, "b": 1}})


def test_random_instance_deterministic():
    p = RandomParams("partition", buyers=3, value_bound=9, min_value=0)
    a, b = random_instance(p, 11), random_instance(p, 11)
    assert a.matroid.to_spec() == b.matroid.to_spec()
    assert a.interest == b.interest and a.valuations == b.valuations
    assert random_instance({"family": "uniform"}, 3).items


def test_fig4_bases():
    assert len(enumerate_bases(fig4().matroid)) == 4
