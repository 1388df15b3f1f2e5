"""Small canonical instances used by the tests, the CLI and the docs."""

from __future__ import annotations

from .catalog import GraphicMatroid, Instance, UniformMatroid
from .strategies import Rule, ScriptedStrategy, TruthfulStrategy


def triangle() -> GraphicMatroid:
    """Graphic matroid of a triangle: a=(1,2), b=(2,3), c=(3,1)."""
    return GraphicMatroid(3, {"a": (1, 2), "b": (2, 3), "c": (3, 1)}, name="TRI")


def uniform(n: int, k: int) -> UniformMatroid:
    return UniformMatroid(n, k, [chr(ord("a") + i) for i in range(n)])


def fig1() -> Instance:
    """Five-vertex graph with four buyers; truthful prices are all 2."""
    m = GraphicMatroid(5, {
        "x": (1, 2),
        "y1": (2, 3), "y2": (2, 4),
        "z1": (3, 4), "z2": (5, 1),
        "w": (4, 5),
    }, name="FIG1")
    interest = {"1": {"x"}, "2": {"y1", "y2"}, "3": {"z1", "z2"}, "4": {"w"}}
    values = {"x": 2, "y1": 2, "y2": 3, "z1": 2, "z2": 4, "w": 5}
    return Instance(m, interest, values)


def fig4() -> Instance:
    """Path 1-2-3 with doubled edges; buyer 1 values (e1, f1) = (2, 4), buyer 2 (e2, f2) = (3, 3)."""
    m = GraphicMatroid(3, {"e1": (1, 2), "e2": (1, 2), "f1": (2, 3), "f2": (2, 3)}, name="FIG4")
    return Instance(m, {"1": {"e1", "f1"}, "2": {"e2", "f2"}}, {"e1": 2, "f1": 4, "e2": 3, "f2": 3})


def fig3() -> Instance:
    """Triangle with a doubled edge. Buyer 1 owns c=(1,2) worth 3 and b=(1,3) worth 2,
    buyer 2 owns a=(1,3) worth 2, buyer 3 owns d=(2,3) worth 4."""
    m = GraphicMatroid(3, {"a": (1, 3), "b": (1, 3), "c": (1, 2), "d": (2, 3)}, name="FIG3")
    return Instance(m, {"1": {"b", "c"}, "2": {"a"}, "3": {"d"}}, {"a": 2, "b": 2, "c": 3, "d": 4})


def fig3_inconsistent_buyer1() -> ScriptedStrategy:
    """Buyer 1 of :func:`fig3` answers its monopsony with the item it already called critical."""
    return ScriptedStrategy({"b": 2, "c": 3}, [Rule(choose="b")], name="fig3-inconsistent")


_B1_EARLY = {"event": "CRITICAL", "buyer": "1", "item": "e1", "price": 1}


def appendix_b_strategies() -> dict:
    """The strategies of the two-buyer non-dominance example on :func:`fig4`."""
    v1, v2 = {"e1": 2, "f1": 4}, {"e2": 3, "f2": 3}
    return {
        "sigma1": TruthfulStrategy(v1),
        "sigma1'": ScriptedStrategy(v1, [Rule(min_price=1, max_price=1, announce=frozenset({"e1"}))],
                                    name="sigma1'"),
        "sigma2": TruthfulStrategy(v2),
        "sigma2'": ScriptedStrategy(v2, [Rule(min_price=2, max_price=2, if_seen=(_B1_EARLY,),
                                              announce=frozenset({"f2"}))], name="sigma2'"),
        "sigma2''": ScriptedStrategy(v2, [Rule(min_price=0, max_price=3, if_seen=(_B1_EARLY,),
                                               withhold=frozenset({"f2"}))], name="sigma2''"),
    }
