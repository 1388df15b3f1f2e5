"""Brute-force checks of the cocircuit lemmas and exchange properties behind the auction.

Every check enumerates bases, circuits or cocircuits exhaustively, so all of
them refuse ground sets above their guard. None of them calls the greedy
algorithm or the auction engine.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass, field

from .catalog import RandomParams, random_matroid
from .core import (Matroid, MinorView, enumerate_bases, enumerate_circuits, enumerate_cocircuits, fmt_set,
                   sort_items)
from .errors import InputError, ResourceGuardError

LEMMA_GUARD = 14
EXCHANGE_GUARD = 12
FAMILIES = ("graphic", "uniform", "partition")


@dataclass
class Verdict:
    check: str
    passed: bool = True
    cases: int = 0
    counterexamples: list = field(default_factory=list)

    def fail(self, **payload):
        self.passed = False
        self.counterexamples.append({k: sort_items(v) if isinstance(v, (set, frozenset)) else v
                                     for k, v in payload.items()})

    def __bool__(self):
        return self.passed


def _view(m: Matroid | MinorView, guard: int) -> MinorView:
    view = m if isinstance(m, MinorView) else m.view()
    if len(view.active) > guard:
        raise ResourceGuardError(f"{len(view.active)} items exceed the guard of {guard}")
    return view


def _cocircuit_sets(view: MinorView) -> list[frozenset]:
    return [c.items for c in enumerate_cocircuits(view)]


def check_cocircuits_after_deletion(m: Matroid | MinorView, e: str) -> Verdict:
    """Each cocircuit minus ``e`` is a (possibly empty) union of cocircuits of the deletion."""
    view = _view(m, LEMMA_GUARD)
    verdict = Verdict("cocircuits_after_deletion")
    after = _cocircuit_sets(view.minor(delete=[e]))
    for c in _cocircuit_sets(view):
        verdict.cases += 1
        rest = c - {e}
        for x in sort_items(rest):
            if not any(x in d and d <= rest for d in after):
                verdict.fail(cocircuit=c, element=e, uncovered=x)
                break
    return verdict


def check_cocircuits_before_deletion(m: Matroid | MinorView, e: str) -> Verdict:
    """For each cocircuit C of the deletion, exactly one of C, C + e is a cocircuit."""
    view = _view(m, LEMMA_GUARD)
    verdict = Verdict("cocircuits_before_deletion")
    before = set(_cocircuit_sets(view))
    for c in _cocircuit_sets(view.minor(delete=[e])):
        verdict.cases += 1
        hits = (c in before) + ((c | {e}) in before)
        if hits != 1:
            verdict.fail(cocircuit=c, element=e, matches=hits)
    return verdict


def _best_weight(bases: list[frozenset], w: Mapping[str, int], containing: frozenset = frozenset()):
    weights = [sum(w[x] for x in b) for b in bases if containing <= b]
    return max(weights) if weights else None


def check_dawson_augmentation(m: Matroid | MinorView, w: Mapping[str, int], independent) -> Verdict:
    """Adding a heaviest element of any cocircuit of ``M / I`` keeps ``I`` extendable to an optimum."""
    view = _view(m, EXCHANGE_GUARD)
    if view.deleted or view.contracted:
        view = view.as_matroid().view()
    I = frozenset(independent)
    bases = enumerate_bases(view)
    best = _best_weight(bases, w)
    if not view.is_independent(I) or _best_weight(bases, w, I) != best:
        raise InputError(f"{fmt_set(I)} does not extend to a max-weight base")
    verdict = Verdict("dawson_augmentation")
    contracted = MinorView(view.base, view.deleted, view.contracted | I)
    for c in _cocircuit_sets(contracted):
        top = max(w[x] for x in c)
        for x in sort_items(c):
            if w[x] != top:
                continue
            verdict.cases += 1
            grown = I | {x}
            if not view.is_independent(grown):
                verdict.fail(independent=I, cocircuit=c, element=x, reason="dependent")
            elif _best_weight(bases, w, grown) != best:
                verdict.fail(independent=I, cocircuit=c, element=x, reason="not extendable")
    return verdict


def check_cocircuit_exchange(m: Matroid | MinorView) -> Verdict:
    view = _view(m, EXCHANGE_GUARD)
    verdict = Verdict("cocircuit_exchange")
    cocircuits = _cocircuit_sets(view)
    for i, c1 in enumerate(cocircuits):
        for c2 in cocircuits[i + 1:]:
            for e in sort_items(c1 & c2):
                verdict.cases += 1
                union = (c1 | c2) - {e}
                if not any(c3 <= union for c3 in cocircuits):
                    verdict.fail(first=c1, second=c2, element=e)
    return verdict


def check_strong_base_exchange(m: Matroid | MinorView) -> Verdict:
    view = _view(m, EXCHANGE_GUARD)
    verdict = Verdict("strong_base_exchange")
    bases = enumerate_bases(view)
    family = set(bases)
    for b_hat in bases:
        for b in bases:
            for e in sort_items(b - b_hat):
                verdict.cases += 1
                if not any((b_hat - {f}) | {e} in family and (b - {e}) | {f} in family for f in b_hat - b):
                    verdict.fail(first=b_hat, second=b, element=e)
    return verdict


def _rank_table(view: MinorView) -> tuple[dict, list]:
    items = view.active
    n = len(items)
    index = {e: i for i, e in enumerate(items)}
    rank = [0] * (1 << n)
    for s in range(1, 1 << n):
        if view._indep(frozenset(items[i] for i in range(n) if s >> i & 1)):
            rank[s] = bin(s).count("1")
        else:
            b, r = s, 0
            while b:
                low = b & -b
                r = max(r, rank[s ^ low])
                b ^= low
            rank[s] = r
    return index, rank


def check_circuit_contraction(m: Matroid | MinorView, e: str, rng: random.Random | None = None,
                              samples: int = 100) -> Verdict:
    """Circuits through ``e`` lose ``e`` under contraction, others become unions of circuits.

    Also spot-checks ``rank_{M/Z}(X) = rank(X | Z) - rank(Z)`` on random pairs
    against an exhaustive rank table.
    """
    view = _view(m, LEMMA_GUARD)
    if view.deleted or view.contracted:
        view = view.as_matroid().view()
    rng = rng or random.Random(0)
    verdict = Verdict("circuit_contraction")
    # contracting a loop is the same as deleting it, which the view handles
    contracted = MinorView(view.base, contracted=frozenset([e]))
    after = enumerate_circuits(contracted)
    after_set = set(after)
    for c in enumerate_circuits(view):
        verdict.cases += 1
        if e in c:
            if c != {e} and (c - {e}) not in after_set:
                verdict.fail(circuit=c, element=e, part="a")
        else:
            for x in sort_items(c):
                if not any(x in d and d <= c for d in after):
                    verdict.fail(circuit=c, element=e, part="b", uncovered=x)
                    break
    index, rank = _rank_table(view)
    items = list(view.active)

    def mask(s):
        return sum(1 << index[x] for x in s)

    for _ in range(samples):
        z = frozenset(x for x in items if rng.random() < 0.4)
        x_set = frozenset(x for x in items if x not in z and rng.random() < 0.5)
        verdict.cases += 1
        minor = MinorView(view.base, contracted=z)
        lhs = minor.rank(x_set)
        rhs = rank[mask(x_set | z)] - rank[mask(z)]
        if lhs != rhs:
            verdict.fail(contracted=z, subset=x_set, minor_rank=lhs, identity_rank=rhs, part="rank")
    return verdict


def corrupt_singleton(matroid: Matroid, item: str | None = None) -> Matroid:
    """Mutation hook: report one non-loop singleton as dependent while leaving every other answer intact."""
    if item is None:
        item = next((e for e in matroid.ground_set if matroid.is_independent([e])), None)
    bad = frozenset([item]) if item is not None else None

    def oracle(items: frozenset) -> bool:
        return items != bad and matroid._independent(items)

    return Matroid(matroid.ground_set, oracle, name=f"{matroid.name}!{item}")


@dataclass
class PropertyTrial:
    index: int
    family: str
    fingerprint: str
    element: str
    weights: dict
    independent: list
    verdicts: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SuiteConfig:
    families: tuple = FAMILIES
    trials: int = 200
    seed: int = 0
    max_items: int = 8
    weight_bound: int = 9
    mutate: Callable[[Matroid], Matroid] | None = None


CHECKS = ("cocircuits_after_deletion", "cocircuits_before_deletion", "dawson_augmentation",
          "cocircuit_exchange", "strong_base_exchange", "circuit_contraction")


@dataclass
class SuiteSummary:
    config: dict
    counts: dict
    counterexamples: list

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    def table(self) -> str:
        lines = [f"{'family':<10} {'check':<28} {'pass':>5} {'fail':>5}"]
        for family in self.counts:
            for check in CHECKS:
                row = self.counts[family][check]
                lines.append(f"{family:<10} {check:<28} {row['pass']:>5} {row['fail']:>5}")
        return "\n".join(lines)


def _fingerprint(matroid: Matroid) -> str:
    bases = sorted(",".join(sort_items(b)) for b in enumerate_bases(matroid))
    digest = hashlib.sha1(("|".join(matroid.ground_set) + "#" + ";".join(bases)).encode()).hexdigest()
    return f"{matroid.kind}:{len(matroid.ground_set)}:{digest[:12]}"


def draw_trial(family: str, index: int, config: SuiteConfig) -> tuple[Matroid, PropertyTrial, random.Random]:
    rng = random.Random(f"{config.seed}:{family}:{index}")
    vertices = rng.randint(2, 5)
    params = RandomParams(family=family, vertices=vertices, max_edges=config.max_items, max_items=config.max_items)
    matroid = random_matroid(params, rng)
    if config.mutate is not None:
        matroid = config.mutate(matroid)
    ground = matroid.ground_set
    element = rng.choice(ground)
    weights = {e: rng.randint(0, config.weight_bound) for e in ground}
    bases = enumerate_bases(matroid)
    best = _best_weight(bases, weights)
    optimal = [b for b in bases if sum(weights[e] for e in b) == best]
    chosen = sort_items(rng.choice(optimal))
    independent = [e for e in chosen if rng.random() < 0.5]
    trial = PropertyTrial(index, family, _fingerprint(matroid), element, weights, independent)
    return matroid, trial, rng


def run_trial(matroid: Matroid, trial: PropertyTrial, rng: random.Random) -> PropertyTrial:
    runs = {
        "cocircuits_after_deletion": lambda: check_cocircuits_after_deletion(matroid, trial.element),
        "cocircuits_before_deletion": lambda: check_cocircuits_before_deletion(matroid, trial.element),
        "dawson_augmentation": lambda: check_dawson_augmentation(matroid, trial.weights, trial.independent),
        "cocircuit_exchange": lambda: check_cocircuit_exchange(matroid),
        "strong_base_exchange": lambda: check_strong_base_exchange(matroid),
        "circuit_contraction": lambda: check_circuit_contraction(matroid, trial.element, rng),
    }
    for name, run in runs.items():
        try:
            verdict = run()
        except (InputError, ResourceGuardError) as exc:
            verdict = Verdict(name)
            verdict.fail(error=str(exc))
        trial.verdicts[name] = verdict.passed
        if not verdict.passed:
            trial.counterexamples[name] = verdict.counterexamples[:3]
    return trial


def run_property_suite(config: SuiteConfig | None = None, **overrides) -> SuiteSummary:
    """Draw ``trials`` random matroids per family and run every check on each; deterministic in the config."""
    config = config or SuiteConfig()
    if overrides:
        config = SuiteConfig(**{**asdict_config(config), **overrides})
    for family in config.families:
        if family not in FAMILIES:
            raise InputError(f"unknown family {family!r}")
    counts = {}
    found = []
    for family in config.families:
        counts[family] = {name: {"pass": 0, "fail": 0} for name in CHECKS}
        for index in range(config.trials):
            matroid, trial, rng = draw_trial(family, index, config)
            run_trial(matroid, trial, rng)
            for name, ok in trial.verdicts.items():
                counts[family][name]["pass" if ok else "fail"] += 1
            if trial.counterexamples:
                found.append(asdict(trial))
    described = asdict_config(config)
    described["mutate"] = getattr(config.mutate, "__name__", None) if config.mutate else None
    described["families"] = list(config.families)
    return SuiteSummary(described, counts, found)


def asdict_config(config: SuiteConfig) -> dict:
    return {f: getattr(config, f) for f in SuiteConfig.__dataclass_fields__}


__all__ = [
    "Verdict", "PropertyTrial", "SuiteConfig", "SuiteSummary", "check_cocircuits_after_deletion",
    "check_cocircuits_before_deletion", "check_dawson_augmentation", "check_cocircuit_exchange",
    "check_strong_base_exchange", "check_circuit_contraction", "corrupt_singleton", "run_property_suite",
]
