"""Command-line entry points.

Exit status: 0 success, 1 verification or property failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys

from .engine import LONG, UNIT, run_auction, validate_trace
from .errors import AuctionLibError, InputError, ProtocolError, ResourceGuardError, TraceParseError
from .greedy import max_weight_base
from .lab import appendix_b_scenarios, consistency_check, proxy_auction, vcg_benchmark
from .props import FAMILIES, SuiteConfig, run_property_suite
from .serialization import (dumps, emit_trace, outcome_payload, parse_bids, parse_instance, read_trace,
                            vcg_payload)
from .strategies import load_script, truthful_strategy

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _tuple(values) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


def _strategies(instance, specs: list[str]) -> dict:
    chosen = {b: truthful_strategy(instance.buyer_valuation(b)) for b in instance.buyers}
    for spec in specs:
        buyer, sep, kind = spec.partition("=")
        if not sep:
            raise UsageError(f"--strategy expects BUYER=truthful or BUYER=script:PATH, got {spec!r}")
        if buyer not in instance.interest:
            raise UsageError(f"--strategy names unknown buyer {buyer!r}")
        if kind == "truthful":
            continue
        if not kind.startswith("script:"):
            raise UsageError(f"unknown strategy {kind!r}")
        chosen[buyer] = load_script(kind[len("script:"):], instance.buyer_valuation(buyer))
    return chosen


def _print_outcome(payload: dict, out):
    print("base: " + ", ".join(payload["base"]), file=out)
    print("item prices: " + " ".join(f"{e}={p}" for e, p in payload["item_prices"].items()), file=out)
    print("payments: " + " ".join(f"{b}={p}" for b, p in payload["buyer_payments"].items()), file=out)
    print(f"welfare: {payload['welfare']}", file=out)


def cmd_run(args, out) -> int:
    instance = parse_instance(args.instance)
    strategies = _strategies(instance, args.strategy)
    outcome, trace = run_auction(instance, strategies, mode=LONG if args.long_step else UNIT, seed=args.seed)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(emit_trace(trace))
    payload = outcome_payload(outcome)
    if args.json:
        print(dumps(payload), file=out)
    else:
        _print_outcome(payload, out)
    return OK


def cmd_vcg(args, out) -> int:
    instance = parse_instance(args.instance)
    bids = parse_bids(args.bids, instance) if args.bids else None
    result = vcg_benchmark(instance, bids)
    payload = vcg_payload(result)
    if args.json:
        print(dumps(payload), file=out)
    else:
        print("base: " + ", ".join(payload["base"]), file=out)
        print(f"weight: {payload['weight']}", file=out)
        print("prices: " + " ".join(f"{b}={p}" for b, p in payload["buyer_prices"].items()), file=out)
    return OK


def cmd_verify(args, out) -> int:
    instance = parse_instance(args.instance)
    mode = LONG if args.long_step else UNIT
    outcome, vcg = proxy_auction(instance, instance.valuations, mode=mode)
    best = max_weight_base(instance.matroid, instance.valuations).weight
    payments = outcome.payments_tuple()
    prices = tuple(vcg.buyer_prices[b] for b in instance.buyers)
    failed = False
    if payments == prices:
        print(f"payments match VCG: {_tuple(payments)}", file=out)
    else:
        print(f"payments differ from VCG: auction {_tuple(payments)} vs VCG {_tuple(prices)}", file=out)
        failed = True
    if outcome.welfare == best:
        print(f"welfare matches greedy optimum: {best}", file=out)
    else:
        print(f"welfare {outcome.welfare} differs from greedy optimum {best}", file=out)
        failed = True
    _, trace = run_auction(instance, mode=mode)
    report = validate_trace(trace, instance)
    if report.ok:
        print(f"trace valid: {len(trace)} events", file=out)
    else:
        for v in report.violations:
            print(f"trace violation at event {v.index}: {v.message}", file=out)
        failed = True
    return FAILED if failed else OK


def cmd_props(args, out) -> int:
    families = tuple(args.family or FAMILIES)
    config = SuiteConfig(families=families, trials=args.trials, seed=args.seed, max_items=args.max_items)
    summary = run_property_suite(config)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(summary.to_json() + "\n")
    print(summary.table(), file=out)
    if not summary.ok:
        for trial in summary.counterexamples[:5]:
            for check, found in trial["counterexamples"].items():
                print(f"counterexample: {trial['family']} trial {trial['index']} {check}: {found[0]}", file=out)
        print(f"{len(summary.counterexamples)} trial(s) with counterexamples", file=out)
        return FAILED
    print("no counterexamples", file=out)
    return OK


def cmd_scenarios(args, out) -> int:
    report = appendix_b_scenarios(mode=LONG if args.long_step else UNIT)
    print(report.table(), file=out)
    print("* supplementary profile", file=out)
    for note in report.dominance():
        print(note, file=out)
    return OK


def cmd_audit(args, out) -> int:
    instance = parse_instance(args.instance)
    trace = read_trace(args.trace)
    report = validate_trace(trace, instance, truthful=args.truthful)
    failed = not report.ok
    for v in report.violations:
        print(f"violation at event {v.index}: {v.message}", file=out)
    for buyer in instance.buyers:
        result = consistency_check(trace, buyer, instance)
        if result:
            witness = " ".join(f"{e}={v}" for e, v in result.witness.items())
            print(f"buyer {buyer}: consistent (e.g. {witness})", file=out)
        else:
            upper, lower = result.conflict
            print(f"buyer {buyer}: inconsistent: {upper} vs {lower}", file=out)
            failed = True
    return FAILED if failed else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matroid-auction", description="Ascending matroid auction toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the ascending auction")
    p.add_argument("--instance", required=True)
    p.add_argument("--long-step", action="store_true")
    p.add_argument("--strategy", action="append", default=[], metavar="BUYER=truthful|script:PATH")
    p.add_argument("--trace", metavar="PATH")
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true", help="print the outcome as JSON")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("vcg", help="sealed-bid VCG prices")
    p.add_argument("--instance", required=True)
    p.add_argument("--bids", metavar="PATH")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_vcg)

    p = sub.add_parser("verify", help="compare the auction against VCG and the greedy optimum")
    p.add_argument("--instance", required=True)
    p.add_argument("--long-step", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("props", help="run the randomized matroid property suite")
    p.add_argument("--family", action="append", choices=FAMILIES)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-items", type=int, default=8)
    p.add_argument("--json", metavar="PATH", help="write the summary as JSON")
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("scenarios", help="replay fixed strategy scenarios")
    p.add_argument("name", choices=["appendix-b"])
    p.add_argument("--long-step", action="store_true")
    p.set_defaults(func=cmd_scenarios)

    p = sub.add_parser("audit", help="validate a trace file and check each buyer's signals for consistency")
    p.add_argument("--instance", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--truthful", action="store_true", help="also check value-based invariants")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if getattr(args, "max_items", 8) > 14 or getattr(args, "trials", 1) < 0:
        print("error: --max-items must be at most 14 and --trials nonnegative", file=sys.stderr)
        return USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (InputError, TraceParseError, ResourceGuardError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return FAILED
    except AuctionLibError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())

