"""Ascending matroid auction with Vickrey prices, and brute-force matroid oracles."""

from .catalog import (ExplicitMatroid, GraphicMatroid, Instance, ParallelCopyMatroid, PartitionMatroid,
                      RandomParams, UniformMatroid, build_matroid, parallel_copy_reduction, random_instance,
                      random_matroid)
from .core import (Cocircuit, Matroid, MinorView, enumerate_bases, enumerate_circuits, enumerate_cocircuits,
                   enumerate_independent, verify_axioms)
from .engine import LONG, UNIT, Outcome, detect_monopsony, run_auction, validate_trace
from .errors import (AuctionLibError, InputError, PreconditionError, ProtocolError, ResourceGuardError,
                     SchemaError, TraceParseError)
from .greedy import VcgResult, max_weight_base, sealed_bid_vcg
from .lab import appendix_b_scenarios, consistency_check, ex_post_equilibrium_check, proxy_auction
from .props import run_property_suite
from .serialization import emit_instance, emit_trace, parse_instance, parse_trace
from .strategies import load_script, reported_strategy, truthful_strategy

__all__ = [
    "ExplicitMatroid", "GraphicMatroid", "Instance", "ParallelCopyMatroid", "PartitionMatroid", "RandomParams",
    "UniformMatroid", "build_matroid", "parallel_copy_reduction", "random_instance", "random_matroid",
    "Cocircuit", "Matroid", "MinorView", "enumerate_bases", "enumerate_circuits", "enumerate_cocircuits",
    "enumerate_independent", "verify_axioms", "LONG", "UNIT", "Outcome", "detect_monopsony", "run_auction",
    "validate_trace", "AuctionLibError", "InputError", "PreconditionError", "ProtocolError",
    "ResourceGuardError", "SchemaError", "TraceParseError", "VcgResult", "max_weight_base", "sealed_bid_vcg",
    "appendix_b_scenarios", "consistency_check", "ex_post_equilibrium_check", "proxy_auction",
    "run_property_suite", "emit_instance", "emit_trace", "parse_instance", "parse_trace", "load_script",
    "reported_strategy", "truthful_strategy",
]
