"""Command line interface.

Exit codes: 0 success / in core, 1 blocked / price property failure,
2 invalid input, 3 search space refused.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import formats
from .core_verify import (
    DEFAULT_SEARCH_LIMIT,
    RULES,
    SearchSpaceTooLarge,
    cap_find_blocking,
    enumerate_core,
    find_blocking_coalition,
)
from .formats import FormatError, dumps
from .instance_gen import GenConfig, PREFERENCE_FREE_EXAMPLES, paper_example, random_cap_instance, random_network_instance
from .model import (
    CapInstance,
    InvalidInstanceError,
    NetworkInstance,
    is_feasible_allocation,
    is_feasible_network,
)
from .prices import personalized_prices, verify_cap_price_properties, verify_price_properties
from .ttc_cap import solve_cap
from .ttc_network import solve_network

EXIT_OK, EXIT_BLOCKED, EXIT_INVALID, EXIT_REFUSED = 0, 1, 2, 3


def _load(path: str) -> tuple[formats.Instance, dict]:
    return formats.parse_instance(formats.read_text(path), path)


def _solve(inst: formats.Instance):
    if isinstance(inst, NetworkInstance):
        return solve_network(inst)
    return solve_cap(inst)


def cmd_solve(args: argparse.Namespace) -> int:
    inst, _ = _load(args.input)
    outcome, trace = _solve(inst)
    formats.write_text(args.output, dumps(formats.outcome_to_dict(outcome, trace)))
    if args.trace:
        formats.write_text(args.trace, dumps(formats.trace_to_dict(trace)))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst, _ = _load(args.input)
    outcome = formats.parse_outcome(formats.read_text(args.candidate), inst, args.candidate)
    doc: dict = {"max_coalition": args.max_coalition}
    if isinstance(inst, NetworkInstance):
        if not is_feasible_network(inst, outcome):
            print(f"{args.candidate}: candidate exceeds a quota", file=sys.stderr)
            return EXIT_INVALID
        cert = find_blocking_coalition(inst, outcome, args.max_coalition, args.rule)
        doc["rule"] = args.rule
    else:
        if not is_feasible_allocation(inst, outcome):
            print(f"{args.candidate}: candidate is not exclusive with exact quotas", file=sys.stderr)
            return EXIT_INVALID
        cert = cap_find_blocking(inst, outcome, args.max_coalition)
    doc["in_core"] = cert is None
    if cert is not None:
        doc["certificate"] = formats.certificate_to_dict(cert)
    formats.write_text(args.output, dumps(doc))
    return EXIT_OK if cert is None else EXIT_BLOCKED


def cmd_enumerate_core(args: argparse.Namespace) -> int:
    inst, _ = _load(args.input)
    if not isinstance(inst, NetworkInstance):
        print(f"{args.input}: enumerate-core needs a network instance", file=sys.stderr)
        return EXIT_INVALID
    core = enumerate_core(inst, args.mode, args.rule, args.limit)
    doc = {
        "kind": "core",
        "mode": args.mode,
        "rule": args.rule,
        "count": len(core),
        "networks": [net.as_lists() for net in core],
    }
    formats.write_text(args.output, dumps(doc))
    return EXIT_OK


def cmd_prices(args: argparse.Namespace) -> int:
    inst, _ = _load(args.input)
    outcome, trace = _solve(inst)
    if isinstance(inst, NetworkInstance):
        table = personalized_prices(trace, inst.n)
        report = verify_price_properties(inst, outcome, table)
    else:
        table = personalized_prices(trace, inst.n_items)
        report = verify_cap_price_properties(inst, outcome, table)
    doc = formats.outcome_to_dict(outcome, trace)
    doc["kind"] = "prices"
    doc["prices"] = formats.prices_to_dict(table, report)
    if isinstance(inst, CapInstance):
        doc["beyond_paper"] = True
    formats.write_text(args.output, dumps(doc))
    return EXIT_OK if report.passed else EXIT_BLOCKED


def cmd_gen(args: argparse.Namespace) -> int:
    cfg = GenConfig(args.kind, args.n, args.max_quota, args.max_endowment, args.seed)
    try:
        inst = random_network_instance(cfg) if args.kind == "network" else random_cap_instance(cfg)
    except ValueError as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return EXIT_INVALID
    formats.write_text(args.output, dumps(formats.instance_to_dict(inst)))
    return EXIT_OK


def cmd_examples(args: argparse.Namespace) -> int:
    doc = formats.instance_to_dict(paper_example(args.id))
    if args.id in PREFERENCE_FREE_EXAMPLES:
        doc["preferences_arbitrary"] = True
    formats.write_text(args.output, dumps(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quotacore",
        description="Core-stable outcomes for directed network problems with quotas "
        "and exclusive combinatorial allocation problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p: argparse.ArgumentParser) -> None:
        p.add_argument("-o", "--output", help="output file (default: stdout)")

    p = sub.add_parser("solve", help="run the staged trading procedure")
    p.add_argument("input", help="instance file, or - for stdin")
    add_output(p)
    p.add_argument("--trace", metavar="PATH", help="also write the stage trace here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="search for a blocking coalition")
    p.add_argument("input", help="instance file")
    p.add_argument("candidate", help="result file with assignments, or - for stdin")
    p.add_argument("--max-coalition", type=int, default=None, metavar="K")
    p.add_argument("--rule", choices=RULES, default="quota", help="blocking rule for network problems")
    add_output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate-core", help="list every unblocked feasible network")
    p.add_argument("input")
    p.add_argument("--mode", choices=("balanced", "all"), default="balanced")
    p.add_argument("--rule", choices=RULES, default="quota")
    p.add_argument("--limit", type=int, default=DEFAULT_SEARCH_LIMIT, help="largest search space to attempt")
    add_output(p)
    p.set_defaults(func=cmd_enumerate_core)

    p = sub.add_parser("prices", help="solve, price the trace and check the price properties")
    p.add_argument("input")
    add_output(p)
    p.set_defaults(func=cmd_prices)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--kind", choices=("network", "cap"), default="network")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-quota", type=int, default=1)
    p.add_argument("--max-endowment", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    add_output(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("examples", help="write one of the published quota examples")
    p.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    add_output(p)
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, InvalidInstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SearchSpaceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
