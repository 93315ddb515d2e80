"""Command line: prove, check, countermodel, generate, bench.

Exit codes: 0 provable / check passed / countermodel found, 1 unprovable /
check failed / no countermodel, 2 resource budget exceeded, 3 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from dataclasses import dataclass
from typing import Sequence

from .calculus import DerivationError, LogicId, SignatureError, check_derivation
from .export import (
    SchemaError, derivation_from_json, derivation_to_json, derivation_to_latex, derivation_to_text,
)
from .generate import VARS, enumerate_formulas, modal_op, random_formula
from .prover import (
    Provable, ResourceExceeded, SearchLimits, Strategy, StrategyError, Unprovable, prove,
    random_provable, resolve_strategy,
)
from .semantics import countermodel, model_to_json
from .syntax import ParseError, Sequent, parse_formula, parse_sequent, print_formula, print_sequent

EXIT_OK, EXIT_NO, EXIT_BUDGET, EXIT_ERROR = 0, 1, 2, 3

LOGICS = [lg.value for lg in LogicId]
STRATEGIES = ["naive", "marked", "marked-descendants", "dp", "auto"]


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    logic: LogicId
    strategy: Strategy = Strategy.AUTO
    limits: SearchLimits = SearchLimits()
    output: str = "text"
    seed: int | None = None
    threads: int = 1
    timing: bool = True

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        try:
            limits = SearchLimits(args.max_nodes, args.max_depth, args.timeout_ms)
        except ValueError as e:
            raise UsageError(str(e)) from None
        return cls(LogicId.parse(args.logic), Strategy.parse(args.strategy), limits,
                   args.output, args.seed, args.threads, not args.no_timing)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, search: bool = True) -> None:
    p.add_argument("--logic", required=True, choices=LOGICS, type=str.lower)
    if search:
        p.add_argument("--strategy", default="auto", choices=STRATEGIES)
        p.add_argument("--max-nodes", type=int, default=10**6)
        p.add_argument("--max-depth", type=int, default=200)
        p.add_argument("--timeout-ms", type=int, default=None)
        p.add_argument("--threads", type=int, default=1,
                       help="accepted for compatibility; search is single-threaded")
        p.add_argument("--no-timing", action="store_true",
                       help="leave wall-clock figures out of the output")
    p.add_argument("--output", default="text", choices=["text", "json", "latex"])
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="condcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prove", help="decide a sequent")
    _common(p)
    p.add_argument("sequent", help="comma-separated formulas")
    p.add_argument("--proof", metavar="FILE", help="also write the derivation (JSON) here")

    p = sub.add_parser("check", help="verify a derivation file")
    _common(p, search=False)
    p.add_argument("--proof", metavar="FILE", dest="proof_opt")
    p.add_argument("proof", nargs="?", metavar="FILE")
    p.add_argument("--restricted", action="store_true",
                   help="reject MP rules applied to a marked formula")

    p = sub.add_parser("countermodel", help="search small models falsifying a formula")
    _common(p, search=False)
    p.add_argument("formula")
    p.add_argument("--max-worlds", type=int, default=3)

    p = sub.add_parser("generate", help="print random provable sequents")
    _common(p, search=False)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--size-budget", type=int, default=20)

    p = sub.add_parser("bench", help="CSV of verdicts and search statistics")
    _common(p)
    p.add_argument("--suite", choices=["corpus", "random"], default="random")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--size-budget", type=int, default=9)
    return parser


# --------------------------------------------------------------------------
# commands

def _stats_dict(v, timing: bool) -> dict:
    d = v.stats.as_dict()
    if not timing:
        d.pop("elapsed_us")
    return d


def cmd_prove(args, cfg: RunConfig, out, err) -> int:
    s = parse_sequent(args.sequent)
    strat = resolve_strategy(cfg.strategy, cfg.logic)
    v = prove(s, cfg.logic, strat, cfg.limits)
    code = {Provable: EXIT_OK, Unprovable: EXIT_NO, ResourceExceeded: EXIT_BUDGET}[type(v)]
    stats = _stats_dict(v, cfg.timing)
    if cfg.output == "json":
        doc = {"sequent": print_sequent(s), "logic": cfg.logic.value, "strategy": strat.value,
               "verdict": v.status, "stats": stats}
        if isinstance(v, ResourceExceeded):
            doc["reason"] = v.reason
        if isinstance(v, Provable):
            doc["derivation"] = derivation_to_json(v.witness)
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        line = v.status if not isinstance(v, ResourceExceeded) else f"{v.status} ({v.reason})"
        if cfg.output == "latex":
            out.write(f"% {line}\n% " + json.dumps(stats, sort_keys=True) + "\n")
            if isinstance(v, Provable):
                out.write(derivation_to_latex(v.witness))
        else:
            out.write(line + "\n")
            out.write(" ".join(f"{k}={val}" for k, val in stats.items()
                               if k != "modal_applications") + "\n")
            apps = stats["modal_applications"]
            if apps:
                out.write("modal: " + " ".join(f"{k}={n}" for k, n in apps.items()) + "\n")
            if isinstance(v, Provable):
                out.write(derivation_to_text(v.witness) + "\n")
    if args.proof and isinstance(v, Provable):
        with open(args.proof, "w") as fh:
            json.dump(derivation_to_json(v.witness), fh)
    return code


def cmd_check(args, logic: LogicId, out, err) -> int:
    path = args.proof_opt or args.proof
    if not path:
        raise UsageError("check needs a derivation file")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read derivation: {e}") from None
    if isinstance(doc, dict) and "derivation" in doc and "rule" not in doc:
        doc = doc["derivation"]
    d = derivation_from_json(doc)
    try:
        check_derivation(d, logic, restricted=args.restricted)
    except DerivationError as e:
        report = {"valid": False, "path": list(e.path), "reason": e.reason}
        if args.output == "json":
            out.write(json.dumps(report, sort_keys=True) + "\n")
        else:
            out.write(f"invalid: {e}\n")
        return EXIT_NO
    if args.output == "json":
        out.write(json.dumps({"valid": True, "nodes": d.count()}, sort_keys=True) + "\n")
    else:
        out.write(f"valid derivation of {d.conclusion} in {logic} ({d.count()} nodes)\n")
    return EXIT_OK


def cmd_countermodel(args, logic: LogicId, out, err) -> int:
    if args.max_worlds < 1:
        raise UsageError("--max-worlds must be positive")
    f = parse_formula(args.formula)
    found = countermodel(f, logic, args.max_worlds)
    if found is None:
        out.write(f"no countermodel up to {args.max_worlds} worlds (not a proof of validity)\n")
        return EXIT_NO
    model, world = found
    out.write(json.dumps(model_to_json(model, world), sort_keys=True) + "\n")
    return EXIT_OK


def cmd_generate(args, logic: LogicId, out, err) -> int:
    if args.count < 0 or args.size_budget < 1:
        raise UsageError("--count must be >= 0 and --size-budget >= 1")
    seed = 0 if args.seed is None else args.seed
    for i in range(args.count):
        s, d = random_provable(seed + i, logic, args.size_budget)
        if args.output == "json":
            out.write(json.dumps({"sequent": print_sequent(s),
                                  "derivation": derivation_to_json(d)}, sort_keys=True) + "\n")
        elif args.output == "latex":
            out.write(derivation_to_latex(d))
        else:
            out.write(print_sequent(s) + "\n")
    return EXIT_OK


def bench_suite(logic: LogicId, suite: str, count: int, size_budget: int, seed: int):
    op = modal_op(logic)
    if suite == "corpus":
        it = enumerate_formulas(size_budget, VARS, op)
        return [f for _, f in zip(range(count), it)]
    rng = random.Random(seed)
    return [random_formula(rng, rng.randint(1, size_budget), VARS, op) for _ in range(count)]


def cmd_bench(args, cfg: RunConfig, out, err) -> int:
    if args.count < 0 or args.size_budget < 1:
        raise UsageError("--count must be >= 0 and --size-budget >= 1")
    strat = resolve_strategy(cfg.strategy, cfg.logic)
    formulas = bench_suite(cfg.logic, args.suite, args.count, args.size_budget,
                           0 if cfg.seed is None else cfg.seed)
    w = csv.writer(out, lineterminator="\n")
    header = ["formula", "logic", "strategy", "verdict", "nodes", "depth"]
    if cfg.timing:
        header.append("microseconds")
    w.writerow(header)
    for f in formulas:
        v = prove(Sequent.of(f), cfg.logic, strat, cfg.limits)
        row = [print_formula(f), cfg.logic.value, strat.value, v.status, v.stats.nodes,
               v.stats.max_depth]
        if cfg.timing:
            row.append(v.stats.elapsed_us)
        w.writerow(row)
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command in ("prove", "bench"):
            cfg = RunConfig.from_args(args)
            return (cmd_prove if args.command == "prove" else cmd_bench)(args, cfg, out, err)
        logic = LogicId.parse(args.logic)
        handler = {"check": cmd_check, "countermodel": cmd_countermodel,
                   "generate": cmd_generate}[args.command]
        return handler(args, logic, out, err)
    except (UsageError, ParseError, SignatureError, StrategyError, SchemaError) as e:
        err.write(f"error: {e}\n")
        return EXIT_ERROR
    except RecursionError:
        err.write("error: input nested too deeply\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
