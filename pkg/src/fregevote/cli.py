"""Command line interface.

Exit codes: 0 success, 1 invalid input, 2 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import kernels
from .apportionment import METHOD_TITLES, METHODS, ApportionmentProblem, compare_all, get_method
from .axioms import AXIOMS, regenerate_axiom_table
from .bias import BiasConfig, run_bias_experiment
from .core import InvariantError, ProfileError
from .io import parse_problem, parse_profile, render_trace
from .modified import audit_variable_quota, run_modified
from .original import cost_stabilization_time, run_original


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _problem(args) -> tuple[ApportionmentProblem, str | None]:
    if args.votes is not None:
        if args.seats is None:
            raise ValueError("--votes needs --seats")
        return ApportionmentProblem.from_votes(args.votes, args.seats), None
    if args.problem is None:
        raise ValueError("give a problem file or --votes/--seats")
    problem, method = parse_problem(_read(args.problem))
    if args.seats is not None:
        problem = problem.with_house(args.seats)
    return problem, method


def cmd_simulate(args) -> str:
    profile = parse_profile(_read(args.profile))
    horizon = args.horizon or profile.horizon
    if horizon is None:
        raise ValueError("repeating profiles need --horizon")
    run = run_original if args.method == "original" else run_modified
    trace = run(profile, horizon)
    out = render_trace(trace, args.output)
    if args.audit and args.output == "text":
        report = audit_variable_quota(trace)
        out += f"wins: {dict(zip(trace.candidates, trace.wins))}\n"
        out += f"upper quota violations: {len(report.upper_violations)}\n"
        out += f"lower quota violations: {len(report.lower_violations)} (max deficit {report.max_deficit})\n"
    return out


def cmd_apportion(args) -> str:
    problem, method = _problem(args)
    method = args.method or method or "frege"
    seats = get_method(method)(problem)
    if args.output == "json":
        return json.dumps({"method": method, "seats": list(seats)}) + "\n"
    if args.output == "csv":
        return "method," + ",".join(f"p{i + 1}" for i in range(problem.m)) + "\n" + method + "," + ",".join(map(str, seats)) + "\n"
    return f"{METHOD_TITLES[method]}: {seats}\n"


def cmd_compare(args) -> str:
    problem, _ = _problem(args)
    table = compare_all(problem)
    if args.output == "json":
        return json.dumps({m: list(s) for m, s in table.items()}, indent=1) + "\n"
    if args.output == "csv":
        lines = ["method," + ",".join(f"p{i + 1}" for i in range(problem.m))]
        lines += [m + "," + ",".join(map(str, s)) for m, s in table.items()]
        return "\n".join(lines) + "\n"
    width = max(len(t) for t in METHOD_TITLES.values())
    return "".join(f"{METHOD_TITLES[m] + ':':<{width + 1}} {s}\n" for m, s in table.items())


def cmd_axiom_check(args) -> str:
    methods = tuple(METHODS) if args.method == "all" else (args.method,)
    for m in methods:
        get_method(m)
    table = regenerate_axiom_table(args.instances, args.seed, methods, args.backend)
    if args.output == "json":
        return table.to_json() + "\n"
    out = table.to_text()
    mism = table.mismatches()
    out += "matches the expected property table\n" if not mism else f"differs from the expected property table: {mism}\n"
    return out


def cmd_bias(args) -> str:
    methods = kernels.METHOD_ORDER if args.methods == "all" else tuple(m.strip() for m in args.methods.split(","))
    config = BiasConfig(args.parties, args.max_votes, args.seats, args.samples, args.seed, methods)
    report = run_bias_experiment(config, backend=args.backend, threads=args.threads)
    return report.to_json() + "\n" if args.output == "json" else report.to_text()


def cmd_stabilize(args) -> str:
    t0 = cost_stabilization_time(args.n, args.m)
    if args.output == "json":
        return json.dumps({"n": args.n, "m": args.m, "t0": t0}) + "\n"
    return f"{t0}\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "csv", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="RNG seed for randomized commands")

    parser = argparse.ArgumentParser(prog="fregevote", description="Frege's temporal voting and apportionment methods")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="run a temporal election")
    p.add_argument("profile", help="profile file (JSON or CSV), '-' for stdin")
    p.add_argument("--method", choices=("original", "modified"), default="modified")
    p.add_argument("--horizon", type=int)
    p.add_argument("--audit", action="store_true", help="append a variable-quota audit (text output)")
    p.set_defaults(func=cmd_simulate)

    for name, func, hlp in (("apportion", cmd_apportion, "apportion seats with one method"),
                            ("compare", cmd_compare, "apportion seats with every method")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("problem", nargs="?", help="problem JSON file, '-' for stdin")
        p.add_argument("--votes", type=_int_list)
        p.add_argument("--seats", type=int)
        if name == "apportion":
            p.add_argument("--method", choices=tuple(METHODS))
        p.set_defaults(func=func)

    p = sub.add_parser("axiom-check", parents=[common], help="regenerate the axiom property table")
    p.add_argument("--method", default="all")
    p.add_argument("--instances", type=int, default=10_000)
    p.add_argument("--backend", choices=("numba", "numpy"))
    p.set_defaults(func=cmd_axiom_check)

    p = sub.add_parser("bias", parents=[common], help="small-versus-large party bias experiment")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--parties", type=int, default=5)
    p.add_argument("--max-votes", type=int, default=1000)
    p.add_argument("--seats", type=int, default=100)
    p.add_argument("--methods", default="all")
    p.add_argument("--backend", choices=("numba", "numpy"))
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("stabilize", parents=[common], help="round from which the original cost of winning is constant")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_stabilize)
    return parser


def main(argv: list[str] | None = None) -> int:
    warnings.filterwarnings("ignore", message=".*TBB threading layer.*")
    args = build_parser().parse_args(argv)
    try:
        sys.stdout.write(args.func(args))
    except InvariantError as e:
        print(f"internal invariant breach: {e}", file=sys.stderr)
        return 2
    except (ProfileError, ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
