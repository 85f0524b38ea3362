"""Command-line entry point.

Subcommands::

    gossipclock optimize      --gen symstar:n=5,k=2 --clock uniform
    gossipclock simulate      --gen cycle:n=4 --optimal --trials 200 --ticks 2000 --seed 7
    gossipclock verify-tables --out report.json
    gossipclock quantum-check --gen path:n=3 --d 2 --clock nonuniform
    gossipclock export        --gen ccs:n=3,k=2 --what result --format csv

Exit codes: 0 success, 2 bad usage or refused input, 3 solver failure,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from gossipclock.analytic import OptimizationResult
from gossipclock.core import ProbabilityAssignment, build_operator, spectrum, validate_assignment
from gossipclock.errors import GossipError, SizeGuardError, SolverFailureError
from gossipclock.optimize import DEFAULT_ORACLE_BUDGET, optimize
from gossipclock.quantum import verify_spectral_collapse
from gossipclock.simulator import SimConfig, estimate_averaging_time, estimate_decay_rate, run
from gossipclock.tables import verify_tables
from gossipclock.topology import Topology, generate

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_USAGE", "EXIT_SOLVER", "EXIT_VERIFY"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4


class _UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _load_topology(args: argparse.Namespace) -> Topology:
    if args.gen is not None:
        return generate(args.gen)
    try:
        text = Path(args.topology).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read topology file: {exc}") from None
    try:
        return Topology.from_json(text)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"topology file is not valid JSON: {exc}") from None


def _load_assignment(path: str, topology: Topology) -> ProbabilityAssignment:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read assignment file: {exc}") from None
    if "assignment" in data:  # an optimize result file
        data = data["assignment"]
    assignment = ProbabilityAssignment.from_dict(data)
    validate_assignment(topology, assignment)
    return assignment


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _result_csv(result: OptimizationResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "i", "j", "value"])
    writer.writerow(["lambda2", "", "", repr(float(result.lambda2))])
    for i, p in enumerate(result.assignment.clock):
        writer.writerow(["clock", i, "", repr(float(p))])
    trans = result.assignment.transition
    for i, j in result.topology.edges:
        writer.writerow(["transition", i, j, repr(float(trans[i, j]))])
        writer.writerow(["transition", j, i, repr(float(trans[j, i]))])
    return buf.getvalue()


def _table_csv(report_dict: dict[str, Any]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["table", "key", "expected", "computed", "passed", "documented"])
    for cell in report_dict["cells"]:
        writer.writerow([cell["table"], cell["key"], cell["expected"], cell["computed"], cell["passed"], cell["documented"] or ""])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_optimize(args: argparse.Namespace) -> int:
    topology = _load_topology(args)
    result = optimize(topology, args.clock, oracle_budget=args.budget)
    _emit(_result_csv(result) if args.format == "csv" else result.to_json(), args.out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    topology = _load_topology(args)
    if args.trials < 100 or args.ticks < 100:
        raise _UsageError("--trials and --ticks must both be at least 100")
    if args.assignment is not None:
        assignment = _load_assignment(args.assignment, topology)
    elif args.optimal:
        assignment = optimize(topology, args.clock).assignment
    else:
        assignment = ProbabilityAssignment.uniform(topology)
    lam = spectrum(build_operator(topology, assignment)).lambda2
    stats: dict[str, Any] = {
        "lambda2": lam,
        "seed": args.seed,
        "trials": args.trials,
        "ticks": args.ticks,
    }
    try:
        rate = estimate_decay_rate(topology, assignment, args.trials, args.ticks, args.seed)
    except GossipError as exc:
        if isinstance(exc, SolverFailureError):
            raise
        # Graphs such as a single edge reach exact consensus at once.
        stats["decay_rate"] = None
        stats["decay_rate_note"] = str(exc)
    else:
        stats["decay_rate"] = rate
        stats["spectral_consistent"] = bool(0.9 * lam**2 <= rate < 1.0)
    if args.epsilon is not None:
        stats["epsilon"] = args.epsilon
        stats["T_ave"] = estimate_averaging_time(topology, assignment, args.epsilon, args.trials, args.seed)
    if args.trace is not None:
        n = topology.n_vertices
        start = [1.0 if v == 0 else 0.0 for v in range(n)]
        trace = run(topology, assignment, SimConfig(args.seed, args.ticks, start))
        trace.to_csv(args.trace)
    _emit(_dump(stats), args.out)
    return EXIT_OK


def cmd_verify_tables(args: argparse.Namespace) -> int:
    report = verify_tables()
    data = report.to_dict()
    _emit(_table_csv(data) if args.format == "csv" else _dump(data), args.out)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_quantum_check(args: argparse.Namespace) -> int:
    topology = _load_topology(args)
    if args.assignment is not None:
        assignment = _load_assignment(args.assignment, topology)
    else:
        assignment = optimize(topology, args.clock).assignment
    report = verify_spectral_collapse(topology, assignment, args.d)
    data = dict(report.to_dict(), d=args.d, topology=topology.descriptor())
    _emit(_dump(data), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_export(args: argparse.Namespace) -> int:
    topology = _load_topology(args)
    if args.what == "topology":
        if args.format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["u", "v"])
            writer.writerows(topology.edges)
            text = buf.getvalue()
        else:
            text = _dump(topology.descriptor())
    else:
        result = optimize(topology, args.clock)
        text = _result_csv(result) if args.format == "csv" else result.to_json()
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", metavar="DESCRIPTOR", help="generator descriptor such as ccs:n=3,k=2")
    src.add_argument("--topology", metavar="FILE", help="topology JSON file")


def _add_clock(p: argparse.ArgumentParser) -> None:
    p.add_argument("--clock", choices=["uniform", "nonuniform"], default="uniform", help="clock distribution mode")


def _add_output(p: argparse.ArgumentParser, formats: bool = True) -> None:
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    if formats:
        p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gossipclock", description="Randomized gossip with non-uniform clocks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="optimal probabilities for a topology")
    _add_source(p)
    _add_clock(p)
    _add_output(p)
    p.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET, help="oracle evaluation budget")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="Monte Carlo decay rate and averaging time")
    _add_source(p)
    _add_clock(p)
    _add_output(p, formats=False)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--optimal", action="store_true", help="simulate the optimal assignment")
    group.add_argument("--assignment", metavar="FILE", help="assignment or optimize-result JSON")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--ticks", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, help="also estimate the epsilon-averaging time")
    p.add_argument("--trace", metavar="FILE", help="CSV trace of one run started at vertex 0")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-tables", help="regenerate the reference tables and diff them")
    _add_output(p)
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("quantum-check", help="quantum versus classical second eigenvalue")
    _add_source(p)
    _add_clock(p)
    _add_output(p, formats=False)
    p.add_argument("--d", type=int, default=2, help="qudit dimension")
    p.add_argument("--assignment", metavar="FILE", help="assignment JSON; default is the optimum for --clock")
    p.set_defaults(func=cmd_quantum_check)

    p = sub.add_parser("export", help="write a topology or optimal result")
    _add_source(p)
    _add_clock(p)
    _add_output(p)
    p.add_argument("--what", choices=["topology", "result"], default="topology")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad usage
    try:
        return args.func(args)
    except SolverFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (_UsageError, SizeGuardError, GossipError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
