"""Command-line front end.

Subcommands::

    maxplus check FILE       decide consistency; exit 0/2/3 per verdict
    maxplus invariant FILE   run the shrinking iteration, print its class
    maxplus trajectory FILE  synthesize a finite schedule; exit 4 if none
    maxplus graph FILE       emit the unrolled precedence graph as DOT

All numeric output is exact.  ``--param name=value`` substitutes named
entries in the problem file, so one file describes a whole parameter sweep.
The default probe bound is ``10 * n^2``; override with ``--probe-bound`` or
the ``MAXPLUS_PROBE_BOUND`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .invariance import InvarianceKind, iterate_shrink
from .matrix import TropicalMatrix
from .precedence import export_dot
from .problems import ProblemFormatError, parse_problem_file
from .pteg import (
    ConsistencyKind,
    InfeasibleHorizon,
    PtegSystem,
    check_consistency,
    closure_sequence,
    default_probe_bound,
    synthesize_trajectory,
    validate_trajectory,
)
from .semiring import format_scalar

PROBE_BOUND_ENV = "MAXPLUS_PROBE_BOUND"

EXIT_CODES = {
    ConsistencyKind.CONSISTENT: 0,
    ConsistencyKind.NOT_WEAKLY_CONSISTENT: 2,
    ConsistencyKind.NOT_CONSISTENT_WEAK_OPEN: 3,
}
EXIT_USAGE = 1
EXIT_INFEASIBLE = 4


@dataclass
class RunConfig:
    params: dict[str, str]
    output: str
    probe_bound: int | None = None
    horizon: int | None = None
    seed: tuple | None = None
    emit_closures: bool = False
    emit_generators: bool = False


def _matrix_lists(matrix: TropicalMatrix) -> list[list[str]]:
    return [[format_scalar(v) for v in row] for row in matrix.to_rows()]


def _print_matrix(matrix: TropicalMatrix) -> None:
    print(str(matrix))


def _parse_params(pairs: list[str]) -> dict[str, str]:
    out = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ValueError(f"--param expects name=value, got {pair!r}")
        out[name] = value
    return out


def _resolve_probe_bound(args) -> int | None:
    if args.probe_bound is not None:
        bound = args.probe_bound
    elif os.environ.get(PROBE_BOUND_ENV):
        try:
            bound = int(os.environ[PROBE_BOUND_ENV])
        except ValueError:
            raise ValueError(
                f"{PROBE_BOUND_ENV} must be an integer,"
                f" got {os.environ[PROBE_BOUND_ENV]!r}"
            ) from None
    else:
        return None
    if bound < 1:
        raise ValueError("probe bound must be positive")
    return bound


def _load_system(args, cfg: RunConfig) -> PtegSystem:
    problem = parse_problem_file(args.file)
    return problem.instantiate(cfg.params)


def cmd_check(args) -> int:
    cfg = RunConfig(
        params=_parse_params(args.param),
        output=args.format,
        probe_bound=_resolve_probe_bound(args),
        emit_closures=args.emit_pi,
    )
    system = _load_system(args, cfg)
    verdict = check_consistency(system, cfg.probe_bound)
    code = EXIT_CODES[verdict.kind]
    n = system.size
    probe = max(cfg.probe_bound or default_probe_bound(n), n * n + 1)

    if cfg.output == "json":
        doc = {
            "verdict": verdict.kind.value,
            "exit_code": code,
            "n": n,
            "probe_bound": probe,
            "fixed_closure": (
                _matrix_lists(verdict.fixed_closure) if verdict.fixed_closure else None
            ),
            "first_divergent": verdict.first_divergent,
            "verified_up_to": verdict.verified_up_to,
        }
        if cfg.emit_closures:
            upto = (
                verdict.first_divergent
                if verdict.first_divergent is not None
                else (n * n + 1 if verdict.kind is ConsistencyKind.CONSISTENT
                      else verdict.verified_up_to)
            )
            doc["closures"] = [
                _matrix_lists(m) for m in closure_sequence(system, upto)
            ]
        print(json.dumps(doc, indent=2))
        return code

    print(f"verdict: {verdict.kind.value}")
    if verdict.kind is ConsistencyKind.CONSISTENT:
        print(f"fixed closure (index {n * n}, stable for every larger horizon):")
        _print_matrix(verdict.fixed_closure)
    elif verdict.kind is ConsistencyKind.NOT_WEAKLY_CONSISTENT:
        print(f"first divergent closure index: {verdict.first_divergent}")
        print("no finite schedule spans that many occurrences")
    else:
        print(f"stabilization failed: closure({n * n}) != closure({n * n + 1})")
        print(
            f"all closures finite up to index {verdict.verified_up_to}"
            " (probe bound); weak consistency undecided"
        )
    if cfg.emit_closures:
        upto = (
            verdict.first_divergent
            if verdict.first_divergent is not None
            else (n * n + 1 if verdict.kind is ConsistencyKind.CONSISTENT
                  else verdict.verified_up_to)
        )
        for k, matrix in enumerate(closure_sequence(system, upto)):
            print(f"closure({k}):")
            _print_matrix(matrix)
    return code


def cmd_invariant(args) -> int:
    cfg = RunConfig(
        params=_parse_params(args.param),
        output=args.format,
        probe_bound=_resolve_probe_bound(args),
        emit_generators=args.emit_s,
    )
    system = _load_system(args, cfg)
    report = iterate_shrink(system, cfg.probe_bound)

    if cfg.output == "json":
        doc = {
            "classification": report.kind.value,
            "step": report.step,
            "invariant_generator": (
                _matrix_lists(report.invariant_generator)
                if report.invariant_generator
                else None
            ),
        }
        if cfg.emit_generators:
            doc["generators"] = [_matrix_lists(m) for m in report.generators]
        print(json.dumps(doc, indent=2))
        return 0

    print(f"{report.kind.value} {report.step}")
    if report.kind is InvarianceKind.CONVERGED_NON_EMPTY:
        print("invariant generator (its image is the maximal controlled-invariant set):")
        _print_matrix(report.invariant_generator)
    elif report.kind is InvarianceKind.REAL_EMPTY_AT_STEP:
        print(f"no real vector survives {report.step} shrink steps")
    else:
        print(
            "still shrinking at the probe bound;"
            " the maximal invariant contains no real vector"
        )
    if cfg.emit_generators:
        for k, matrix in enumerate(report.generators):
            print(f"generator(step {k}):")
            _print_matrix(matrix)
    return 0


def cmd_trajectory(args) -> int:
    seed = tuple(args.seed.split(",")) if args.seed else None
    cfg = RunConfig(
        params=_parse_params(args.param),
        output=args.format,
        horizon=args.horizon,
        seed=seed,
    )
    system = _load_system(args, cfg)
    try:
        trajectory = synthesize_trajectory(system, cfg.horizon, cfg.seed)
    except InfeasibleHorizon as exc:
        print(f"infeasible ({exc.reason}): {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if not validate_trajectory(system, trajectory):
        raise RuntimeError("synthesized trajectory failed validation (internal error)")

    if cfg.output == "json":
        doc = {
            "horizon": trajectory.horizon,
            "states": [[format_scalar(v) for v in row] for row in trajectory.states],
            "inputs": [[format_scalar(v) for v in row] for row in trajectory.inputs],
        }
        print(json.dumps(doc, indent=2))
        return 0

    for k, row in enumerate(trajectory.states, start=1):
        print(f"x({k}) = " + " ".join(format_scalar(v) for v in row))
    for k, row in enumerate(trajectory.inputs, start=1):
        print(f"u({k}) = " + " ".join(format_scalar(v) for v in row))
    return 0


def cmd_graph(args) -> int:
    cfg = RunConfig(params=_parse_params(args.param), output="dot", horizon=args.horizon)
    system = _load_system(args, cfg)
    if cfg.horizon < 1:
        raise ValueError("horizon must be at least 1")
    sys.stdout.write(export_dot(system.block_spec(), cfg.horizon))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxplus",
        description="Exact max-plus feasibility analysis of time-window"
        " constrained event systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="problem file (JSON)")
        p.add_argument(
            "--param",
            action="append",
            default=[],
            metavar="NAME=VALUE",
            help="substitute a named parameter (repeatable)",
        )

    p_check = sub.add_parser("check", help="decide consistency")
    common(p_check)
    p_check.add_argument("--probe-bound", type=int, default=None, metavar="N")
    p_check.add_argument("--format", choices=("human", "json"), default="human")
    p_check.add_argument(
        "--emit-pi",
        action="store_true",
        help="print the full closure-matrix sequence",
    )
    p_check.set_defaults(handler=cmd_check)

    p_inv = sub.add_parser("invariant", help="compute the maximal invariant")
    common(p_inv)
    p_inv.add_argument("--probe-bound", type=int, default=None, metavar="N")
    p_inv.add_argument("--format", choices=("human", "json"), default="human")
    p_inv.add_argument(
        "--emit-s",
        action="store_true",
        help="print the full generator-matrix sequence",
    )
    p_inv.set_defaults(handler=cmd_invariant)

    p_traj = sub.add_parser("trajectory", help="synthesize a finite schedule")
    common(p_traj)
    p_traj.add_argument("--horizon", type=int, required=True, metavar="K")
    p_traj.add_argument(
        "--seed",
        default=None,
        metavar="V1,V2,...",
        help="finite seed vector for the first occurrence (default: zeros)",
    )
    p_traj.add_argument("--format", choices=("human", "json"), default="human")
    p_traj.set_defaults(handler=cmd_trajectory)

    p_graph = sub.add_parser("graph", help="emit the precedence graph as DOT")
    common(p_graph)
    p_graph.add_argument("--horizon", type=int, required=True, metavar="K")
    p_graph.add_argument("--format", choices=("dot",), default="dot")
    p_graph.set_defaults(handler=cmd_graph)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        return args.handler(args)
    except (ProblemFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
