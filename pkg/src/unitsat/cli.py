"""Command-line entry point.

Subcommands cover the whole pipeline: ``explore`` and ``relation`` work
on nets, ``encode``/``solve``/``decode``/``verify``/``chromatic``/``sweep``
on relations and formulas, ``bench``/``report`` on solver portfolios.
Exit codes: 0 success, 1 domain error (diagnostic on stderr), 2 usage
error.  All outputs are deterministic functions of the inputs except
where measured times are explicitly requested.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import shlex
import subprocess
import sys
from pathlib import Path

from . import __version__, bench, petri, reachability, solver
from .encode import decode, emit_dimacs, encode, parse_dimacs, parse_model, verify_partition
from .errors import UnitsatError


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p.read_text()


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _load_relation(path: str) -> reachability.ConcurrencyRelation:
    return reachability.parse_relation(_read(path))


def _explore(args) -> int:
    net = petri.parse_net(_read(args.net))
    limits = reachability.ExploreLimits(args.max_markings, args.max_seconds)
    markings = reachability.explore(net, limits)
    lines = [f"# {len(markings)} reachable markings"]
    for marking in sorted(markings, key=sorted):
        names = " ".join(net.places[p - 1] for p in sorted(marking))
        lines.append(("m " + names).rstrip())
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _relation(args) -> int:
    net = petri.parse_net(_read(args.net))
    limits = reachability.ExploreLimits(args.max_markings, args.max_seconds)
    markings = reachability.explore(net, limits)
    rel = reachability.concurrency_relation(markings, net.place_count)
    _write_text(args.out, rel.text())
    return 0


def _encode(args) -> int:
    rel = _load_relation(args.relation)
    formula = encode(rel, args.units, symmetry=not args.no_symmetry)
    comments = (
        ("generator", f"unitsat {__version__}"),
        ("relation-sha256", rel.content_hash()),
        ("places", str(rel.place_count)),
        ("units", str(args.units)),
        ("symmetry", "off" if args.no_symmetry else "on"),
    )
    formula = dataclasses.replace(formula, comments=comments)
    with open(args.out, "wb") as sink:
        emit_dimacs(formula, sink)
    if args.compress:
        argv = [t.replace("{input}", args.out) for t in shlex.split(args.compress)]
        if not any("{input}" in t for t in shlex.split(args.compress)):
            argv.append(args.out)
        result = subprocess.run(argv)
        if result.returncode != 0:
            raise UnitsatError(f"compressor exited with status {result.returncode}")
    return 0


def _model_lines(assignment: dict[int, bool], per_line: int = 25) -> list[str]:
    lits = [v if value else -v for v, value in sorted(assignment.items())] + [0]
    return ["v " + " ".join(map(str, lits[i : i + per_line])) for i in range(0, len(lits), per_line)]


def _solve(args) -> int:
    formula = parse_dimacs(_read(args.cnf))
    budget = solver.Budget(args.max_decisions, args.max_seconds)
    outcome = solver.dpll_solve(formula, budget)
    if outcome.is_unknown:
        raise UnitsatError(f"gave up: {outcome.reason}")
    if outcome.is_sat:
        lines = ["s SATISFIABLE"] + _model_lines(outcome.assignment)
    else:
        lines = ["s UNSATISFIABLE"]
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _formula_geometry(args, parser_hint: str) -> tuple[int, int]:
    if args.cnf:
        formula = parse_dimacs(_read(args.cnf))
        meta = dict(formula.comments)
        try:
            return int(meta["places"]), int(meta["units"])
        except (KeyError, ValueError):
            raise UsageError(
                f"{args.cnf} carries no places/units metadata; pass --places and --units"
            ) from None
    if args.places is None or args.units is None:
        raise UsageError(parser_hint)
    return args.places, args.units


def _decode(args) -> int:
    places, units = _formula_geometry(args, "need --cnf or both --places and --units")
    assignment = parse_model(_read(args.model), places * units)
    mapping = decode(assignment, places, units)
    lines = [f"{p} {u}" for p, u in sorted(mapping.items())]
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _parse_partition(text: str) -> dict[int, int]:
    mapping: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise UnitsatError(f"partition line {lineno}: expected '<place> <unit>'")
        try:
            p, u = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise UnitsatError(f"partition line {lineno}: bad numbers") from None
        if p in mapping:
            raise UnitsatError(f"partition line {lineno}: place {p} listed twice")
        mapping[p] = u
    return mapping


def _verify(args) -> int:
    rel = _load_relation(args.relation)
    mapping = _parse_partition(_read(args.partition))
    missing = [p for p in range(1, rel.place_count + 1) if p not in mapping]
    if missing:
        raise UnitsatError(f"partition misses places {missing[:5]}")
    violations = verify_partition(mapping, rel)
    if violations:
        for p, q, u in violations:
            print(f"violation: places {p} and {q} share unit {u}")
        return 1
    print("ok")
    return 0


def _chromatic(args) -> int:
    rel = _load_relation(args.relation)
    if args.method == "brute":
        value = solver.brute_force_chromatic(rel)
    elif args.method == "greedy":
        value = solver.greedy_coloring(rel)[0]
    else:
        budget = solver.Budget(args.max_decisions, args.max_seconds)
        value = bench.minimal_units(rel, budget=budget)
    print(value)
    return 0


def _parse_range(spec: str) -> range:
    lo, sep, hi = spec.partition("..")
    try:
        if sep:
            start, stop = int(lo), int(hi)
        else:
            start = stop = int(lo)
    except ValueError:
        raise UsageError(f"bad unit range {spec!r}; expected N or A..B") from None
    if start < 1 or stop < start:
        raise UsageError(f"bad unit range {spec!r}")
    return range(start, stop + 1)


def _resolve_solver(args) -> bench.SolverSpec | None:
    if args.solver == "internal":
        return None
    portfolio_path = args.portfolio or os.environ.get("UNITSAT_PORTFOLIO")
    if not portfolio_path:
        raise UsageError("--solver names an external solver but no portfolio is given")
    for spec in bench.load_portfolio(portfolio_path):
        if spec.name == args.solver:
            return spec
    raise UsageError(f"solver {args.solver!r} not in portfolio {portfolio_path}")


def _sweep(args) -> int:
    rel = _load_relation(args.relation)
    spec = _resolve_solver(args)
    budget = solver.Budget(args.max_decisions, args.max_seconds)
    points = bench.sweep_units(rel, _parse_range(args.units), spec, budget)
    import io

    out = io.StringIO()
    bench.write_sweep_csv(points, out, include_seconds=args.times)
    _write_text(args.out, out.getvalue())
    return 0


def _bench(args) -> int:
    portfolio_path = args.portfolio or os.environ.get("UNITSAT_PORTFOLIO")
    if not portfolio_path:
        raise UsageError("no portfolio given (use --portfolio or UNITSAT_PORTFOLIO)")
    portfolio = bench.load_portfolio(portfolio_path)
    for path in args.cnf:
        if not Path(path).is_file():
            raise UsageError(f"no such file: {path}")
    records = bench.bench_formulas(
        portfolio,
        args.cnf,
        jobs=args.jobs,
        easy_threshold=args.easy_threshold,
        hard_threshold=args.hard_threshold,
        mode=args.mode,
    )
    import io

    out = io.StringIO()
    bench.write_records_csv(records, out, include_times=not args.no_times)
    _write_text(args.out, out.getvalue())
    return 0


def _report(args) -> int:
    records = bench.read_records_csv(_read(args.records))
    import io

    out = io.StringIO()
    bench.dispersion_report(records, out)
    _write_text(args.out, out.getvalue())
    return 0


def _add_limits(sub, decisions=10_000_000, seconds=60.0):
    sub.add_argument("--max-decisions", type=int, default=decisions)
    sub.add_argument("--max-seconds", type=float, default=seconds)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitsat",
        description="Partition the places of a safe net into sequential units via SAT",
    )
    parser.add_argument("--version", action="version", version=f"unitsat {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("explore", help="list the reachable markings of a net")
    sub.add_argument("--net", required=True)
    sub.add_argument("--max-markings", type=int, default=1_000_000)
    sub.add_argument("--max-seconds", type=float, default=60.0)
    sub.add_argument("--out")
    sub.set_defaults(func=_explore)

    sub = commands.add_parser("relation", help="compute the place-concurrency relation")
    sub.add_argument("--net", required=True)
    sub.add_argument("--max-markings", type=int, default=1_000_000)
    sub.add_argument("--max-seconds", type=float, default=60.0)
    sub.add_argument("--out")
    sub.set_defaults(func=_relation)

    sub = commands.add_parser("encode", help="write the unit-partition CNF in DIMACS")
    sub.add_argument("--relation", required=True)
    sub.add_argument("--units", type=int, required=True)
    sub.add_argument("--no-symmetry", action="store_true")
    sub.add_argument("--out", required=True)
    sub.add_argument("--compress", help="external command run on the written file")
    sub.set_defaults(func=_encode)

    sub = commands.add_parser("solve", help="solve a DIMACS file with the internal solver")
    sub.add_argument("--cnf", required=True)
    sub.add_argument("--out")
    _add_limits(sub)
    sub.set_defaults(func=_solve)

    sub = commands.add_parser("decode", help="turn a solver model into a place/unit table")
    sub.add_argument("--model", required=True)
    sub.add_argument("--cnf", help="encoded file whose metadata carries places/units")
    sub.add_argument("--places", type=int)
    sub.add_argument("--units", type=int)
    sub.add_argument("--out")
    sub.set_defaults(func=_decode)

    sub = commands.add_parser("verify", help="check a place/unit table against a relation")
    sub.add_argument("--relation", required=True)
    sub.add_argument("--partition", required=True)
    sub.set_defaults(func=_verify)

    sub = commands.add_parser("chromatic", help="minimal feasible unit count")
    sub.add_argument("--relation", required=True)
    sub.add_argument("--method", choices=["sat", "brute", "greedy"], default="sat")
    _add_limits(sub)
    sub.set_defaults(func=_chromatic)

    sub = commands.add_parser("sweep", help="solve over a range of unit counts")
    sub.add_argument("--relation", required=True)
    sub.add_argument("--units", required=True, help="inclusive range, e.g. 1..5")
    sub.add_argument("--solver", default="internal")
    sub.add_argument("--portfolio")
    sub.add_argument("--times", action="store_true", help="include measured seconds in the CSV")
    sub.add_argument("--out")
    _add_limits(sub)
    sub.set_defaults(func=_sweep)

    sub = commands.add_parser("bench", help="run a solver portfolio over DIMACS files")
    sub.add_argument("--portfolio")
    sub.add_argument("--cnf", nargs="+", required=True)
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--easy-threshold", type=float, default=60.0)
    sub.add_argument("--hard-threshold", type=float, default=7200.0)
    sub.add_argument("--mode", choices=["and", "or"], default="and")
    sub.add_argument("--no-times", action="store_true", help="omit measured times for reproducible output")
    sub.add_argument("--out")
    sub.set_defaults(func=_bench)

    sub = commands.add_parser("report", help="dispersion CSV from bench records")
    sub.add_argument("--records", required=True)
    sub.add_argument("--out")
    sub.set_defaults(func=_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except UnitsatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
