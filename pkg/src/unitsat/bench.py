"""Harness for running solver portfolios over generated formulas.

External solvers follow the usual exit-code convention: 10 means
satisfiable (a model on stdout as ``s``/``v`` lines), 20 means
unsatisfiable.  Each formula gets one run per portfolio solver; a
formula's difficulty is the number of solvers that failed on it, and
the selection predicate keeps formulas that are neither trivially fast
for some solver nor comfortably solved by the entire portfolio.
"""

from __future__ import annotations

import csv
import os
import shlex
import signal
import statistics
import subprocess
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Callable, Iterable, Sequence

from .encode import decode, encode, emit_dimacs, parse_dimacs, parse_model, satisfies, verify_partition
from .errors import UnitsatError
from .reachability import ConcurrencyRelation
from .solver import Budget, dpll_solve, greedy_coloring

SOLVED = frozenset(("sat", "unsat"))

EXIT_SAT = 10
EXIT_UNSAT = 20


class PortfolioFormatError(UnitsatError):
    pass


class SpawnFailureError(UnitsatError):
    pass


class InconsistentVerdictsError(UnitsatError):
    """Both sat and unsat were reported for the same formula."""


class NonMonotoneVerdictsError(UnitsatError):
    """A sweep saw unsat above sat, which no correct solver can produce."""


class SolverUnknownError(UnitsatError):
    """A probed unit count could not be decided within budget."""


class ModelVerificationError(UnitsatError):
    """A claimed model failed re-verification."""


class EmptyReportError(UnitsatError):
    pass


@dataclass(frozen=True)
class SolverSpec:
    """One external solver: a command template and a timeout.

    The template must mention ``{input}``, replaced by the formula path.
    """

    name: str
    command: str
    timeout_seconds: float

    def __post_init__(self):
        if self.timeout_seconds <= 0:
            raise ValueError("timeout must be positive")
        if "{input}" not in self.command:
            raise ValueError("command template must contain {input}")

    def argv(self, cnf_path: str | Path) -> list[str]:
        return [token.replace("{input}", str(cnf_path)) for token in shlex.split(self.command)]


@dataclass(frozen=True)
class SolverRun:
    """Outcome of one solver process on one formula.

    ``cpu_seconds`` is the child's own CPU time when it exited normally
    and the elapsed wall time when it was killed at the timeout (a
    sleeping process burns no CPU, but it did cost the whole timeout).
    """

    solver: str
    verdict: str  # "sat", "unsat", "timeout" or "error"
    cpu_seconds: float
    wall_seconds: float
    model_text: str | None = None


@dataclass(frozen=True)
class Selection:
    keep: bool
    reason: str | None = None


@dataclass(frozen=True)
class BenchRecord:
    formula_id: str
    num_vars: int
    num_clauses: int
    formula_type: str  # "SAT", "UNSAT" or "UNKNOWN"
    difficulty: int
    mean_easy_seconds: float | None
    selection: Selection


def load_portfolio(path: str | Path) -> list[SolverSpec]:
    """Read a portfolio config: JSON with a ``solvers`` list of
    {name, command, timeout_seconds} objects."""
    import json

    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise PortfolioFormatError(f"cannot read portfolio {path}: {exc}") from exc
    solvers = data.get("solvers") if isinstance(data, dict) else None
    if not isinstance(solvers, list) or not solvers:
        raise PortfolioFormatError("portfolio must contain a non-empty 'solvers' list")
    specs = []
    names = set()
    for entry in solvers:
        try:
            spec = SolverSpec(
                name=entry["name"],
                command=entry["command"],
                timeout_seconds=float(entry["timeout_seconds"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise PortfolioFormatError(f"bad solver entry {entry!r}: {exc}") from exc
        if spec.name in names:
            raise PortfolioFormatError(f"duplicate solver name {spec.name!r}")
        names.add(spec.name)
        specs.append(spec)
    return specs


def run_solver(spec: SolverSpec, cnf_path: str | Path) -> SolverRun:
    """Run one solver process, enforcing its timeout.

    The child is reaped with ``os.wait4`` so its CPU time is measured
    per-process (safe under the parallel worker pool).  At the timeout
    the whole process group is killed and the verdict is ``timeout``.
    """
    argv = spec.argv(cnf_path)
    try:
        proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
            start_new_session=True,
        )
    except OSError as exc:
        raise SpawnFailureError(f"cannot spawn {argv[0]!r}: {exc}") from exc

    timed_out = threading.Event()

    def kill():
        timed_out.set()
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except (ProcessLookupError, PermissionError):
            pass

    timer = threading.Timer(spec.timeout_seconds, kill)
    chunks: list[str] = []

    def drain():
        assert proc.stdout is not None
        try:
            chunks.append(proc.stdout.read())
        finally:
            proc.stdout.close()

    reader = threading.Thread(target=drain)
    start = time.monotonic()
    timer.start()
    reader.start()
    try:
        _, status, usage = os.wait4(proc.pid, 0)
    finally:
        timer.cancel()
        reader.join()
    wall = time.monotonic() - start
    exitcode = os.waitstatus_to_exitcode(status)
    proc.returncode = exitcode  # already reaped; keep Popen from waiting again
    output = "".join(chunks)

    cpu = usage.ru_utime + usage.ru_stime
    if timed_out.is_set() and exitcode < 0:
        return SolverRun(spec.name, "timeout", cpu_seconds=wall, wall_seconds=wall)
    if exitcode == EXIT_SAT:
        if "s SATISFIABLE" not in output:
            return SolverRun(spec.name, "error", cpu, wall)
        return SolverRun(spec.name, "sat", cpu, wall, model_text=output)
    if exitcode == EXIT_UNSAT:
        return SolverRun(spec.name, "unsat", cpu, wall)
    return SolverRun(spec.name, "error", cpu, wall)


def difficulty(runs: Sequence[SolverRun]) -> int:
    """Number of runs that failed to solve the formula."""
    if not runs:
        raise ValueError("no runs given")
    verdicts = {r.verdict for r in runs}
    if "sat" in verdicts and "unsat" in verdicts:
        raise InconsistentVerdictsError(
            "both sat and unsat reported: " + ", ".join(f"{r.solver}={r.verdict}" for r in runs)
        )
    return sum(1 for r in runs if r.verdict not in SOLVED)


def mean_solved_seconds(runs: Sequence[SolverRun]) -> float | None:
    solved = [r.cpu_seconds for r in runs if r.verdict in SOLVED]
    return statistics.fmean(solved) if solved else None


def format_difficulty(level: int, mean_seconds: float | None) -> str:
    """Render difficulty for reports: plain count, with the mean solving
    time appended for the easy levels, e.g. ``0 (148 s)``."""
    if mean_seconds is None:
        return str(level)
    return f"{level} ({round(mean_seconds)} s)"


def select(
    runs: Sequence[SolverRun],
    easy_threshold: float = 60.0,
    hard_threshold: float = 7200.0,
    mode: str = "and",
) -> Selection:
    """Benchmark-worthiness filter.

    A formula is rejected when some solver finished under
    ``easy_threshold`` CPU seconds *and* every solver solved it within
    ``hard_threshold`` -- i.e. it challenges nobody.  ``mode="or"``
    rejects when either condition holds on its own (the stricter
    alternative reading); or-rejection is a superset of and-rejection.
    """
    if not runs:
        raise ValueError("no runs given")
    solved = [r for r in runs if r.verdict in SOLVED]
    fast_exists = any(r.cpu_seconds < easy_threshold for r in solved)
    all_within = len(solved) == len(runs) and all(
        r.cpu_seconds <= hard_threshold for r in solved
    )
    if mode == "and":
        rejected = fast_exists and all_within
    elif mode == "or":
        rejected = fast_exists or all_within
    else:
        raise ValueError(f"mode must be 'and' or 'or', got {mode!r}")
    if not rejected:
        return Selection(True)
    reasons = []
    if fast_exists:
        reasons.append(f"some solver finished under {easy_threshold:g} s")
    if all_within:
        reasons.append(f"all solvers finished within {hard_threshold:g} s")
    return Selection(False, " and ".join(reasons))


def summarize_runs(
    formula_id: str,
    num_vars: int,
    num_clauses: int,
    runs: Sequence[SolverRun],
    easy_threshold: float = 60.0,
    hard_threshold: float = 7200.0,
    mode: str = "and",
) -> BenchRecord:
    level = difficulty(runs)
    verdicts = {r.verdict for r in runs}
    if "sat" in verdicts:
        ftype = "SAT"
    elif "unsat" in verdicts:
        ftype = "UNSAT"
    else:
        ftype = "UNKNOWN"
    mean = mean_solved_seconds(runs) if level <= 1 else None
    return BenchRecord(
        formula_id=formula_id,
        num_vars=num_vars,
        num_clauses=num_clauses,
        formula_type=ftype,
        difficulty=level,
        mean_easy_seconds=mean,
        selection=select(runs, easy_threshold, hard_threshold, mode),
    )


def _read_dimacs_header(path: Path) -> tuple[int, int]:
    with open(path, "r") as handle:
        for line in handle:
            tokens = line.split()
            if tokens and tokens[0] == "p":
                if len(tokens) != 4 or tokens[1] != "cnf":
                    break
                return int(tokens[2]), int(tokens[3])
            if tokens and tokens[0] != "c":
                break
    raise UnitsatError(f"{path}: missing DIMACS problem line")


def _checked_runs(path: Path, runs: list[SolverRun], num_vars: int) -> list[SolverRun]:
    """Demote sat runs whose model does not satisfy the formula."""
    if not any(r.verdict == "sat" for r in runs):
        return runs
    formula = parse_dimacs(Path(path).read_text())
    checked = []
    for run in runs:
        if run.verdict == "sat":
            try:
                model = parse_model(run.model_text or "", num_vars)
                good = satisfies(formula.clauses, model)
            except UnitsatError:
                good = False
            if not good:
                run = SolverRun(run.solver, "error", run.cpu_seconds, run.wall_seconds)
        checked.append(run)
    return checked


def bench_formulas(
    portfolio: Sequence[SolverSpec],
    cnf_paths: Sequence[str | Path],
    jobs: int = 1,
    easy_threshold: float = 60.0,
    hard_threshold: float = 7200.0,
    mode: str = "and",
) -> list[BenchRecord]:
    """Run the whole portfolio over each formula.

    Distinct formulas may run in parallel (``jobs`` worker threads);
    records come back sorted by formula id regardless of completion
    order.  Sat answers are re-verified against the formula before they
    are trusted.
    """

    def bench_one(path: str | Path) -> BenchRecord:
        path = Path(path)
        num_vars, num_clauses = _read_dimacs_header(path)
        runs = [run_solver(spec, path) for spec in portfolio]
        runs = _checked_runs(path, runs, num_vars)
        return summarize_runs(
            path.stem, num_vars, num_clauses, runs, easy_threshold, hard_threshold, mode
        )

    if jobs <= 1:
        records = [bench_one(p) for p in cnf_paths]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(bench_one, cnf_paths))
    return sorted(records, key=lambda r: r.formula_id)


@dataclass(frozen=True)
class SweepPoint:
    n: int
    verdict: str  # "sat", "unsat", "timeout", "error" or "unknown"
    seconds: float


InternalSolver = Callable[[ConcurrencyRelation, int], tuple[str, float]]


def _solve_with_dpll(rel: ConcurrencyRelation, n: int, budget: Budget | None) -> tuple[str, float]:
    outcome = dpll_solve(encode(rel, n), budget)
    return outcome.status, outcome.stats.elapsed_seconds


def _solve_with_spec(
    rel: ConcurrencyRelation, n: int, spec: SolverSpec, workdir: Path
) -> tuple[str, float]:
    formula = encode(rel, n)
    path = workdir / f"u{n}.cnf"
    with open(path, "wb") as sink:
        emit_dimacs(formula, sink)
    run = run_solver(spec, path)
    if run.verdict == "sat":
        model = parse_model(run.model_text or "", formula.num_vars)
        units = decode(model, rel.place_count, n)
        bad = verify_partition(units, rel)
        if bad:
            raise ModelVerificationError(
                f"solver {spec.name!r} returned an invalid partition at n={n}: {bad[:3]}"
            )
    return run.verdict, run.cpu_seconds


def check_single_boundary(points: Sequence[SweepPoint]) -> None:
    """Verdicts along ascending n must be unsat below sat, never mixed."""
    seen_sat = False
    for point in points:
        if point.verdict == "sat":
            seen_sat = True
        elif point.verdict == "unsat" and seen_sat:
            raise NonMonotoneVerdictsError(
                f"unsat at n={point.n} after a sat answer at a smaller n"
            )


def sweep_units(
    rel: ConcurrencyRelation,
    n_values: Iterable[int],
    solver: SolverSpec | InternalSolver | None = None,
    budget: Budget | None = None,
) -> list[SweepPoint]:
    """Encode and solve at each unit count, in ascending order.

    ``solver`` is the internal DPLL when None, an external SolverSpec,
    or any callable (relation, n) -> (verdict, seconds).  The verdict
    series is checked for the single unsat-to-sat boundary.
    """
    n_values = sorted(set(n_values))
    if not n_values:
        raise ValueError("empty unit-count range")
    points = []
    with tempfile.TemporaryDirectory(prefix="unitsat-sweep-") as tmp:
        for n in n_values:
            if solver is None:
                verdict, seconds = _solve_with_dpll(rel, n, budget)
            elif isinstance(solver, SolverSpec):
                verdict, seconds = _solve_with_spec(rel, n, solver, Path(tmp))
            else:
                verdict, seconds = solver(rel, n)
            points.append(SweepPoint(n, verdict, seconds))
    check_single_boundary(points)
    return points


VERDICT_LETTERS = {"sat": "S", "unsat": "U", "timeout": "T", "error": "E", "unknown": "?"}


def write_sweep_csv(points: Sequence[SweepPoint], sink: IO[str], include_seconds: bool = True) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    header = ["n", "verdict"] + (["seconds"] if include_seconds else [])
    writer.writerow(header)
    for point in points:
        row = [point.n, VERDICT_LETTERS[point.verdict]]
        if include_seconds:
            row.append(f"{point.seconds:.3f}")
        writer.writerow(row)


def minimal_units(
    rel: ConcurrencyRelation,
    solver: SolverSpec | InternalSolver | None = None,
    upper_hint: int | None = None,
    budget: Budget | None = None,
) -> int:
    """Smallest satisfiable unit count, i.e. the chromatic number.

    Binary search over [1, upper_hint]; the hint defaults to the greedy
    coloring count, which is always satisfiable, so the search space is
    valid from the start.
    """
    if upper_hint is None:
        upper_hint = greedy_coloring(rel)[0]
    if upper_hint < 1:
        raise ValueError("upper_hint must be >= 1")

    def probe(n: int) -> str:
        if solver is None:
            verdict, _ = _solve_with_dpll(rel, n, budget)
        elif isinstance(solver, SolverSpec):
            with tempfile.TemporaryDirectory(prefix="unitsat-min-") as tmp:
                verdict, _ = _solve_with_spec(rel, n, solver, Path(tmp))
        else:
            verdict, _ = solver(rel, n)
        if verdict not in SOLVED:
            raise SolverUnknownError(f"solver could not decide n={n} ({verdict})")
        return verdict

    lo, hi = 1, upper_hint
    while lo < hi:
        mid = (lo + hi) // 2
        if probe(mid) == "sat":
            hi = mid
        else:
            lo = mid + 1
    return lo


RECORD_FIELDS = [
    "formula",
    "variables",
    "clauses",
    "type",
    "difficulty",
    "mean_easy_seconds",
    "selection",
    "reason",
]


def write_records_csv(
    records: Sequence[BenchRecord], sink: IO[str], include_times: bool = True
) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(RECORD_FIELDS)
    for r in records:
        mean = ""
        if include_times and r.mean_easy_seconds is not None:
            mean = f"{r.mean_easy_seconds:.3f}"
        writer.writerow(
            [
                r.formula_id,
                r.num_vars,
                r.num_clauses,
                r.formula_type,
                r.difficulty,
                mean,
                "keep" if r.selection.keep else "reject",
                r.selection.reason or "",
            ]
        )


def read_records_csv(text: str | IO[str]) -> list[BenchRecord]:
    if isinstance(text, str):
        import io

        text = io.StringIO(text)
    reader = csv.DictReader(text)
    records = []
    for row in reader:
        try:
            records.append(
                BenchRecord(
                    formula_id=row["formula"],
                    num_vars=int(row["variables"]),
                    num_clauses=int(row["clauses"]),
                    formula_type=row["type"],
                    difficulty=int(row["difficulty"]),
                    mean_easy_seconds=float(row["mean_easy_seconds"])
                    if row["mean_easy_seconds"]
                    else None,
                    selection=Selection(row["selection"] == "keep", row["reason"] or None),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise UnitsatError(f"bad records row {row!r}: {exc}") from exc
    return records


def dispersion_report(records: Sequence[BenchRecord], sink: IO[str]) -> None:
    """Size/type/difficulty table for plotting, one row per formula."""
    if not records:
        raise EmptyReportError("no records to report")
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["variables", "clauses", "type", "difficulty"])
    for r in records:
        writer.writerow(
            [r.num_vars, r.num_clauses, r.formula_type, format_difficulty(r.difficulty, r.mean_easy_seconds)]
        )
