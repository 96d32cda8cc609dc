"""CNF formulas asking whether places split into n sequential units.

For place p (1-based) and unit u in [1, n] the propositional variable
``x(p, u) = (p - 1) * n + u`` states that place p belongs to unit u.
A formula for a concurrency relation and a unit count n contains, in
this order:

* one conflict clause ``(-x(p,u) -x(q,u))`` per concurrent pair p < q
  and per unit u -- concurrent places never share a unit;
* one membership clause per place p requiring it to join some unit.
  With symmetry breaking on (the default) place p may only pick a unit
  of index at most min(p, n), which discards relabeled duplicates of
  each partition without changing satisfiability; with it off, any of
  the n units is allowed.

Counts are fixed by construction: ``places * n`` variables and
``n * pairs + places`` clauses.  The formula is satisfiable exactly
when n is at least the chromatic number of the relation graph.

Clause views are lazy and re-iterable, so huge formulas can be streamed
to DIMACS without ever materializing the clause list.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from . import _kernel
from .errors import UnitsatError
from .reachability import ConcurrencyRelation

Clause = list[int]


class DimacsFormatError(UnitsatError):
    """Malformed DIMACS CNF input."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class ModelFormatError(UnitsatError):
    """Solver output that is neither a model nor an UNSAT answer."""


class UnsatResultError(UnitsatError):
    """The solver output reports UNSATISFIABLE, so there is no model."""


class NoUnitError(UnitsatError):
    def __init__(self, place: int):
        super().__init__(f"no unit variable is true for place {place}")
        self.place = place


def var_index(place: int, unit: int, n: int) -> int:
    """Variable id of x(place, unit) in a formula with n units."""
    if n < 1:
        raise ValueError(f"unit count must be >= 1, got {n}")
    if not 1 <= unit <= n:
        raise ValueError(f"unit {unit} out of range [1, {n}]")
    if place < 1:
        raise ValueError(f"place {place} out of range")
    return (place - 1) * n + unit


class ColoringClauses:
    """Lazy, re-iterable clause sequence for one (relation, n, symmetry).

    Iteration yields conflict clauses in sorted pair order (units inner)
    and then one membership clause per place.  ``write_dimacs_to`` emits
    the same clauses through the selected kernel backend without going
    through Python lists.
    """

    def __init__(self, rel: ConcurrencyRelation, n: int, symmetry: bool):
        self.rel = rel
        self.n = n
        self.symmetry = symmetry
        self._pairs = rel.sorted_pairs()

    def __len__(self) -> int:
        return self.n * len(self._pairs) + self.rel.place_count

    def __iter__(self) -> Iterator[Clause]:
        n = self.n
        for p, q in self._pairs:
            a = (p - 1) * n
            b = (q - 1) * n
            for u in range(1, n + 1):
                yield [-(a + u), -(b + u)]
        for p in range(1, self.rel.place_count + 1):
            base = (p - 1) * n
            limit = min(p, n) if self.symmetry else n
            yield [base + u for u in range(1, limit + 1)]

    def write_dimacs_to(self, sink: IO[bytes]) -> None:
        ps = array("q", (p for p, _ in self._pairs))
        qs = array("q", (q for _, q in self._pairs))
        _kernel.write_conflict_clauses(sink, ps, qs, self.n)
        _kernel.write_membership_clauses(sink, self.rel.place_count, self.n, self.symmetry)


@dataclass(frozen=True)
class CnfFormula:
    """A CNF with known variable and clause counts.

    ``clauses`` is any re-iterable of clauses: a plain list (parsed
    formulas) or a lazy view (encoded formulas).  ``comments`` are
    (key, value) pairs emitted as ``c`` lines.
    """

    num_vars: int
    num_clauses: int
    clauses: Iterable[Clause]
    comments: tuple[tuple[str, str], ...] = ()


def encode(rel: ConcurrencyRelation, n: int, symmetry: bool = True) -> CnfFormula:
    """Build the unit-partition formula for a relation and unit count."""
    if n < 1:
        raise ValueError(f"unit count must be >= 1, got {n}")
    view = ColoringClauses(rel, n, symmetry)
    return CnfFormula(num_vars=rel.place_count * n, num_clauses=len(view), clauses=view)


def emit_dimacs(formula: CnfFormula, sink: IO[bytes]) -> None:
    """Write ``formula`` as DIMACS CNF bytes (LF endings).

    Encoded formulas stream through the kernel backend; anything else is
    written clause by clause, so lazily produced clauses are never all
    held in memory.
    """
    for key, value in formula.comments:
        line = f"c {key} {value}" if value else f"c {key}"
        sink.write(line.encode("utf-8") + b"\n")
    sink.write(f"p cnf {formula.num_vars} {formula.num_clauses}\n".encode("ascii"))
    fast_path = getattr(formula.clauses, "write_dimacs_to", None)
    if fast_path is not None:
        fast_path(sink)
        return
    for clause in formula.clauses:
        sink.write((" ".join(map(str, clause)) + " 0\n").encode("ascii"))


def dimacs_bytes(formula: CnfFormula) -> bytes:
    import io

    sink = io.BytesIO()
    emit_dimacs(formula, sink)
    return sink.getvalue()


def parse_dimacs(text: str | IO[str]) -> CnfFormula:
    """Parse DIMACS CNF text into a materialized formula."""
    if not isinstance(text, str):
        text = text.read()
    comments: list[tuple[str, str]] = []
    num_vars = num_clauses = None
    clauses: list[Clause] = []
    current: Clause = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == "c":
            rest = raw.split(None, 1)[1] if len(tokens) > 1 else ""
            key, _, value = rest.partition(" ")
            comments.append((key, value))
            continue
        if tokens[0] == "p":
            if num_vars is not None:
                raise DimacsFormatError("duplicate problem line", lineno)
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise DimacsFormatError("expected: p cnf <vars> <clauses>", lineno)
            try:
                num_vars, num_clauses = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise DimacsFormatError("bad problem line counts", lineno) from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsFormatError("negative counts in problem line", lineno)
            continue
        if num_vars is None:
            raise DimacsFormatError("clause before problem line", lineno)
        for token in tokens:
            try:
                lit = int(token)
            except ValueError:
                raise DimacsFormatError(f"bad literal {token!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise DimacsFormatError("empty clause", lineno)
                clauses.append(current)
                current = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsFormatError(f"literal {lit} out of range", lineno)
                current.append(lit)
    if num_vars is None:
        raise DimacsFormatError("missing problem line")
    if current:
        raise DimacsFormatError("last clause not terminated by 0")
    if len(clauses) != num_clauses:
        raise DimacsFormatError(
            f"problem line promises {num_clauses} clauses, found {len(clauses)}"
        )
    return CnfFormula(num_vars, num_clauses, clauses, tuple(comments))


def parse_model(text: str | IO[str], num_vars: int) -> dict[int, bool]:
    """Parse solver output (``s`` status line plus ``v`` value lines).

    Returns a total assignment over [1, num_vars]; variables the solver
    does not mention default to false.  Raises UnsatResultError for an
    UNSATISFIABLE answer and ModelFormatError for anything malformed.
    """
    if not isinstance(text, str):
        text = text.read()
    status: str | None = None
    lits: list[int] = []
    terminated = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "s":
            answer = " ".join(tokens[1:])
            if answer == "UNSATISFIABLE":
                raise UnsatResultError("solver reports UNSATISFIABLE")
            if answer != "SATISFIABLE":
                raise ModelFormatError(f"line {lineno}: unrecognized status {answer!r}")
            status = answer
        elif tokens[0] == "v":
            for token in tokens[1:]:
                try:
                    lit = int(token)
                except ValueError:
                    raise ModelFormatError(f"line {lineno}: bad literal {token!r}") from None
                if lit == 0:
                    terminated = True
                    break
                if abs(lit) > num_vars:
                    raise ModelFormatError(f"line {lineno}: literal {lit} out of range")
                if not terminated:
                    lits.append(lit)
        else:
            raise ModelFormatError(f"line {lineno}: unexpected line {raw.strip()!r}")
    if status is None:
        raise ModelFormatError("missing 's' status line")
    if not terminated:
        raise ModelFormatError("'v' lines not terminated by 0")
    assignment = {v: False for v in range(1, num_vars + 1)}
    seen: dict[int, bool] = {}
    for lit in lits:
        v, value = abs(lit), lit > 0
        if seen.get(v, value) != value:
            raise ModelFormatError(f"conflicting literals for variable {v}")
        seen[v] = value
        assignment[v] = value
    return assignment


def decode(assignment: dict[int, bool], place_count: int, n: int) -> dict[int, int]:
    """Map each place to the lowest unit whose membership variable is true.

    Models may set several unit variables per place (the encoding has no
    at-most-one constraint); the lowest index wins.
    """
    out: dict[int, int] = {}
    for p in range(1, place_count + 1):
        base = (p - 1) * n
        for u in range(1, n + 1):
            if assignment.get(base + u, False):
                out[p] = u
                break
        else:
            raise NoUnitError(p)
    return out


def verify_partition(
    units: dict[int, int], rel: ConcurrencyRelation
) -> list[tuple[int, int, int]]:
    """Concurrent pairs placed in the same unit; empty means valid."""
    violations = []
    for p, q in rel.sorted_pairs():
        if units[p] == units[q]:
            violations.append((p, q, units[p]))
    return violations


def satisfies(clauses: Iterable[Clause], assignment: dict[int, bool]) -> bool:
    """True when every clause has at least one satisfied literal."""
    for clause in clauses:
        for lit in clause:
            value = assignment.get(abs(lit), False)
            if value if lit > 0 else not value:
                break
        else:
            return False
    return True
