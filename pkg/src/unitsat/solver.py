"""Desk-scale solving oracles.

A plain DPLL solver (unit propagation, chronological backtracking, no
clause learning) plus exact and greedy graph coloring.  All three are
deliberately simple so they can serve as trustworthy cross-checks for
each other and for external solvers; hard instances belong to real
solvers driven by the bench harness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .encode import CnfFormula, satisfies
from .errors import UnitsatError
from .reachability import ConcurrencyRelation


@dataclass(frozen=True)
class Budget:
    max_decisions: int = 10_000_000
    max_seconds: float = 60.0

    def __post_init__(self):
        if self.max_decisions <= 0 or self.max_seconds <= 0:
            raise ValueError("budget must be positive")


@dataclass
class SolveStats:
    decisions: int = 0
    propagations: int = 0
    elapsed_seconds: float = 0.0


@dataclass
class SolveOutcome:
    status: str  # "sat", "unsat" or "unknown"
    assignment: dict[int, bool] | None = None
    reason: str | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"

    @property
    def is_unsat(self) -> bool:
        return self.status == "unsat"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"


class TooLargeError(UnitsatError):
    pass


def dpll_solve(formula: CnfFormula, budget: Budget | None = None) -> SolveOutcome:
    """DPLL with unit propagation and chronological backtracking.

    Branches on the lowest-indexed unassigned variable, trying true
    first, so statistics and models are reproducible.  A sat answer is
    self-checked against every clause before being returned; unsat is
    only reported after exhausting the search space.  Budget exhaustion
    yields an unknown outcome, never a wrong answer.
    """
    budget = budget or Budget()
    start = time.monotonic()
    deadline = start + budget.max_seconds
    stats = SolveStats()

    def done(status, assignment=None, reason=None):
        stats.elapsed_seconds = time.monotonic() - start
        return SolveOutcome(status, assignment, reason, stats)

    clauses = [tuple(c) for c in formula.clauses]
    nv = formula.num_vars
    occ_pos: list[list[int]] = [[] for _ in range(nv + 1)]
    occ_neg: list[list[int]] = [[] for _ in range(nv + 1)]
    for ci, clause in enumerate(clauses):
        if not clause:
            return done("unsat")
        for lit in clause:
            (occ_pos if lit > 0 else occ_neg)[abs(lit)].append(ci)

    val = [0] * (nv + 1)  # 0 unassigned, 1 true, -1 false
    trail: list[int] = []

    def assign(var: int, value: bool) -> None:
        val[var] = 1 if value else -1
        trail.append(var)

    def propagate(from_index: int) -> bool:
        """Propagate assignments from trail[from_index:]; False on conflict."""
        i = from_index
        while i < len(trail):
            v = trail[i]
            i += 1
            for ci in occ_neg[v] if val[v] > 0 else occ_pos[v]:
                clause = clauses[ci]
                unassigned = 0
                last = 0
                satisfied = False
                for lit in clause:
                    x = val[abs(lit)]
                    if x == 0:
                        unassigned += 1
                        last = lit
                        if unassigned > 1:
                            break
                    elif (x > 0) == (lit > 0):
                        satisfied = True
                        break
                if satisfied or unassigned > 1:
                    continue
                if unassigned == 0:
                    return False
                stats.propagations += 1
                assign(abs(last), last > 0)
        return True

    # top-level unit clauses
    for clause in clauses:
        if len(clause) == 1:
            lit = clause[0]
            v = abs(lit)
            if val[v] == 0:
                assign(v, lit > 0)
            elif (val[v] > 0) != (lit > 0):
                return done("unsat")
    if not propagate(0):
        return done("unsat")

    # decision stack entries: [var, flipped, trail length before the decision]
    stack: list[list] = []
    low = 1  # lowest possibly-unassigned variable

    while True:
        while low <= nv and val[low] != 0:
            low += 1
        if low > nv:
            assignment = {v: val[v] > 0 for v in range(1, nv + 1)}
            if not satisfies(clauses, assignment):
                raise AssertionError("model failed self-check")
            return done("sat", assignment)

        if stats.decisions >= budget.max_decisions:
            return done("unknown", reason="decision budget exhausted")
        if time.monotonic() > deadline:
            return done("unknown", reason="time budget exhausted")

        stats.decisions += 1
        stack.append([low, False, len(trail)])
        assign(low, True)
        conflict = not propagate(len(trail) - 1)
        while conflict:
            while stack and stack[-1][1]:
                _, _, mark = stack.pop()
                while len(trail) > mark:
                    v = trail.pop()
                    val[v] = 0
                    if v < low:
                        low = v
            if not stack:
                return done("unsat")
            top = stack[-1]
            top[1] = True
            while len(trail) > top[2]:
                v = trail.pop()
                val[v] = 0
                if v < low:
                    low = v
            assign(top[0], False)
            conflict = not propagate(len(trail) - 1)


def brute_force_chromatic(rel: ConcurrencyRelation, max_places: int = 12) -> int:
    """Smallest k admitting a proper k-coloring, by complete search.

    Guarded to small graphs; the count is at least 1 even for the empty
    graph so it lines up with the 1-based unit counts used elsewhere.
    """
    if rel.place_count > max_places:
        raise TooLargeError(
            f"{rel.place_count} places exceed the brute-force guard of {max_places}"
        )
    count = rel.place_count
    if count == 0:
        return 1
    earlier: list[list[int]] = [[] for _ in range(count + 1)]
    for i, j in rel.pairs:
        earlier[j].append(i)

    colors = [0] * (count + 1)

    def colorable(v: int, k: int) -> bool:
        if v > count:
            return True
        used = {colors[w] for w in earlier[v]}
        for c in range(1, k + 1):
            if c not in used:
                colors[v] = c
                if colorable(v + 1, k):
                    return True
        colors[v] = 0
        return False

    for k in range(1, count + 1):
        if colorable(1, k):
            return k
    raise AssertionError("unreachable: every graph is place_count-colorable")


def greedy_coloring(
    rel: ConcurrencyRelation, order: list[int] | None = None
) -> tuple[int, dict[int, int]]:
    """First-fit coloring along ``order`` (declaration order by default).

    Returns (color count, place -> color).  Always proper, so the count
    is an upper bound for the chromatic number.
    """
    count = rel.place_count
    if order is None:
        order = list(range(1, count + 1))
    elif sorted(order) != list(range(1, count + 1)):
        raise ValueError("order must be a permutation of 1..place_count")
    adj = rel.neighbors()
    colors: dict[int, int] = {}
    for p in order:
        used = {colors[q] for q in adj[p] if q in colors}
        c = 1
        while c in used:
            c += 1
        colors[p] = c
    return max(colors.values(), default=1), colors
