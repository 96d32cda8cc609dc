"""Partition the places of a safe Petri net into sequential units via SAT.

The pipeline: parse a net, explore its markings, derive the
place-concurrency relation, encode "do n units suffice?" as CNF, emit
DIMACS, solve (internally or through external solver portfolios), and
decode/verify/score the results.
"""

__version__ = "0.1.0"

from ._kernel import BACKEND as kernel_backend
from .bench import (
    BenchRecord,
    Selection,
    SolverRun,
    SolverSpec,
    bench_formulas,
    difficulty,
    dispersion_report,
    format_difficulty,
    load_portfolio,
    minimal_units,
    run_solver,
    select,
    summarize_runs,
    sweep_units,
)
from .encode import (
    CnfFormula,
    decode,
    dimacs_bytes,
    emit_dimacs,
    encode,
    parse_dimacs,
    parse_model,
    satisfies,
    var_index,
    verify_partition,
)
from .errors import UnitsatError
from .petri import Nupn, PetriNet, emit_net, emit_nupn, parse_net, parse_nupn, validate
from .reachability import (
    ConcurrencyRelation,
    ExploreLimits,
    concurrency_relation,
    emit_relation,
    explore,
    fire,
    parse_relation,
)
from .solver import Budget, SolveOutcome, brute_force_chromatic, dpll_solve, greedy_coloring

__all__ = [
    "BenchRecord",
    "Budget",
    "CnfFormula",
    "ConcurrencyRelation",
    "ExploreLimits",
    "Nupn",
    "PetriNet",
    "Selection",
    "SolveOutcome",
    "SolverRun",
    "SolverSpec",
    "UnitsatError",
    "bench_formulas",
    "brute_force_chromatic",
    "concurrency_relation",
    "decode",
    "difficulty",
    "dimacs_bytes",
    "dispersion_report",
    "dpll_solve",
    "emit_dimacs",
    "emit_net",
    "emit_nupn",
    "emit_relation",
    "encode",
    "explore",
    "fire",
    "format_difficulty",
    "greedy_coloring",
    "kernel_backend",
    "load_portfolio",
    "minimal_units",
    "parse_dimacs",
    "parse_model",
    "parse_net",
    "parse_nupn",
    "parse_relation",
    "run_solver",
    "satisfies",
    "select",
    "summarize_runs",
    "sweep_units",
    "validate",
    "var_index",
    "verify_partition",
]
