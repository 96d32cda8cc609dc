import sys
import textwrap

import pytest

from unitsat.bench import SolverSpec
from unitsat.reachability import ConcurrencyRelation

SEQUENCE_NET = "place p0 initial\nplace p1\ntrans t0\nin p0 t0\nout t0 p1\n"

FORK_NET = textwrap.dedent(
    """\
    place p0 initial
    place p1
    place p2
    trans t0
    in p0 t0
    out t0 p1
    out t0 p2
    """
)

# p0 stays marked while t0 fires (its only pre-place is p1) and re-marks it
UNSAFE_NET = textwrap.dedent(
    """\
    place p0 initial
    place p1 initial
    place p2
    trans t0
    in p1 t0
    out t0 p2
    out t0 p0
    """
)

# two independent 2-place rings, each ring one unit
RINGS_NUPN = textwrap.dedent(
    """\
    place a0 initial
    place a1
    place b0 initial
    place b1
    trans ta0
    trans ta1
    trans tb0
    trans tb1
    in a0 ta0
    out ta0 a1
    in a1 ta1
    out ta1 a0
    in b0 tb0
    out tb0 b1
    in b1 tb1
    out tb1 b0
    unit ua a0 a1
    unit ub b0 b1
    root ua
    """
)


def relation(place_count, pairs):
    return ConcurrencyRelation.from_pairs(place_count, pairs)


@pytest.fixture
def c5():
    return relation(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])


@pytest.fixture
def k4():
    return relation(4, [(i, j) for i in range(1, 5) for j in range(i + 1, 5)])


_SOLVE_SCRIPT = """\
import sys, time

sleep = {sleep}
if sleep:
    time.sleep(sleep)
behavior = {behavior!r}
if behavior == "sat":
    print("s SATISFIABLE")
    print({model!r})
    sys.exit(10)
if behavior == "unsat":
    print("s UNSATISFIABLE")
    sys.exit(20)
if behavior == "sat-no-status":
    print({model!r})
    sys.exit(10)
if behavior == "hang":
    time.sleep(600)
sys.exit(3)
"""


@pytest.fixture
def mock_solver(tmp_path):
    """Factory for scripted solver processes usable as SolverSpec."""

    def make(name, behavior, model="v 0", timeout=5.0, sleep=0.0):
        script = tmp_path / f"solver_{name}.py"
        script.write_text(_SOLVE_SCRIPT.format(behavior=behavior, model=model, sleep=sleep))
        return SolverSpec(
            name=name,
            command=f"{sys.executable} {script} {{input}}",
            timeout_seconds=timeout,
        )

    return make
