import random

import pytest

from unitsat.encode import CnfFormula, encode, satisfies, verify_partition
from unitsat.gen import random_relation
from unitsat.solver import (
    Budget,
    TooLargeError,
    brute_force_chromatic,
    dpll_solve,
    greedy_coloring,
)

from conftest import relation
from helpers import (
    colorable,
    oracle_chromatic,
    random_clauses,
    truth_table_models,
    truth_table_sat,
)


def formula(num_vars, clauses):
    return CnfFormula(num_vars, len(clauses), clauses)


class TestDpll:
    def test_contradictory_units(self):
        assert dpll_solve(formula(1, [[1], [-1]])).is_unsat

    def test_empty_formula_branches_true(self):
        outcome = dpll_solve(formula(1, []))
        assert outcome.is_sat
        assert outcome.assignment == {1: True}

    def test_empty_clause(self):
        assert dpll_solve(formula(1, [[]])).is_unsat

    def test_c5_boundary(self, c5):
        sat3 = dpll_solve(encode(c5, 3))
        assert sat3.is_sat
        from unitsat.encode import decode

        assert verify_partition(decode(sat3.assignment, 5, 3), c5) == []
        assert dpll_solve(encode(c5, 2)).is_unsat
        assert brute_force_chromatic(c5) == 3

    def test_model_is_total(self):
        outcome = dpll_solve(formula(4, [[2, 3]]))
        assert outcome.is_sat
        assert set(outcome.assignment) == {1, 2, 3, 4}

    def test_agrees_with_truth_table(self):
        rng = random.Random(101)
        for _ in range(60):
            num_vars = rng.randint(1, 12)
            clauses = random_clauses(rng, num_vars, rng.randint(1, 4 * num_vars))
            outcome = dpll_solve(formula(num_vars, clauses))
            expected = truth_table_models(num_vars, clauses) > 0
            assert outcome.is_sat == expected
            if outcome.is_sat:
                assert satisfies(clauses, outcome.assignment)

    def test_agrees_with_truth_table_up_to_twenty_vars(self):
        rng = random.Random(103)
        for num_vars in (14, 16, 18, 20):
            for _ in range(3):
                clauses = random_clauses(rng, num_vars, rng.randint(num_vars, 5 * num_vars))
                outcome = dpll_solve(formula(num_vars, clauses))
                assert outcome.is_sat == truth_table_sat(num_vars, clauses)
                if outcome.is_sat:
                    assert satisfies(clauses, outcome.assignment)

    def test_decision_budget_gives_unknown(self, k4):
        # four mutually concurrent places into three units, no symmetry:
        # no unit clauses, so deciding it takes more than one decision
        f = encode(k4, 3, symmetry=False)
        outcome = dpll_solve(f, Budget(max_decisions=1, max_seconds=60))
        assert outcome.is_unknown
        assert "decision" in outcome.reason
        assert dpll_solve(f).is_unsat

    def test_stats_are_reproducible(self, c5):
        a = dpll_solve(encode(c5, 3))
        b = dpll_solve(encode(c5, 3))
        assert (a.stats.decisions, a.stats.propagations) == (
            b.stats.decisions,
            b.stats.propagations,
        )
        assert a.assignment == b.assignment


class TestBruteForceChromatic:
    def test_empty_relation(self):
        assert brute_force_chromatic(relation(4, [])) == 1

    def test_complete_graph(self, k4):
        assert brute_force_chromatic(k4) == 4

    def test_c5_needs_three(self, c5):
        # oracle first: no proper 2-coloring, and some 3-coloring exists
        assert not colorable(5, c5.pairs, 2)
        assert colorable(5, c5.pairs, 3)
        assert brute_force_chromatic(c5) == 3

    def test_guard(self):
        with pytest.raises(TooLargeError):
            brute_force_chromatic(relation(13, []))

    def test_matches_independent_oracle(self):
        rng = random.Random(71)
        for _ in range(25):
            rel = random_relation(rng.randint(0, 9), rng.random(), rng)
            assert brute_force_chromatic(rel) == oracle_chromatic(rel.place_count, rel.pairs)


class TestGreedyColoring:
    def test_empty_relation(self):
        count, colors = greedy_coloring(relation(3, []))
        assert count == 1
        assert colors == {1: 1, 2: 1, 3: 1}

    def test_complete_graph_any_order(self, k4):
        rng = random.Random(3)
        for _ in range(5):
            order = rng.sample(range(1, 5), 4)
            count, colors = greedy_coloring(k4, order)
            assert count == 4
            assert sorted(colors.values()) == [1, 2, 3, 4]

    def test_c5_natural_order(self, c5):
        # first-fit by hand: 1->1, 2->2, 3->1, 4->2, 5->3
        count, colors = greedy_coloring(c5)
        assert count == 3
        assert colors == {1: 1, 2: 2, 3: 1, 4: 2, 5: 3}

    def test_always_proper_and_bounds_chromatic(self):
        rng = random.Random(73)
        for _ in range(25):
            rel = random_relation(rng.randint(1, 10), rng.random(), rng)
            count, colors = greedy_coloring(rel)
            assert verify_partition(colors, rel) == []
            assert count >= brute_force_chromatic(rel)

    def test_order_must_be_permutation(self):
        with pytest.raises(ValueError):
            greedy_coloring(relation(3, []), [1, 2])


class TestSmallestSatUnitCount:
    def test_equals_chromatic_on_random_graphs(self):
        rng = random.Random(79)
        for _ in range(20):
            rel = random_relation(rng.randint(1, 8), rng.random(), rng)
            chi = brute_force_chromatic(rel)
            statuses = {n: dpll_solve(encode(rel, n)).status for n in range(1, chi + 2)}
            smallest_sat = min(n for n, s in statuses.items() if s == "sat")
            assert smallest_sat == chi
