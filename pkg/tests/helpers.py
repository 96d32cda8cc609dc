"""Independent oracles for the test suite.

Everything here is written from first principles (plain enumeration or
brute force) and never calls into the code paths it is used to check.
"""

from collections import deque
from itertools import product


def oracle_reachable(net):
    """Reachable markings by BFS over the full 2^P candidate space.

    Re-implements the firing rule directly on index sets: a transition
    is enabled when its pre-places are all marked; firing removes the
    pre-places and then adds post-places one by one, failing if a
    post-place is already present.
    """
    pre = {t: set() for t in range(1, net.transition_count + 1)}
    post = {t: set() for t in range(1, net.transition_count + 1)}
    for p, t in net.pre_arcs:
        pre[t].add(p)
    for t, p in net.post_arcs:
        post[t].add(p)

    def successors(marking):
        out = []
        for t in range(1, net.transition_count + 1):
            if pre[t] <= marking:
                nxt = set(marking) - pre[t]
                for p in post[t]:
                    if p in nxt:
                        raise AssertionError(f"oracle hit unsafe firing of t{t}")
                    nxt.add(p)
                out.append(frozenset(nxt))
        return out

    start = frozenset(net.initial_marking)
    seen = {start}
    queue = deque([start])
    while queue:
        for nxt in successors(queue.popleft()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def oracle_concurrent_pairs(markings):
    """All unordered co-marked pairs, straight from the definition."""
    pairs = set()
    for marking in markings:
        for a in marking:
            for b in marking:
                if a < b:
                    pairs.add((a, b))
    return pairs


def colorable(place_count, pairs, k):
    """Is there a proper k-coloring?  Complete backtracking search."""
    earlier = {v: [] for v in range(1, place_count + 1)}
    for i, j in pairs:
        lo, hi = min(i, j), max(i, j)
        earlier[hi].append(lo)
    colors = [0] * (place_count + 1)

    def go(v):
        if v > place_count:
            return True
        taken = {colors[w] for w in earlier[v]}
        for c in range(1, k + 1):
            if c not in taken:
                colors[v] = c
                if go(v + 1):
                    return True
        colors[v] = 0
        return False

    return go(1)


def oracle_chromatic(place_count, pairs):
    if place_count == 0:
        return 1
    k = 1
    while not colorable(place_count, pairs, k):
        k += 1
    return k


def normalize_coloring(coloring, place_count):
    """Relabel colors by first occurrence in place order (1, 2, ...)."""
    relabel = {}
    out = {}
    for p in range(1, place_count + 1):
        c = coloring[p]
        if c not in relabel:
            relabel[c] = len(relabel) + 1
        out[p] = relabel[c]
    return out


def truth_table_models(num_vars, clauses):
    """Count satisfying total assignments by enumerating all 2^V of them."""
    count = 0
    for bits in product([False, True], repeat=num_vars):
        assignment = {v: bits[v - 1] for v in range(1, num_vars + 1)}
        ok = True
        for clause in clauses:
            if not any(assignment[abs(l)] == (l > 0) for l in clause):
                ok = False
                break
        if ok:
            count += 1
    return count


def truth_table_sat(num_vars, clauses):
    """Satisfiability by full 2^V enumeration, vectorized over rows.

    Row r encodes the assignment where variable v is true iff bit v-1 of
    r is set; feasible up to ~20 variables.
    """
    import numpy as np

    rows = np.arange(1 << num_vars, dtype=np.uint32)
    alive = np.ones(rows.shape, dtype=bool)
    for clause in clauses:
        sat = np.zeros(rows.shape, dtype=bool)
        for lit in clause:
            bit = (rows >> (abs(lit) - 1)) & 1
            sat |= bit.astype(bool) if lit > 0 else ~bit.astype(bool)
        alive &= sat
        if not alive.any():
            return False
    return bool(alive.any())


def count_partition_models(place_count, pairs, n, symmetry):
    """Model count of the unit-partition formula by direct enumeration.

    A total assignment is a choice, for each place, of the set of units
    it joins.  The membership clause requires a unit among the first
    min(p, n) (or any unit with symmetry off); the conflict clauses
    require concurrent places to pick disjoint unit sets.  Enumerating
    unit-set choices per place therefore enumerates exactly the models.
    """
    adj_earlier = {v: [] for v in range(1, place_count + 1)}
    for i, j in pairs:
        lo, hi = min(i, j), max(i, j)
        adj_earlier[hi].append(lo)

    options = []
    for p in range(1, place_count + 1):
        limit = min(p, n) if symmetry else n
        low_mask = (1 << limit) - 1
        options.append([m for m in range(1, 1 << n) if m & low_mask])

    chosen = [0] * (place_count + 1)

    def go(p):
        if p > place_count:
            return 1
        total = 0
        for mask in options[p - 1]:
            if all(mask & chosen[q] == 0 for q in adj_earlier[p]):
                chosen[p] = mask
                total += go(p + 1)
        chosen[p] = 0
        return total

    return go(1)


def random_clauses(rng, num_vars, num_clauses, max_len=3):
    """Random small CNF (no tautological or duplicate-literal clauses)."""
    clauses = []
    for _ in range(num_clauses):
        size = rng.randint(1, max_len)
        vs = rng.sample(range(1, num_vars + 1), min(size, num_vars))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return clauses
