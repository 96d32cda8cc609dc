#!/usr/bin/env python3
"""Compare the compiled and pure-Python DIMACS writers.

Builds one random concurrency relation, then streams the same formula
to disk once per available backend and reports throughput.  Use
``--pairs``/``--units`` to scale the clause count up or down.
"""

import argparse
import importlib
import os
import random
import tempfile
import time
from array import array

from unitsat.gen import random_relation_with_pair_count


def load_backends():
    backends = []
    for module_name in ("unitsat._dimacs_core", "unitsat._dimacs_py"):
        try:
            backends.append(importlib.import_module(module_name))
        except ImportError:
            print(f"{module_name}: not built, skipping")
    return backends


def run(backend, path, ps, qs, place_count, units):
    clause_count = len(ps) * units + place_count
    start = time.monotonic()
    with open(path, "wb") as sink:
        sink.write(f"p cnf {place_count * units} {clause_count}\n".encode())
        backend.write_conflict_clauses(sink, ps, qs, units)
        backend.write_membership_clauses(sink, place_count, units, True)
    elapsed = time.monotonic() - start
    size = os.path.getsize(path)
    return elapsed, clause_count, size


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--places", type=int, default=10_000)
    parser.add_argument("--pairs", type=int, default=500_000)
    parser.add_argument("--units", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="write here instead of a temp file (e.g. /dev/null)")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    rel = random_relation_with_pair_count(args.places, args.pairs, rng)
    pairs = rel.sorted_pairs()
    ps = array("q", (p for p, _ in pairs))
    qs = array("q", (q for _, q in pairs))

    backends = load_backends()
    if not backends:
        raise SystemExit("no backend available")

    print(
        f"{args.places} places, {args.pairs} pairs, {args.units} units "
        f"-> {args.pairs * args.units + args.places} clauses\n"
    )
    print(f"{'backend':<10} {'seconds':>8} {'Mclauses/s':>11} {'MB/s':>7}")
    results = {}
    for backend in backends:
        if args.out:
            path = args.out
            elapsed, clauses, size = run(backend, path, ps, qs, args.places, args.units)
        else:
            with tempfile.NamedTemporaryFile(suffix=".cnf", delete=True) as handle:
                elapsed, clauses, size = run(backend, handle.name, ps, qs, args.places, args.units)
        results[backend.BACKEND] = elapsed
        print(
            f"{backend.BACKEND:<10} {elapsed:>8.2f} {clauses / elapsed / 1e6:>11.1f} "
            f"{size / elapsed / 1e6:>7.0f}"
        )
    if len(results) == 2:
        print(f"\nspeedup: {results['python'] / results['compiled']:.1f}x")


if __name__ == "__main__":
    main()
