"""Pure-Python DIMACS clause writers.

Fallback used when the compiled extension is unavailable; same contract
as ``_dimacs_core``.  Clauses are formatted into chunks and written in
batches so that memory stays proportional to the chunk size, not to the
number of clauses.
"""

BACKEND = "python"

_CHUNK = 16384


def write_conflict_clauses(sink, ps, qs, n):
    """One clause (-x(p,u) -x(q,u)) per pair and unit, pair-major.

    ``ps`` and ``qs`` are parallel sequences of place indices;
    returns the number of clauses written.
    """
    buf = []
    append = buf.append
    units = range(1, n + 1)
    for p, q in zip(ps, qs):
        a = (p - 1) * n
        b = (q - 1) * n
        for u in units:
            append(b"-%d -%d 0\n" % (a + u, b + u))
        if len(buf) >= _CHUNK:
            sink.write(b"".join(buf))
            buf.clear()
    if buf:
        sink.write(b"".join(buf))
    return len(ps) * n


def write_membership_clauses(sink, place_count, n, symmetry):
    """One at-least-one-unit clause per place; returns the clause count.

    With ``symmetry`` on, place p may only use units 1..min(p, n).
    """
    buf = []
    for p in range(1, place_count + 1):
        base = (p - 1) * n
        limit = min(p, n) if symmetry else n
        buf.append(b" ".join(b"%d" % (base + u) for u in range(1, limit + 1)) + b" 0\n")
        if len(buf) >= _CHUNK:
            sink.write(b"".join(buf))
            buf.clear()
    if buf:
        sink.write(b"".join(buf))
    return place_count
