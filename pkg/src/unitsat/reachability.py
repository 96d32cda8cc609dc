"""Explicit exploration of safe nets and the place-concurrency relation.

A transition is enabled when all its pre-places are marked; firing it
removes the tokens of the pre-places and then marks the post-places.
If a post-place is already marked at that point the net is not safe and
exploration stops with the offending firing sequence.

Two places are concurrent when some reachable marking contains both.
The resulting relation is the undirected graph the rest of the
toolchain colors: place = vertex, concurrent pair = edge.
"""

from __future__ import annotations

import hashlib
import time
from collections import deque
from dataclasses import dataclass
from typing import IO, Iterable

from .errors import UnitsatError
from .petri import PetriNet

Marking = frozenset  # of 1-based place indices


@dataclass(frozen=True)
class ExploreLimits:
    max_markings: int = 1_000_000
    max_seconds: float = 60.0

    def __post_init__(self):
        if self.max_markings <= 0 or self.max_seconds <= 0:
            raise ValueError("limits must be positive")


class UnsafeNetError(UnitsatError):
    """A firing would put a second token on ``place``.

    ``trace`` is the transition-name sequence from the initial marking;
    replaying all but its last element is legal, and the last firing is
    the one that re-marks the place.
    """

    def __init__(self, trace: Iterable[str], place: int):
        trace = tuple(trace)
        super().__init__(
            f"unsafe net: firing {trace[-1]!r} re-marks place {place} "
            f"(trace: {' '.join(trace)})"
        )
        self.trace = trace
        self.place = place


class LimitExceededError(UnitsatError):
    def __init__(self, what: str, limit):
        super().__init__(f"exploration exceeded {what} = {limit}")
        self.what = what
        self.limit = limit


class RelationFormatError(UnitsatError):
    """Malformed ``.crel`` input."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _transition_masks(net: PetriNet) -> tuple[list[int], list[int]]:
    pre = [0] * net.transition_count
    post = [0] * net.transition_count
    for p, t in net.pre_arcs:
        pre[t - 1] |= 1 << (p - 1)
    for t, p in net.post_arcs:
        post[t - 1] |= 1 << (p - 1)
    return pre, post


def _mask_to_marking(mask: int) -> Marking:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def fire(net: PetriNet, marking: Marking, transition: str | int) -> Marking:
    """Fire one transition (by name or 1-based index) from a marking.

    Raises ValueError when the transition is not enabled and
    UnsafeNetError (with a one-step trace) when the firing would re-mark
    a place.
    """
    t = net.transition_index(transition) if isinstance(transition, str) else transition
    if not (1 <= t <= net.transition_count):
        raise ValueError(f"transition index {t} out of range")
    pre, post = _transition_masks(net)
    m = 0
    for p in marking:
        m |= 1 << (p - 1)
    if m & pre[t - 1] != pre[t - 1]:
        raise ValueError(f"transition {net.transitions[t - 1]!r} is not enabled")
    left = m & ~pre[t - 1]
    clash = left & post[t - 1]
    if clash:
        raise UnsafeNetError((net.transitions[t - 1],), (clash & -clash).bit_length())
    return _mask_to_marking(left | post[t - 1])


def explore(net: PetriNet, limits: ExploreLimits | None = None) -> set[Marking]:
    """All reachable markings under interleaving semantics.

    BFS from the initial marking, transitions tried in declaration
    order, so the trace attached to an UnsafeNetError is deterministic.
    """
    limits = limits or ExploreLimits()
    pre, post = _transition_masks(net)
    tcount = net.transition_count

    init = 0
    for p in net.initial_marking:
        init |= 1 << (p - 1)

    # mask -> (parent mask, transition index fired to reach it)
    seen: dict[int, tuple[int, int] | None] = {init: None}
    queue = deque([init])
    deadline = time.monotonic() + limits.max_seconds

    def trace_to(mask: int) -> list[str]:
        steps = []
        while seen[mask] is not None:
            mask, t = seen[mask]  # type: ignore[misc]
            steps.append(net.transitions[t])
        steps.reverse()
        return steps

    while queue:
        if time.monotonic() > deadline:
            raise LimitExceededError("max_seconds", limits.max_seconds)
        m = queue.popleft()
        for t in range(tcount):
            if m & pre[t] == pre[t]:
                left = m & ~pre[t]
                clash = left & post[t]
                if clash:
                    trace = trace_to(m) + [net.transitions[t]]
                    raise UnsafeNetError(trace, (clash & -clash).bit_length())
                m2 = left | post[t]
                if m2 not in seen:
                    if len(seen) >= limits.max_markings:
                        raise LimitExceededError("max_markings", limits.max_markings)
                    seen[m2] = (m, t)
                    queue.append(m2)

    return {_mask_to_marking(m) for m in seen}


@dataclass(frozen=True)
class ConcurrencyRelation:
    """Symmetric irreflexive relation over place indices 1..place_count.

    Pairs are stored normalized as (i, j) with i < j.
    """

    place_count: int
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.place_count < 0:
            raise ValueError("place_count must be >= 0")
        for i, j in self.pairs:
            if not (1 <= i < j <= self.place_count):
                raise ValueError(f"pair ({i}, {j}) out of range for {self.place_count} places")

    @classmethod
    def from_pairs(cls, place_count: int, pairs: Iterable[tuple[int, int]]) -> "ConcurrencyRelation":
        """Build from unordered pairs, normalizing and deduplicating."""
        norm = set()
        for a, b in pairs:
            if a == b:
                raise ValueError(f"reflexive pair ({a}, {b})")
            norm.add((a, b) if a < b else (b, a))
        return cls(place_count, frozenset(norm))

    @property
    def pair_count(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def neighbors(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {p: set() for p in range(1, self.place_count + 1)}
        for i, j in self.pairs:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def text(self) -> str:
        """Canonical ``.crel`` form (header then sorted pairs)."""
        lines = [f"places {self.place_count}"]
        lines.extend(f"{i} {j}" for i, j in self.sorted_pairs())
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        return hashlib.sha256(self.text().encode("ascii")).hexdigest()[:16]


def concurrency_relation(markings: Iterable[Marking], place_count: int) -> ConcurrencyRelation:
    """Pairs of places co-marked in at least one of the given markings."""
    markings = list(markings)
    if not markings:
        raise ValueError("no markings given")
    pairs = set()
    for m in markings:
        idx = sorted(m)
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                pairs.add((idx[a], idx[b]))
    return ConcurrencyRelation(place_count, frozenset(pairs))


def emit_relation(rel: ConcurrencyRelation, sink: IO) -> None:
    sink.write(rel.text())


def parse_relation(text: str | IO) -> ConcurrencyRelation:
    """Parse ``.crel`` text: a ``places <k>`` header then ``<i> <j>`` lines."""
    if not isinstance(text, str):
        text = text.read()
    place_count = None
    pairs: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if place_count is None:
            if len(tokens) != 2 or tokens[0] != "places":
                raise RelationFormatError("expected header: places <count>", lineno)
            try:
                place_count = int(tokens[1])
            except ValueError:
                raise RelationFormatError(f"bad place count {tokens[1]!r}", lineno) from None
            if place_count < 0:
                raise RelationFormatError("place count must be >= 0", lineno)
            continue
        if len(tokens) != 2:
            raise RelationFormatError("expected: <i> <j>", lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise RelationFormatError(f"bad pair {raw.strip()!r}", lineno) from None
        if a == b:
            raise RelationFormatError(f"reflexive pair ({a}, {b})", lineno)
        if not (1 <= a <= place_count and 1 <= b <= place_count):
            raise RelationFormatError(f"pair ({a}, {b}) out of range", lineno)
        pair = (a, b) if a < b else (b, a)
        if pair in pairs:
            raise RelationFormatError(f"duplicate pair ({a}, {b})", lineno)
        pairs.add(pair)
    if place_count is None:
        raise RelationFormatError("missing 'places <count>' header")
    return ConcurrencyRelation(place_count, frozenset(pairs))
