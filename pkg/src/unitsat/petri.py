"""Ordinary safe Petri nets, flat unit groupings, and their text formats.

Two line-oriented formats live here.  ``.snet`` describes a plain net,
one directive per line::

    place <name> [initial]
    trans <name>
    in <place> <trans>        # pre-arc:  place -> transition
    out <trans> <place>       # post-arc: transition -> place

``.snupn`` uses the same directives plus a grouping of every place into
named units, and an optional root unit::

    unit <name> <place> [<place> ...]
    root <unit>

Blank lines are skipped, ``#`` starts a comment, and both LF and CRLF
line endings are accepted.  Names must match ``[A-Za-z0-9_.-]+``.
Indices are 1-based and follow declaration order: the i-th ``place``
line is place i, so re-parsing an emitted net reproduces the indices.

Arc weights above 1 (the same arc declared twice) are rejected: the
rest of the toolchain only makes sense for ordinary nets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import IO

from .errors import UnitsatError

_NAME_RE = re.compile(r"[A-Za-z0-9_.\-]+\Z")


class NetFormatError(UnitsatError):
    """Malformed ``.snet``/``.snupn`` input."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class DuplicateNameError(NetFormatError):
    pass


class UndeclaredNameError(NetFormatError):
    pass


class DuplicateArcError(NetFormatError):
    """The same arc was declared twice, i.e. an arc weight above 1."""


class OverlappingUnitsError(NetFormatError):
    """A place appears in more than one unit."""


class UncoveredPlaceError(NetFormatError):
    """A place appears in no unit."""


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str


@dataclass(frozen=True)
class PetriNet:
    """An ordinary net with set-valued markings.

    ``pre_arcs`` holds (place, transition) pairs and ``post_arcs``
    (transition, place) pairs, all indices 1-based.
    """

    places: tuple[str, ...]
    transitions: tuple[str, ...]
    pre_arcs: frozenset[tuple[int, int]]
    post_arcs: frozenset[tuple[int, int]]
    initial_marking: frozenset[int]

    @property
    def place_count(self) -> int:
        return len(self.places)

    @property
    def transition_count(self) -> int:
        return len(self.transitions)

    @cached_property
    def _place_ids(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.places, 1)}

    @cached_property
    def _transition_ids(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.transitions, 1)}

    def place_index(self, name: str) -> int:
        try:
            return self._place_ids[name]
        except KeyError:
            raise UndeclaredNameError(f"unknown place {name!r}") from None

    def transition_index(self, name: str) -> int:
        try:
            return self._transition_ids[name]
        except KeyError:
            raise UndeclaredNameError(f"unknown transition {name!r}") from None


@dataclass(frozen=True)
class Nupn:
    """A net whose places are partitioned into flat (non-nested) units.

    ``units`` keeps declaration order; each entry is a unit name and the
    ascending indices of its places.
    """

    net: PetriNet
    units: tuple[tuple[str, tuple[int, ...]], ...]
    root_unit: str | None = None

    def unit_of(self, place: int) -> str:
        for name, members in self.units:
            if place in members:
                return name
        raise ValueError(f"place {place} not in any unit")


def _read_lines(text: str | IO) -> list[tuple[int, list[str]]]:
    """Split input into (line number, tokens), dropping comments/blanks."""
    if not isinstance(text, str):
        text = text.read()
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            out.append((lineno, tokens))
    return out


def _check_name(name: str, lineno: int) -> str:
    if not _NAME_RE.match(name):
        raise NetFormatError(f"invalid name {name!r}", lineno)
    return name


class _NetBuilder:
    def __init__(self, with_units: bool):
        self.with_units = with_units
        self.places: list[str] = []
        self.place_ids: dict[str, int] = {}
        self.transitions: list[str] = []
        self.transition_ids: dict[str, int] = {}
        self.pre_arcs: set[tuple[int, int]] = set()
        self.post_arcs: set[tuple[int, int]] = set()
        self.initial: set[int] = set()
        self.units: list[tuple[str, list[int]]] = []
        self.unit_ids: dict[str, int] = {}
        self.unit_of_place: dict[int, str] = {}
        self.root: str | None = None
        self.root_line: int | None = None

    def feed(self, lineno: int, tokens: list[str]) -> None:
        directive, args = tokens[0], tokens[1:]
        handler = getattr(self, f"_on_{directive}", None)
        if handler is None or (directive in ("unit", "root") and not self.with_units):
            raise NetFormatError(f"unknown directive {directive!r}", lineno)
        handler(lineno, args)

    def _on_place(self, lineno, args):
        if not args or len(args) > 2 or (len(args) == 2 and args[1] != "initial"):
            raise NetFormatError("expected: place <name> [initial]", lineno)
        name = _check_name(args[0], lineno)
        if name in self.place_ids:
            raise DuplicateNameError(f"duplicate place {name!r}", lineno)
        self.places.append(name)
        self.place_ids[name] = len(self.places)
        if len(args) == 2:
            self.initial.add(self.place_ids[name])

    def _on_trans(self, lineno, args):
        if len(args) != 1:
            raise NetFormatError("expected: trans <name>", lineno)
        name = _check_name(args[0], lineno)
        if name in self.transition_ids:
            raise DuplicateNameError(f"duplicate transition {name!r}", lineno)
        self.transitions.append(name)
        self.transition_ids[name] = len(self.transitions)

    def _resolve(self, kind, name, lineno) -> int:
        ids = self.place_ids if kind == "place" else self.transition_ids
        if name not in ids:
            raise UndeclaredNameError(f"reference to undeclared {kind} {name!r}", lineno)
        return ids[name]

    def _on_in(self, lineno, args):
        if len(args) != 2:
            raise NetFormatError("expected: in <place> <trans>", lineno)
        arc = (self._resolve("place", args[0], lineno), self._resolve("trans", args[1], lineno))
        if arc in self.pre_arcs:
            raise DuplicateArcError(f"duplicate arc {args[0]} -> {args[1]}", lineno)
        self.pre_arcs.add(arc)

    def _on_out(self, lineno, args):
        if len(args) != 2:
            raise NetFormatError("expected: out <trans> <place>", lineno)
        arc = (self._resolve("trans", args[0], lineno), self._resolve("place", args[1], lineno))
        if arc in self.post_arcs:
            raise DuplicateArcError(f"duplicate arc {args[0]} -> {args[1]}", lineno)
        self.post_arcs.add(arc)

    def _on_unit(self, lineno, args):
        if len(args) < 2:
            raise NetFormatError("expected: unit <name> <place>...", lineno)
        name = _check_name(args[0], lineno)
        if name in self.unit_ids:
            raise DuplicateNameError(f"duplicate unit {name!r}", lineno)
        members = []
        for pname in args[1:]:
            p = self._resolve("place", pname, lineno)
            if p in self.unit_of_place:
                raise OverlappingUnitsError(
                    f"place {pname!r} already in unit {self.unit_of_place[p]!r}", lineno
                )
            self.unit_of_place[p] = name
            members.append(p)
        self.unit_ids[name] = len(self.units)
        self.units.append((name, members))

    def _on_root(self, lineno, args):
        if len(args) != 1:
            raise NetFormatError("expected: root <unit>", lineno)
        if self.root is not None:
            raise NetFormatError("root declared twice", lineno)
        self.root = args[0]
        self.root_line = lineno

    def net(self) -> PetriNet:
        return PetriNet(
            places=tuple(self.places),
            transitions=tuple(self.transitions),
            pre_arcs=frozenset(self.pre_arcs),
            post_arcs=frozenset(self.post_arcs),
            initial_marking=frozenset(self.initial),
        )

    def nupn(self) -> Nupn:
        for p in range(1, len(self.places) + 1):
            if p not in self.unit_of_place:
                raise UncoveredPlaceError(f"place {self.places[p - 1]!r} not in any unit")
        if self.root is not None and self.root not in self.unit_ids:
            raise UndeclaredNameError(f"root references undeclared unit {self.root!r}", self.root_line)
        units = tuple((name, tuple(sorted(members))) for name, members in self.units)
        return Nupn(net=self.net(), units=units, root_unit=self.root)


def parse_net(text: str | IO) -> PetriNet:
    """Parse ``.snet`` text into a validated net.

    Raises NetFormatError (or a subclass) with the offending line number
    on syntax errors, duplicate names, undeclared arc endpoints, and
    duplicate arcs.
    """
    builder = _NetBuilder(with_units=False)
    for lineno, tokens in _read_lines(text):
        builder.feed(lineno, tokens)
    return builder.net()


def parse_nupn(text: str | IO) -> Nupn:
    """Parse ``.snupn`` text; the declared units must partition the places."""
    builder = _NetBuilder(with_units=True)
    for lineno, tokens in _read_lines(text):
        builder.feed(lineno, tokens)
    return builder.nupn()


def emit_net(net: PetriNet) -> str:
    """Canonical ``.snet`` text; ``parse_net(emit_net(net)) == net``."""
    lines = []
    for i, name in enumerate(net.places, 1):
        lines.append(f"place {name} initial" if i in net.initial_marking else f"place {name}")
    for name in net.transitions:
        lines.append(f"trans {name}")
    for p, t in sorted(net.pre_arcs):
        lines.append(f"in {net.places[p - 1]} {net.transitions[t - 1]}")
    for t, p in sorted(net.post_arcs):
        lines.append(f"out {net.transitions[t - 1]} {net.places[p - 1]}")
    return "\n".join(lines) + "\n"


def emit_nupn(nupn: Nupn) -> str:
    """Canonical ``.snupn`` text; ``parse_nupn(emit_nupn(x)) == x``."""
    lines = [emit_net(nupn.net).rstrip("\n")]
    for name, members in nupn.units:
        lines.append("unit " + name + " " + " ".join(nupn.net.places[p - 1] for p in members))
    if nupn.root_unit is not None:
        lines.append(f"root {nupn.root_unit}")
    return "\n".join(lines) + "\n"


def validate(net: PetriNet) -> list[Diagnostic]:
    """Static checks; returns diagnostics instead of raising.

    Errors flag violated structural invariants (names, index ranges);
    warnings flag suspicious but legal nets (isolated nodes, an empty
    initial marking).
    """
    diags: list[Diagnostic] = []

    def error(code, message):
        diags.append(Diagnostic("error", code, message))

    def warning(code, message):
        diags.append(Diagnostic("warning", code, message))

    for kind, names in (("place", net.places), ("transition", net.transitions)):
        seen = set()
        for name in names:
            if not name:
                error("empty-name", f"empty {kind} name")
            elif name in seen:
                error("duplicate-name", f"duplicate {kind} name {name!r}")
            seen.add(name)

    for p, t in net.pre_arcs:
        if not (1 <= p <= net.place_count and 1 <= t <= net.transition_count):
            error("arc-out-of-range", f"pre-arc ({p}, {t}) out of range")
    for t, p in net.post_arcs:
        if not (1 <= p <= net.place_count and 1 <= t <= net.transition_count):
            error("arc-out-of-range", f"post-arc ({t}, {p}) out of range")

    for p in net.initial_marking:
        if not (1 <= p <= net.place_count):
            error("marking-out-of-range", f"initial marking references place {p}")

    touched_places = {p for p, _ in net.pre_arcs} | {p for _, p in net.post_arcs}
    touched_transitions = {t for _, t in net.pre_arcs} | {t for t, _ in net.post_arcs}
    for i, name in enumerate(net.places, 1):
        if i not in touched_places:
            warning("isolated-place", f"place {name!r} has no arcs")
    for i, name in enumerate(net.transitions, 1):
        if i not in touched_transitions:
            warning("isolated-transition", f"transition {name!r} has no arcs")
    if not net.initial_marking:
        warning("empty-marking", "initial marking is empty")

    return diags
