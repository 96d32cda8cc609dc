"""Seeded generators for test corpora and benchmarks.

Everything takes an explicit ``random.Random`` so corpora are
reproducible; nothing here touches the global RNG state.
"""

from __future__ import annotations

import random

from .petri import PetriNet
from .reachability import ConcurrencyRelation


def random_relation(place_count: int, edge_probability: float, rng: random.Random) -> ConcurrencyRelation:
    """Random graph over ``place_count`` places; each pair joins with the given probability."""
    pairs = set()
    for i in range(1, place_count + 1):
        for j in range(i + 1, place_count + 1):
            if rng.random() < edge_probability:
                pairs.add((i, j))
    return ConcurrencyRelation(place_count, frozenset(pairs))


def random_relation_with_pair_count(
    place_count: int, pair_count: int, rng: random.Random
) -> ConcurrencyRelation:
    """Random graph with exactly ``pair_count`` distinct pairs (sampled, large-scale friendly)."""
    limit = place_count * (place_count - 1) // 2
    if pair_count > limit:
        raise ValueError(f"cannot place {pair_count} pairs over {place_count} places")
    pairs: set[tuple[int, int]] = set()
    while len(pairs) < pair_count:
        a = rng.randrange(1, place_count + 1)
        b = rng.randrange(1, place_count + 1)
        if a != b:
            pairs.add((a, b) if a < b else (b, a))
    return ConcurrencyRelation(place_count, frozenset(pairs))


def multipartite_relation(place_count: int, part_count: int) -> ConcurrencyRelation:
    """Complete multipartite graph; place i sits in part ((i - 1) % parts) + 1.

    Every cross-part pair is present, so the first ``part_count`` places
    form a clique and the chromatic number is exactly ``part_count``
    (when ``place_count >= part_count``).
    """
    if not 1 <= part_count:
        raise ValueError("need at least one part")
    pairs = frozenset(
        (i, j)
        for i in range(1, place_count + 1)
        for j in range(i + 1, place_count + 1)
        if (i - 1) % part_count != (j - 1) % part_count
    )
    return ConcurrencyRelation(place_count, pairs)


def random_safe_net(
    rng: random.Random,
    max_components: int = 3,
    max_places_per_component: int = 4,
    max_transitions: int = 6,
) -> PetriNet:
    """A net that is safe by construction.

    Places are grouped into disjoint components, each holding exactly
    one token forever: every transition consumes one place and produces
    one place per component it touches, so per-component token counts
    are invariant.  Transitions touching several components act as
    synchronizations.
    """
    component_count = rng.randint(1, max_components)
    components: list[list[int]] = []
    places: list[str] = []
    for _ in range(component_count):
        size = rng.randint(1, max_places_per_component)
        members = []
        for _ in range(size):
            places.append(f"p{len(places)}")
            members.append(len(places))
        components.append(members)

    transitions: list[str] = []
    pre_arcs: set[tuple[int, int]] = set()
    post_arcs: set[tuple[int, int]] = set()
    for _ in range(rng.randint(1, max_transitions)):
        t = len(transitions) + 1
        transitions.append(f"t{t - 1}")
        touched = rng.sample(components, rng.randint(1, component_count))
        for members in touched:
            pre_arcs.add((rng.choice(members), t))
            post_arcs.add((t, rng.choice(members)))

    initial = frozenset(members[0] for members in components)
    return PetriNet(
        places=tuple(places),
        transitions=tuple(transitions),
        pre_arcs=frozenset(pre_arcs),
        post_arcs=frozenset(post_arcs),
        initial_marking=initial,
    )
