"""Diamonds, crystals and their primed variants as two-terminal graphs.

Poles are always vertices 0 and 1; inner vertices are numbered from 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

import networkx as nx

from core.errors import GraphInputError
from core.graph_core import Graph

type Poles = tuple[int, int]


class GadgetTag(StrEnum):
    CRYSTAL = "C"
    DIAMOND = "D"
    CRYSTAL_PRIME = "C'"
    DIAMOND_PRIME = "D'"
    OTHER = "Other"


@dataclass(frozen=True)
class GadgetKind:
    tag: GadgetTag
    i: int | None = None

    def is_(self, tag: GadgetTag, i: int) -> bool:
        return self.tag is tag and self.i == i

    def __str__(self) -> str:
        return self.tag.value if self.i is None else f"{self.tag.value}({self.i})"


OTHER = GadgetKind(GadgetTag.OTHER)


def diamond(i: int) -> tuple[Graph, Poles]:
    """Parallel join of ``i`` two-edge paths."""
    if i < 1:
        msg = f"A diamond needs width at least 1, got {i}"
        raise GraphInputError(msg)
    inner = range(2, i + 2)
    return Graph([0, 1, *inner], [edge for x in inner for edge in ((0, x), (x, 1))]), (0, 1)


def crystal(i: int) -> tuple[Graph, Poles]:
    """Diamond plus the pole edge; ``crystal(0)`` is a single edge."""
    if i < 0:
        msg = f"A crystal needs non-negative width, got {i}"
        raise GraphInputError(msg)
    if i == 0:
        return Graph([0, 1], [(0, 1)]), (0, 1)
    graph, poles = diamond(i)
    return Graph(graph.vertices, [*graph.edges, poles]), poles


def diamond_prime(i: int) -> tuple[Graph, Poles]:
    """``K_{1,3}`` with two leaves as poles, in parallel with ``i - 1`` two-edge paths."""
    if i < 1:
        msg = f"A primed diamond needs i at least 1, got {i}"
        raise GraphInputError(msg)
    hub, pendant = 2, 3
    edges = [(0, hub), (hub, 1), (hub, pendant)]
    paths = range(4, i + 3)
    edges.extend(edge for x in paths for edge in ((0, x), (x, 1)))
    return Graph([0, 1, hub, pendant, *paths], edges), (0, 1)


def crystal_prime(i: int) -> tuple[Graph, Poles]:
    graph, poles = diamond_prime(i)
    return Graph(graph.vertices, [*graph.edges, poles]), poles


def star(leaves: int) -> tuple[Graph, Poles]:
    """``K_{1,leaves}`` with the center 0 and the first leaf as poles."""
    if leaves < 1:
        msg = f"A star needs at least one leaf, got {leaves}"
        raise GraphInputError(msg)
    return Graph(range(leaves + 1), [(0, x) for x in range(1, leaves + 1)]), (0, 1)


def path(n: int) -> tuple[Graph, Poles]:
    """Path on ``n`` vertices with its ends as poles."""
    if n < 2:  # noqa: PLR2004
        msg = f"A path needs at least two vertices, got {n}"
        raise GraphInputError(msg)
    return Graph(range(n), [(x, x + 1) for x in range(n - 1)]), (0, n - 1)


def classify_gadget(h: Graph, poles: Poles) -> GadgetKind:
    """Exact isomorphism test of a two-terminal graph against the gadget families."""
    a, b = poles
    if a not in h or b not in h or a == b:
        msg = f"Poles {poles} are not two distinct vertices of the graph"
        raise GraphInputError(msg)

    width = len(h) - 2
    pole_edge = h.has_edge(a, b)
    candidates: list[tuple[GadgetKind, tuple[Graph, Poles]]] = []
    if pole_edge:
        candidates.append((GadgetKind(GadgetTag.CRYSTAL, width), crystal(width)))
        if width >= 2:  # noqa: PLR2004
            candidates.append((GadgetKind(GadgetTag.CRYSTAL_PRIME, width - 1), crystal_prime(width - 1)))
    elif width >= 1:
        candidates.append((GadgetKind(GadgetTag.DIAMOND, width), diamond(width)))
        if width >= 2:  # noqa: PLR2004
            candidates.append((GadgetKind(GadgetTag.DIAMOND_PRIME, width - 1), diamond_prime(width - 1)))

    marked = _mark_poles(h, poles)
    for kind, (gadget, gadget_poles) in candidates:
        if gadget.number_of_edges() != h.number_of_edges():
            continue
        if nx.is_isomorphic(marked, _mark_poles(gadget, gadget_poles), node_match=_same_role):
            return kind
    return OTHER


def _mark_poles(h: Graph, poles: Poles) -> nx.Graph:
    marked = nx.Graph(h.nx_graph)
    nx.set_node_attributes(marked, {v: v in poles for v in marked.nodes}, "pole")
    return marked


def _same_role(first: dict[str, object], second: dict[str, object]) -> bool:
    return first["pole"] == second["pole"]


def common_pole_neighbors_independent(h: Graph, poles: Poles) -> bool:
    a, b = poles
    common = h.neighbors(a) & h.neighbors(b)
    return not any(h.has_edge(u, v) for u in common for v in common if u < v)
