"""Small structural predicates used by the dispatch, the solver and the tests."""

from __future__ import annotations

from collections import Counter
from typing import TYPE_CHECKING

import networkx as nx

from core.graph_core import Coloring, Graph, is_equitable
from core.solver_types import BRIDGE_STEP, FallbackStage

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from core.solver_types import TraceRecord


def inner_forest(h: Graph, poles: tuple[int, int]) -> bool:
    """True when the graph minus its poles has no cycle."""
    inner = h.vertices - set(poles)
    return nx.is_forest(h.nx_graph.subgraph(inner)) if inner else True


def pole_dominates(g: Graph, pole: int, inner: Iterable[int]) -> bool:
    nbrs = g.neighbors(pole)
    return all(v in nbrs for v in inner)


def non_neighbors(g: Graph, vertex: int, candidates: Iterable[int]) -> list[int]:
    """Candidates not adjacent to ``vertex``, in increasing order."""
    nbrs = g.neighbors(vertex)
    return sorted(v for v in candidates if v != vertex and v not in nbrs)


def independent_pair(g: Graph, candidates: Iterable[int], exclude: Iterable[int] = ()) -> tuple[int, int] | None:
    """Lexicographically first nonadjacent pair among ``candidates`` outside ``exclude``."""
    ordered = sorted(set(candidates) - set(exclude))
    for index, u in enumerate(ordered):
        nbrs = g.neighbors(u)
        for v in ordered[index + 1 :]:
            if v not in nbrs:
                return u, v
    return None


def degeneracy_order(g: Graph) -> list[int]:
    """Repeatedly remove a vertex of minimum remaining degree (smallest id on ties)."""
    degrees = {v: g.degree(v) for v in g.vertices}
    removed: set[int] = set()
    order: list[int] = []
    while len(order) < len(degrees):
        vertex = min((v for v in degrees if v not in removed), key=lambda v: (degrees[v], v))
        order.append(vertex)
        removed.add(vertex)
        for nbr in g.neighbors(vertex):
            if nbr not in removed:
                degrees[nbr] -= 1
    return order


def profile_after(
    reduced_profile: Sequence[int],
    replaced_colors: Iterable[int],
    region_multiset: dict[int, int],
) -> tuple[int, ...]:
    """Class sizes after swapping the replaced vertices for the region."""
    sizes = list(reduced_profile)
    for color in replaced_colors:
        sizes[color - 1] -= 1
    for color, count in region_multiset.items():
        sizes[color - 1] += count
    return tuple(sizes)


def verify_trace(g: Graph, coloring: Coloring, trace: Sequence[TraceRecord]) -> list[str]:
    """Problems found in a solve trace; an empty list means every step checks out."""
    problems: list[str] = []
    for position, record in enumerate(trace):
        label = f"step {position} ({record.lemma} at depth {record.depth})"
        if record.lemma != BRIDGE_STEP and record.n_after >= record.n_before:
            problems.append(f"{label}: reduced graph is not smaller ({record.n_after} >= {record.n_before})")
        if record.k >= 3 and record.max_degree_after > 2 * record.k - 3:  # noqa: PLR2004
            problems.append(f"{label}: reduced max degree {record.max_degree_after} exceeds {2 * record.k - 3}")
        expected = profile_after(record.reduced_profile, record.replaced_colors, dict(record.region_multiset))
        if expected != tuple(record.profile):
            problems.append(f"{label}: class sizes {record.profile} do not conserve {expected}")
        declared = Counter(record.target_multiset)
        if record.fallback != FallbackStage.EQUITABLE and declared != Counter(record.region_multiset):
            problems.append(f"{label}: region colors differ from the declared multiset")
        if max(record.profile, default=0) - min(record.profile, default=0) > 1:
            problems.append(f"{label}: class sizes {record.profile} are not equitable")

    if not is_equitable(g, coloring):
        problems.append("final coloring is not equitable")
    top = [record for record in trace if record.depth == 0]
    if top:
        final = tuple(coloring.class_sizes()[color] for color in range(1, coloring.k + 1))
        if sorted(top[-1].profile) != sorted(final):
            problems.append(f"top-level class sizes {top[-1].profile} differ from the final coloring {final}")
    return problems
