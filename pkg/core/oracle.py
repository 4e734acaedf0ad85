"""Brute-force ground truth for small graphs.

Nothing here goes through the decomposition or the reductions: equitable
colorability is decided by plain backtracking, K4 minors by searching branch
sets directly, and small graphs are enumerated edge mask by edge mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import TYPE_CHECKING

from core.errors import GraphInputError
from core.graph_core import Coloring, Graph

if TYPE_CHECKING:
    from collections.abc import Iterator


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    witness: Coloring | None = None
    nodes_explored: int = 0


def oracle_equitable(g: Graph, k: int) -> OracleResult:
    """Decide whether ``g`` has an equitable proper k-coloring."""
    if k < 1:
        msg = f"Number of colors must be positive, got {k}"
        raise GraphInputError(msg)

    n = len(g)
    quotient, remainder = divmod(n, k)
    order = sorted(g.vertices, key=lambda v: (-g.degree(v), v))
    colors: dict[int, int] = {}
    sizes = [0] * (k + 1)
    nodes = 0

    def fits(color: int) -> bool:
        size = sizes[color]
        if size == quotient:
            full = sum(1 for other in range(1, k + 1) if sizes[other] > quotient)
            return full < remainder
        return size < quotient

    def backtrack(index: int, opened: int) -> bool:
        nonlocal nodes
        nodes += 1
        if index == n:
            return True
        vertex = order[index]
        blocked = {colors[nbr] for nbr in g.neighbors(vertex) if nbr in colors}
        # Colors beyond the first unused one are interchangeable with it.
        for color in range(1, min(opened + 1, k) + 1):
            if color in blocked or not fits(color):
                continue
            colors[vertex] = color
            sizes[color] += 1
            deficit = sum(max(0, quotient - sizes[other]) for other in range(1, k + 1))
            if deficit <= n - index - 1 and backtrack(index + 1, max(opened, color)):
                return True
            del colors[vertex]
            sizes[color] -= 1
        return False

    if backtrack(0, 0):
        return OracleResult(feasible=True, witness=Coloring(k, colors), nodes_explored=nodes)
    return OracleResult(feasible=False, nodes_explored=nodes)


def _masks(g: Graph) -> tuple[list[int], list[int]]:
    vertices = g.sorted_vertices()
    index = {v: position for position, v in enumerate(vertices)}
    adjacency = [0] * len(vertices)
    for u, v in g.edges:
        adjacency[index[u]] |= 1 << index[v]
        adjacency[index[v]] |= 1 << index[u]
    return vertices, adjacency


def _is_connected_mask(mask: int, adjacency: list[int]) -> bool:
    start = mask & -mask
    reached = start
    frontier = start
    while frontier:
        bit = frontier & -frontier
        frontier ^= bit
        grown = adjacency[bit.bit_length() - 1] & mask & ~reached
        reached |= grown
        frontier |= grown
    return reached == mask


def oracle_k4_minor(g: Graph) -> bool:
    """Search four disjoint connected vertex sets, pairwise joined by an edge."""
    if len(g) < 4 or g.number_of_edges() < 6:  # noqa: PLR2004
        return False
    vertices, adjacency = _masks(g)
    sets = [mask for mask in range(1, 1 << len(vertices)) if _is_connected_mask(mask, adjacency)]
    reach = {}
    for mask in sets:
        around = 0
        rest = mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            around |= adjacency[bit.bit_length() - 1]
        reach[mask] = around & ~mask
    sets.sort(key=lambda mask: ((mask & -mask).bit_length(), mask))

    def lowest(mask: int) -> int:
        return (mask & -mask).bit_length()

    def extend(chosen: list[int], used: int) -> bool:
        if len(chosen) == 4:  # noqa: PLR2004
            return True
        floor = lowest(chosen[-1]) if chosen else 0
        for mask in sets:
            if lowest(mask) <= floor or mask & used:
                continue
            if all(reach[mask] & other for other in chosen) and extend([*chosen, mask], used | mask):
                return True
        return False

    return extend([], 0)


def enumerate_connected_graphs(n: int) -> Iterator[Graph]:
    """Every labeled connected simple graph on vertices ``0..n-1``, once each."""
    if n < 1:
        return
    pairs = list(combinations(range(n), 2))
    full = (1 << n) - 1
    for edge_mask in range(1 << len(pairs)):
        adjacency = [0] * n
        chosen = []
        for position, (u, v) in enumerate(pairs):
            if edge_mask >> position & 1:
                adjacency[u] |= 1 << v
                adjacency[v] |= 1 << u
                chosen.append((u, v))
        if _is_connected_mask(full, adjacency):
            yield Graph(range(n), chosen)
