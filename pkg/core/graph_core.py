"""Simple undirected graphs, colorings and the primitives every reduction is built from.

Graphs are immutable: each primitive returns a new graph. Vertex ids are
non-negative integers and stay stable across deletions; contraction allocates
a fresh id one above the current maximum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import TYPE_CHECKING

import networkx as nx

from core.errors import GraphInputError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

type Vertex = int
type Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph backed by a frozen ``networkx.Graph``."""

    __slots__ = ("_graph",)

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()) -> None:
        graph = nx.Graph()
        for vertex in vertices:
            graph.add_node(_check_vertex_id(vertex))
        for u, v in edges:
            if u == v:
                msg = f"Self-loop on vertex {u} is not allowed"
                raise GraphInputError(msg)
            graph.add_edge(_check_vertex_id(u), _check_vertex_id(v))
        self._graph = nx.freeze(graph)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> Graph:
        if graph.is_directed() or graph.is_multigraph():
            msg = "Only simple undirected graphs are supported"
            raise GraphInputError(msg)
        return cls(graph.nodes, graph.edges)

    @property
    def nx_graph(self) -> nx.Graph:
        """Frozen networkx view; mutating it raises ``networkx.NetworkXError``."""
        return self._graph

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._graph.nodes)

    def sorted_vertices(self) -> list[int]:
        return sorted(self._graph.nodes)

    @property
    def edges(self) -> list[Edge]:
        return sorted(normalize_edge(u, v) for u, v in self._graph.edges)

    @property
    def max_degree(self) -> int:
        return max((degree for _, degree in self._graph.degree), default=0)

    def neighbors(self, vertex: int) -> frozenset[int]:
        self._require(vertex)
        return frozenset(self._graph.adj[vertex])

    def degree(self, vertex: int) -> int:
        self._require(vertex)
        return len(self._graph.adj[vertex])

    def has_vertex(self, vertex: int) -> bool:
        return vertex in self._graph

    def has_edge(self, u: int, v: int) -> bool:
        return self._graph.has_edge(u, v)

    def number_of_edges(self) -> int:
        return self._graph.number_of_edges()

    def is_connected(self) -> bool:
        return len(self) > 0 and nx.is_connected(self._graph)

    def components(self) -> list[frozenset[int]]:
        """Connected components ordered by their smallest vertex."""
        return sorted((frozenset(c) for c in nx.connected_components(self._graph)), key=min)

    def subgraph(self, vertices: Iterable[int]) -> Graph:
        keep = set(vertices)
        missing = keep - self.vertices
        if missing:
            msg = f"Vertices {sorted(missing)} are not in the graph"
            raise GraphInputError(msg)
        return Graph(keep, self._graph.subgraph(keep).edges)

    def fresh_vertex(self) -> int:
        return max(self._graph.nodes, default=-1) + 1

    def _require(self, vertex: int) -> None:
        if vertex not in self._graph:
            msg = f"Vertex {vertex} is not in the graph"
            raise GraphInputError(msg)

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    def __iter__(self) -> Iterator[int]:
        return iter(self.sorted_vertices())

    def __contains__(self, vertex: object) -> bool:
        return vertex in self._graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and set(self.edges) == set(other.edges)

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.edges)))

    def __repr__(self) -> str:
        return f"Graph(n={len(self)}, m={self.number_of_edges()})"


def _check_vertex_id(vertex: object) -> int:
    if isinstance(vertex, bool) or not isinstance(vertex, int) or vertex < 0:
        msg = f"Vertex ids must be non-negative integers, got {vertex!r}"
        raise GraphInputError(msg)
    return vertex


@dataclass(frozen=True)
class ColorProfile:
    sizes: Mapping[int, int]
    ordered: bool

    @property
    def total(self) -> int:
        return sum(self.sizes.values())

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.sizes[color] for color in sorted(self.sizes))


@dataclass(frozen=True)
class Coloring:
    """Total map from vertices to colors ``1..k``."""

    k: int
    assignment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.k < 1:
            msg = f"Number of colors must be positive, got {self.k}"
            raise GraphInputError(msg)
        frozen = MappingProxyType(dict(self.assignment))
        for vertex, color in frozen.items():
            if not 1 <= color <= self.k:
                msg = f"Color {color} of vertex {vertex} is outside 1..{self.k}"
                raise GraphInputError(msg)
        object.__setattr__(self, "assignment", frozen)

    def color(self, vertex: int) -> int:
        try:
            return self.assignment[vertex]
        except KeyError:
            msg = f"Vertex {vertex} has no color"
            raise GraphInputError(msg) from None

    def class_sizes(self) -> dict[int, int]:
        counts = Counter(self.assignment.values())
        return {color: counts.get(color, 0) for color in range(1, self.k + 1)}

    def profile(self) -> ColorProfile:
        sizes = self.class_sizes()
        values = [sizes[color] for color in range(1, self.k + 1)]
        ordered = all(a <= b for a, b in zip(values, values[1:], strict=False))
        return ColorProfile(sizes=MappingProxyType(sizes), ordered=ordered)

    def restrict(self, vertices: Iterable[int]) -> Coloring:
        return Coloring(self.k, {v: self.assignment[v] for v in vertices if v in self.assignment})

    def with_colors(self, updates: Mapping[int, int]) -> Coloring:
        merged = dict(self.assignment)
        merged.update(updates)
        return Coloring(self.k, merged)

    def __len__(self) -> int:
        return len(self.assignment)


def target_profile(n: int, k: int) -> tuple[int, ...]:
    """Class sizes of an increasingly ordered equitable k-coloring of n vertices."""
    quotient, remainder = divmod(n, k)
    return tuple([quotient] * (k - remainder) + [quotient + 1] * remainder)


def required_colors(max_degree: int) -> int:
    """Smallest k with ``k >= ceil((max_degree + 3) / 2)``."""
    return (max_degree + 4) // 2


def is_proper(g: Graph, c: Coloring) -> bool:
    _require_total(g, c)
    return all(c.assignment[u] != c.assignment[v] for u, v in g.nx_graph.edges)


def is_equitable(g: Graph, c: Coloring) -> bool:
    """Proper and all k class sizes (empty classes included) within one of each other."""
    if not is_proper(g, c):
        return False
    sizes = Counter(c.assignment[v] for v in g.vertices)
    counts = [sizes.get(color, 0) for color in range(1, c.k + 1)]
    return max(counts) - min(counts) <= 1


def _require_total(g: Graph, c: Coloring) -> None:
    missing = g.vertices - c.assignment.keys()
    if missing:
        msg = f"Coloring is partial: {len(missing)} vertices uncolored (e.g. {min(missing)})"
        raise GraphInputError(msg)


def has_k4_minor(g: Graph) -> bool:
    """Series-parallel reduction: delete degree <= 1, suppress degree 2, merge duplicate edges."""
    adjacency = {v: set(g.nx_graph.adj[v]) for v in g.nx_graph.nodes}
    pending = [v for v, nbrs in adjacency.items() if len(nbrs) <= 2]  # noqa: PLR2004
    while pending:
        vertex = pending.pop()
        nbrs = adjacency.get(vertex)
        if nbrs is None or len(nbrs) > 2:  # noqa: PLR2004
            continue
        del adjacency[vertex]
        for nbr in nbrs:
            adjacency[nbr].discard(vertex)
        if len(nbrs) == 2:  # noqa: PLR2004
            x, y = nbrs
            adjacency[x].add(y)
            adjacency[y].add(x)
        pending.extend(nbrs)
    return bool(adjacency)


def contract_set(g: Graph, s: Iterable[int]) -> tuple[Graph, int]:
    """Replace ``s`` by one fresh vertex adjacent to every outside neighbor of ``s``."""
    contracted = set(s)
    if not contracted:
        msg = "Cannot contract an empty vertex set"
        raise GraphInputError(msg)
    missing = contracted - g.vertices
    if missing:
        msg = f"Vertices {sorted(missing)} are not in the graph"
        raise GraphInputError(msg)

    fresh = g.fresh_vertex()
    boundary = {nbr for v in contracted for nbr in g.nx_graph.adj[v]} - contracted
    kept = g.vertices - contracted
    edges = [(u, v) for u, v in g.nx_graph.edges if u in kept and v in kept]
    edges.extend((fresh, nbr) for nbr in boundary)
    return Graph([*kept, fresh], edges), fresh


def delete_set(g: Graph, s: Iterable[int]) -> Graph:
    removed = set(s)
    missing = removed - g.vertices
    if missing:
        msg = f"Vertices {sorted(missing)} are not in the graph"
        raise GraphInputError(msg)
    return g.subgraph(g.vertices - removed)


def add_edge(g: Graph, u: int, v: int) -> Graph:
    return add_edges(g, [(u, v)])


def add_edges(g: Graph, edges: Iterable[tuple[int, int]]) -> Graph:
    new_edges = list(edges)
    for u, v in new_edges:
        if u not in g or v not in g:
            msg = f"Cannot add edge {u}-{v}: endpoint absent"
            raise GraphInputError(msg)
    return Graph(g.vertices, [*g.edges, *new_edges])


def sort_colors_increasing(c: Coloring) -> Coloring:
    """Rename colors so class sizes are nondecreasing in the color index.

    The sort is stable on the old color index, so an already ordered coloring
    is returned unchanged.
    """
    sizes = c.class_sizes()
    order = sorted(range(1, c.k + 1), key=lambda color: (sizes[color], color))
    renaming = {old: new for new, old in enumerate(order, start=1)}
    return Coloring(c.k, {v: renaming[color] for v, color in c.assignment.items()})
