"""SP-decomposition trees of two-terminal graphs.

A tree is built from leaves (two poles, with or without an edge between them),
serial joins (S-nodes, children chained left to right) and parallel joins
(P-nodes, children sharing both poles). Leaves may be marked ``virtual``: such
an edge belongs to the realized supergraph but not to the source graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

from core.errors import GraphInputError, StructuralError
from core.graph_core import Edge, Graph, normalize_edge

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping


class NodeKind(StrEnum):
    LEAF = "leaf"
    SERIES = "S"
    PARALLEL = "P"


@dataclass(frozen=True, eq=False)
class SPNode:
    kind: NodeKind
    poles: tuple[int, int]
    children: tuple[SPNode, ...] = ()
    has_edge: bool = False
    virtual: bool = False
    vertices: frozenset[int] = field(init=False, repr=False)
    edges: frozenset[Edge] = field(init=False, repr=False)
    real_edges: frozenset[Edge] = field(init=False, repr=False)
    width: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        a, b = self.poles
        if a == b:
            msg = f"Poles of a node must differ, got ({a}, {b})"
            raise StructuralError(msg)
        match self.kind:
            case NodeKind.LEAF:
                self._init_leaf()
            case NodeKind.SERIES:
                self._init_series()
            case NodeKind.PARALLEL:
                self._init_parallel()
        object.__setattr__(self, "width", len(self.vertices) - 2)

    def _init_leaf(self) -> None:
        if self.children:
            msg = "Leaves cannot have children"
            raise StructuralError(msg)
        if self.virtual and not self.has_edge:
            msg = "Only leaves carrying an edge can be virtual"
            raise StructuralError(msg)
        edge = normalize_edge(*self.poles)
        object.__setattr__(self, "vertices", frozenset(self.poles))
        object.__setattr__(self, "edges", frozenset([edge]) if self.has_edge else frozenset())
        object.__setattr__(self, "real_edges", frozenset([edge]) if self.has_edge and not self.virtual else frozenset())

    def _init_series(self) -> None:
        children = self._require_children()
        for left, right in zip(children, children[1:], strict=False):
            if left.poles[1] != right.poles[0]:
                msg = f"Serial join breaks the pole chain: {left.poles} then {right.poles}"
                raise StructuralError(msg)
        if (children[0].poles[0], children[-1].poles[1]) != self.poles:
            msg = f"Serial join poles {self.poles} do not match the chain ends"
            raise StructuralError(msg)
        vertices = frozenset().union(*(child.vertices for child in children))
        if len(vertices) != sum(len(child.vertices) for child in children) - (len(children) - 1):
            msg = f"Children of the serial join at {self.poles} share vertices other than chain poles"
            raise StructuralError(msg)
        self._set_union(vertices)

    def _init_parallel(self) -> None:
        children = self._require_children()
        for child in children:
            if child.poles != self.poles:
                msg = f"Parallel join at {self.poles} has a child with poles {child.poles}"
                raise StructuralError(msg)
        vertices = frozenset().union(*(child.vertices for child in children))
        if len(vertices) - 2 != sum(child.width for child in children):
            msg = f"Children of the parallel join at {self.poles} share inner vertices"
            raise StructuralError(msg)
        self._set_union(vertices)

    def _require_children(self) -> tuple[SPNode, ...]:
        if len(self.children) < 2:  # noqa: PLR2004
            msg = f"{self.kind} node at {self.poles} needs at least two children"
            raise StructuralError(msg)
        return self.children

    def _set_union(self, vertices: frozenset[int]) -> None:
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset().union(*(child.edges for child in self.children)))
        object.__setattr__(self, "real_edges", frozenset().union(*(child.real_edges for child in self.children)))

    @property
    def is_leaf(self) -> bool:
        return self.kind is NodeKind.LEAF

    @property
    def is_edge_leaf(self) -> bool:
        return self.kind is NodeKind.LEAF and self.has_edge

    @property
    def inner(self) -> frozenset[int]:
        return self.vertices - set(self.poles)

    @property
    def virtual_edges(self) -> frozenset[Edge]:
        return self.edges - self.real_edges

    def touches(self, vertex: int) -> bool:
        """True when some realized edge of this node is incident to ``vertex``."""
        return any(vertex in edge for edge in self.edges)

    def walk(self) -> Iterator[SPNode]:
        """Preorder traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass(frozen=True)
class SPTree:
    root: SPNode

    @property
    def poles(self) -> tuple[int, int]:
        return self.root.poles

    @property
    def vertices(self) -> frozenset[int]:
        return self.root.vertices

    @property
    def virtual_edges(self) -> frozenset[Edge]:
        return self.root.virtual_edges


def leaf(a: int, b: int, *, has_edge: bool = True, virtual: bool = False) -> SPNode:
    return SPNode(NodeKind.LEAF, (a, b), has_edge=has_edge, virtual=virtual)


def series(children: Iterable[SPNode]) -> SPNode:
    """Serial join, splicing nested serial children; a single child is returned as is."""
    flat: list[SPNode] = []
    for child in children:
        if child.kind is NodeKind.SERIES:
            flat.extend(child.children)
        else:
            flat.append(child)
    if not flat:
        msg = "Serial join needs at least one child"
        raise StructuralError(msg)
    if len(flat) == 1:
        return flat[0]
    return SPNode(NodeKind.SERIES, (flat[0].poles[0], flat[-1].poles[1]), tuple(flat))


def parallel(children: Iterable[SPNode]) -> SPNode:
    """Parallel join, splicing nested parallel children; a single child is returned as is."""
    flat: list[SPNode] = []
    for child in children:
        if child.kind is NodeKind.PARALLEL:
            flat.extend(child.children)
        else:
            flat.append(child)
    if not flat:
        msg = "Parallel join needs at least one child"
        raise StructuralError(msg)
    if len(flat) == 1:
        return flat[0]
    return SPNode(NodeKind.PARALLEL, flat[0].poles, tuple(flat))


def reverse(node: SPNode) -> SPNode:
    """Swap the roles of the two poles."""
    a, b = node.poles
    match node.kind:
        case NodeKind.LEAF:
            return SPNode(NodeKind.LEAF, (b, a), has_edge=node.has_edge, virtual=node.virtual)
        case NodeKind.SERIES:
            return SPNode(NodeKind.SERIES, (b, a), tuple(reverse(child) for child in reversed(node.children)))
        case _:
            return SPNode(NodeKind.PARALLEL, (b, a), tuple(reverse(child) for child in node.children))


def relabel(node: SPNode, mapping: Mapping[int, int]) -> SPNode:
    """Rename vertices; the mapping must not merge two vertices of the node."""
    a, b = node.poles
    poles = (mapping.get(a, a), mapping.get(b, b))
    if node.is_leaf:
        return SPNode(NodeKind.LEAF, poles, has_edge=node.has_edge, virtual=node.virtual)
    return SPNode(node.kind, poles, tuple(relabel(child, mapping) for child in node.children))


def realize(t: SPTree) -> tuple[Graph, tuple[int, int]]:
    """Two-terminal graph of the tree, virtual edges included."""
    return Graph(t.root.vertices, t.root.edges), t.root.poles


def source_graph(t: SPTree) -> Graph:
    """Realized graph without the virtual edges."""
    return Graph(t.root.vertices, t.root.real_edges)


def reroot(t: SPTree, v: int) -> SPTree:
    """Rebuild the tree so that ``v`` is a pole of the root.

    A leaf incident to ``v`` becomes a child of the new root; its sibling is the
    complement of that leaf in the original tree, assembled bottom-up along the
    path from the old root.
    """
    root = t.root
    if v not in root.vertices:
        msg = f"Vertex {v} is not in the tree"
        raise GraphInputError(msg)
    if v in root.poles:
        return t

    path = _path_to_leaf(root, v, first_pole=True) or _path_to_leaf(root, v, first_pole=False)
    if path is None:
        msg = f"No leaf of the tree is incident to vertex {v}"
        raise StructuralError(msg)

    complement = leaf(*root.poles, has_edge=False)
    target = root
    for parent, index in path:
        complement = _child_complement(parent, index, complement)
        target = parent.children[index]

    if target.poles[0] != v:
        target, complement = reverse(target), reverse(complement)
    return SPTree(parallel([target, complement]))


def _path_to_leaf(root: SPNode, v: int, *, first_pole: bool) -> list[tuple[SPNode, int]] | None:
    def matches(node: SPNode) -> bool:
        return node.poles[0] == v if first_pole else v in node.poles

    stack: list[tuple[SPNode, list[tuple[SPNode, int]]]] = [(root, [])]
    while stack:
        node, path = stack.pop()
        if node.is_leaf:
            if matches(node):
                return path
            continue
        for index in reversed(range(len(node.children))):
            child = node.children[index]
            if v in child.vertices:
                stack.append((child, [*path, (node, index)]))
    return None


def _child_complement(parent: SPNode, index: int, parent_complement: SPNode) -> SPNode:
    """Everything outside ``parent.children[index]`` as a two-terminal graph on the child's poles."""
    if parent.kind is NodeKind.PARALLEL:
        siblings = [child for position, child in enumerate(parent.children) if position != index]
        return parallel([*siblings, parent_complement])

    parts: list[SPNode] = []
    before = parent.children[:index]
    after = parent.children[index + 1 :]
    if before:
        parts.append(reverse(series(before)))
    parts.append(parent_complement)
    if after:
        parts.append(reverse(series(after)))
    return series(parts)


def canonical_children(node: SPNode) -> tuple[SPNode, ...]:
    """Children in serialization order: P-children sorted by smallest vertex id, S order kept."""
    if node.kind is NodeKind.PARALLEL:
        return tuple(sorted(node.children, key=lambda child: (min(child.inner, default=-1), child.is_leaf)))
    return node.children


def mark_virtual(node: SPNode, edges: Iterable[Edge]) -> SPNode:
    """Copy of ``node`` whose leaves on ``edges`` are marked virtual."""
    marked = {normalize_edge(u, v) for u, v in edges}

    def visit(current: SPNode) -> SPNode:
        if current.is_leaf:
            virtual = current.has_edge and (current.virtual or normalize_edge(*current.poles) in marked)
            return SPNode(NodeKind.LEAF, current.poles, has_edge=current.has_edge, virtual=virtual)
        return SPNode(current.kind, current.poles, tuple(visit(child) for child in current.children))

    return visit(node)
