"""Normal form of SP trees.

A node is in normal form when its graph minus the poles is connected, or when
it is a parallel join whose children carry one component each plus at most one
pole-edge leaf. ``normalize`` splits every node into such per-component pieces
and then merges same-kind nesting, so parallel joins only have serial joins and
leaves below them.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import networkx as nx

from core.sp_tree import NodeKind, SPNode, SPTree, leaf, parallel, relabel, series

if TYPE_CHECKING:
    from collections.abc import Sequence


def normalize(t: SPTree) -> SPTree:
    """Normal form of ``t`` built by splitting components, not by node-by-node rewriting.

    Guarantees: the root poles and the realized graph (virtual edges included)
    are unchanged; every node passes ``is_normal_form``, so a node whose inner
    vertices are disconnected is a parallel join with one child per component
    plus at most one pole-edge leaf.
    """
    return SPTree(_normalize_node(t.root))


def _normalize_node(node: SPNode) -> SPNode:
    pieces, edge = _split(node)
    children = [_normalize_piece(piece) for piece in pieces]
    if edge is not None:
        children.append(edge)
    if not children:
        return leaf(*node.poles, has_edge=False)
    return parallel(children)


def _normalize_piece(piece: SPNode) -> SPNode:
    """A piece is a serial join whose inner vertices form one component."""
    if piece.kind is not NodeKind.SERIES:
        return _normalize_node(piece)
    return series(_normalize_node(child) for child in piece.children)


def _edge_leaf(edges: Sequence[SPNode], poles: tuple[int, int]) -> SPNode | None:
    if not edges:
        return None
    return leaf(*poles, virtual=all(edge.virtual for edge in edges))


def _split(node: SPNode) -> tuple[list[SPNode], SPNode | None]:
    """Pieces of ``node``, one per component of its graph minus the poles, and the pole-edge leaf."""
    match node.kind:
        case NodeKind.LEAF:
            return [], node if node.has_edge else None
        case NodeKind.PARALLEL:
            pieces: list[SPNode] = []
            edges: list[SPNode] = []
            for child in node.children:
                child_pieces, child_edge = _split(child)
                pieces.extend(child_pieces)
                if child_edge is not None:
                    edges.append(child_edge)
            return pieces, _edge_leaf(edges, node.poles)
        case _:
            return _split_series(node), None


class _ChainGroups:
    """Union-find over the inner chain poles ``1..m-1`` of a serial join."""

    def __init__(self, size: int) -> None:
        self.parent = list(range(size + 1))

    def find(self, index: int) -> int:
        while self.parent[index] != index:
            self.parent[index] = self.parent[self.parent[index]]
            index = self.parent[index]
        return index

    def union(self, first: int, second: int) -> None:
        root_first, root_second = self.find(first), self.find(second)
        if root_first != root_second:
            self.parent[max(root_first, root_second)] = min(root_first, root_second)


def _split_series(node: SPNode) -> list[SPNode]:
    children = node.children
    m = len(children)
    chain = [children[0].poles[0], *(child.poles[1] for child in children)]
    a, b = node.poles
    groups = _ChainGroups(m - 1)

    # Items attached to chain poles: (child position, tree); standalone pieces keep their child position too.
    attached: list[tuple[int, int, SPNode]] = []
    standalone: list[tuple[int, SPNode]] = []
    for position, child in enumerate(children, start=1):
        left, right = position - 1, position
        left_inner, right_inner = left >= 1, right <= m - 1
        child_pieces, child_edge = _split(child)
        for piece in child_pieces:
            anchors = []
            if left_inner and piece.touches(chain[left]):
                anchors.append(left)
            if right_inner and piece.touches(chain[right]):
                anchors.append(right)
            if anchors:
                if len(anchors) == 2:  # noqa: PLR2004
                    groups.union(*anchors)
                attached.append((anchors[0], position, piece))
            else:
                standalone.append((position, piece))
        if child_edge is not None:
            anchors = [index for index, inner in ((left, left_inner), (right, right_inner)) if inner]
            if len(anchors) == 2:  # noqa: PLR2004
                groups.union(*anchors)
            attached.append((anchors[0], position, child_edge))

    members: dict[int, dict[int, list[SPNode]]] = {}
    for anchor, position, tree in attached:
        members.setdefault(groups.find(anchor), {}).setdefault(position, []).append(tree)

    # A chain pole without incident edges is a component of its own.
    pieces: list[SPNode] = [
        series([leaf(a, chain[index], has_edge=False), leaf(chain[index], b, has_edge=False)])
        for index in range(1, m)
        if groups.find(index) not in members
    ]
    for root_anchor in sorted(members):
        anchors = [index for index in range(1, m) if groups.find(index) == root_anchor]
        first, last = min(anchors), max(anchors)
        by_position = members[root_anchor]
        segments = []
        for position in range(first, last + 2):
            trees = by_position.get(position, [])
            start, end = chain[position - 1], chain[position]
            segment = parallel(trees) if trees else leaf(start, end, has_edge=False)
            mapping = {}
            if position == first and start != a:
                mapping[start] = a
            if position == last + 1 and end != b:
                mapping[end] = b
            segments.append(relabel(segment, mapping) if mapping else segment)
        pieces.append(series(segments))

    for position, piece in standalone:
        start, end = chain[position - 1], chain[position]
        mapping = {}
        if start != a:
            mapping[start] = a
        if end != b:
            mapping[end] = b
        pieces.append(relabel(piece, mapping) if mapping else piece)
    return pieces


def is_normal_form(t: SPTree) -> bool:
    return all(_node_in_normal_form(node) for node in t.root.walk())


def _node_in_normal_form(node: SPNode) -> bool:
    a, b = node.poles
    graph = nx.Graph()
    graph.add_nodes_from(node.inner)
    graph.add_edges_from((u, v) for u, v in node.edges if u not in node.poles and v not in node.poles)
    components = [frozenset(c) for c in nx.connected_components(graph)]
    if len(components) <= 1:
        return True
    if node.kind is not NodeKind.PARALLEL:
        return False

    pole_edge = (min(a, b), max(a, b)) in node.edges
    edge_leaves = [child for child in node.children if child.is_leaf]
    if any(not child.has_edge for child in edge_leaves) or len(edge_leaves) != int(pole_edge):
        return False

    inner_children = [child for child in node.children if not child.is_leaf]
    if sorted(map(sorted, (child.inner for child in inner_children))) != sorted(map(sorted, components)):
        return False
    for child in inner_children:
        expected = {
            edge
            for edge in node.edges
            if set(edge) <= child.inner | {a, b} and set(edge) != {a, b}
        }
        if set(child.edges) != expected:
            return False
    return True
