"""Decomposition of connected K4-minor-free graphs into SP trees.

The graph is reduced as a skeleton multigraph whose edges carry SP trees:
a skeleton vertex of degree two becomes a serial join, parallel skeleton edges
merge into a parallel join, and a pendant vertex is absorbed into another edge
at its neighbor through an edgeless leaf. When two skeleton vertices remain,
the tree on their edge is the decomposition.
"""

from __future__ import annotations

import heapq

from loguru import logger

from core.errors import GraphInputError, K4MinorError
from core.graph_core import Graph, has_k4_minor
from core.sp_tree import SPNode, SPTree, leaf, parallel, reroot, reverse, series


class _Skeleton:
    """Simple graph whose edges carry trees with matching poles."""

    def __init__(self, g: Graph) -> None:
        self.adjacency: dict[int, set[int]] = {v: set() for v in g.vertices}
        self.trees: dict[tuple[int, int], SPNode] = {}
        for u, v in g.edges:
            self.add(u, v, leaf(u, v))

    def tree(self, u: int, v: int) -> SPNode:
        """Tree of the skeleton edge ``uv`` oriented from ``u`` to ``v``."""
        node = self.trees[(u, v) if u < v else (v, u)]
        return node if node.poles[0] == u else reverse(node)

    def add(self, u: int, v: int, node: SPNode) -> None:
        key = (u, v) if u < v else (v, u)
        existing = self.trees.get(key)
        if existing is not None:
            oriented = node if node.poles == existing.poles else reverse(node)
            node = parallel([existing, oriented])
        self.trees[key] = node
        self.adjacency[u].add(v)
        self.adjacency[v].add(u)

    def take(self, u: int, v: int) -> SPNode:
        """Remove the skeleton edge ``uv`` and return its tree oriented from ``u`` to ``v``."""
        node = self.tree(u, v)
        del self.trees[(u, v) if u < v else (v, u)]
        self.adjacency[u].discard(v)
        self.adjacency[v].discard(u)
        return node

    def remove_vertex(self, w: int) -> None:
        for nbr in sorted(self.adjacency[w]):
            self.take(w, nbr)
        del self.adjacency[w]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def decompose(g: Graph, root_pole: int | None = None) -> SPTree:
    """SP tree realizing exactly ``g``; with ``root_pole`` the tree is rerooted there."""
    if len(g) < 2:  # noqa: PLR2004
        msg = f"Decomposition needs at least two vertices, got {len(g)}"
        raise GraphInputError(msg)
    if not g.is_connected():
        msg = "Decomposition needs a connected graph"
        raise GraphInputError(msg)
    if has_k4_minor(g):
        msg = "Graph has a K4 minor and admits no SP decomposition"
        raise K4MinorError(msg)

    skeleton = _Skeleton(g)
    heap = list(g.vertices)
    heapq.heapify(heap)
    while len(skeleton.adjacency) > 2:  # noqa: PLR2004
        if not heap:
            msg = "Skeleton reduction stalled; the graph has a K4 minor"
            raise K4MinorError(msg)
        w = heapq.heappop(heap)
        if w not in skeleton.adjacency or skeleton.degree(w) > 2:  # noqa: PLR2004
            continue
        for touched in _reduce_vertex(skeleton, w):
            heapq.heappush(heap, touched)

    u, v = sorted(skeleton.adjacency)
    tree = SPTree(skeleton.tree(u, v))
    logger.debug("Decomposed graph n={} into tree with poles {}", len(g), tree.poles)
    if root_pole is not None:
        tree = reroot(tree, root_pole)
    return tree


def _reduce_vertex(skeleton: _Skeleton, w: int) -> list[int]:
    nbrs = sorted(skeleton.adjacency[w])
    if len(nbrs) == 2:  # noqa: PLR2004
        x, y = nbrs
        joined = series([skeleton.take(x, w), skeleton.take(w, y)])
        skeleton.remove_vertex(w)
        skeleton.add(x, y, joined)
        return [x, y]

    (u,) = nbrs
    z = min(skeleton.adjacency[u] - {w})
    pendant = series([skeleton.take(u, w), leaf(w, z, has_edge=False)])
    absorbed = parallel([skeleton.take(u, z), pendant])
    skeleton.remove_vertex(w)
    skeleton.add(u, z, absorbed)
    return [u, z]
