"""Reduction sites: subtrees of a normalized tree whose graph is just wide enough.

A site is searched at a *minimal* node, a node of width at least ``k - 1`` whose
children are all narrower. Parallel sites take a set of children (the pole edge
leaf always included) and serial sites take a window of consecutive children.
Sites come out in a deterministic order, the preferred one first.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from loguru import logger

from core.errors import GraphInputError
from core.gadgets import classify_gadget
from core.graph_core import Graph
from core.solver_types import JoinKind, ReductionSite
from core.sp_tree import NodeKind, SPNode, SPTree, parallel, series

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence


def find_reduction_site(t: SPTree, k: int) -> ReductionSite:
    site = next(candidate_sites(t, k), None)
    if site is None:
        msg = f"Tree of width {t.root.width} has no reduction site for k={k}"
        raise GraphInputError(msg)
    return site


def candidate_sites(t: SPTree, k: int) -> Iterator[ReductionSite]:
    for node in minimal_nodes(t.root, k):
        if node.kind is NodeKind.PARALLEL:
            yield from _parallel_sites(node, k)
        else:
            yield from _series_sites(node, k)


def minimal_nodes(root: SPNode, k: int) -> list[SPNode]:
    """Nodes of width >= k-1 without a child of width >= k-1, in preorder."""
    found: list[SPNode] = []
    stack = [root] if root.width >= k - 1 else []
    while stack:
        node = stack.pop()
        wide = [child for child in node.children if child.width >= k - 1]
        if wide:
            stack.extend(reversed(wide))
        else:
            found.append(node)
    return found


def make_site(
    parts: Sequence[SPNode],
    k: int,
    join_kind: JoinKind,
    *,
    node: SPNode | None = None,
    first: Sequence[SPNode] = (),
    second: Sequence[SPNode] = (),
) -> ReductionSite:
    """Site for a parallel set of children, a serial window split as ``first + second``, or one subtree."""
    middle: int | None = None
    match join_kind:
        case JoinKind.PARALLEL:
            joined = parallel(parts)
            first_inner = frozenset().union(*(part.inner for part in first))
            second_inner = frozenset().union(*(part.inner for part in second))
        case JoinKind.SERIES:
            joined = series(parts)
            middle = first[-1].poles[1]
            first_inner = series(first).inner
            second_inner = series(second).inner
        case _:
            (joined,) = parts
            first_inner = second_inner = frozenset()
    graph = Graph(joined.vertices, joined.real_edges)
    return ReductionSite(
        node=node or joined,
        parts=tuple(parts),
        poles=joined.poles,
        graph=graph,
        k=k,
        gadget=classify_gadget(graph, joined.poles),
        join_kind=join_kind,
        first_inner=first_inner,
        second_inner=second_inner,
        middle=middle,
    )


def atomic_site(node: SPNode, k: int) -> ReductionSite:
    return make_site([node], k, JoinKind.ATOMIC)


def is_two_edge_path(node: SPNode) -> bool:
    return node.width == 1 and len(node.edges) == 2  # noqa: PLR2004


def _subset_with_width(children: Sequence[SPNode], target: int) -> list[SPNode] | None:
    """First subset (in child order) whose widths sum to ``target``."""
    reachable: dict[int, list[int]] = {0: []}
    for index, child in enumerate(children):
        for total, chosen in list(reachable.items()):
            reached = total + child.width
            if reached <= target and reached not in reachable:
                reachable[reached] = [*chosen, index]
    if target not in reachable:
        return None
    return [children[index] for index in reachable[target]]


def _parallel_sites(node: SPNode, k: int) -> Iterator[ReductionSite]:
    edge_leaves = [child for child in node.children if child.is_edge_leaf]
    components = [child for child in node.children if not child.is_leaf]
    seen: set[frozenset[int]] = set()

    def emit(chosen: list[SPNode]) -> Iterator[ReductionSite]:
        key = frozenset(id(child) for child in chosen)
        if len(chosen) < 2 or key in seen:  # noqa: PLR2004
            return
        seen.add(key)
        first, second = chosen[:-1], chosen[-1:]
        yield make_site([*chosen, *edge_leaves], k, JoinKind.PARALLEL, node=node, first=first, second=second)

    paths = [child for child in components if is_two_edge_path(child)]
    if k >= 3 and len(paths) >= k - 1:  # noqa: PLR2004
        yield from emit(paths[: k - 1])

    exact = _subset_with_width(components, k - 1)
    if exact is not None:
        yield from emit(exact)

    greedy: list[SPNode] = []
    for child in components:
        greedy.append(child)
        if sum(part.width for part in greedy) >= k - 1:
            break
    if sum(part.width for part in greedy) >= k - 1:
        yield from emit(_trim(greedy, k))
        yield from emit(greedy)

    wider = _subset_with_width(components, k)
    if wider is not None:
        yield from emit(wider)


def _trim(chosen: list[SPNode], k: int) -> list[SPNode]:
    """Drop small children while the join stays at least ``k - 1`` wide."""
    trimmed = list(chosen)
    while True:
        width = sum(part.width for part in trimmed)
        mu = width - k
        droppable = [part for part in trimmed if part.width <= mu + 1 and width - part.width >= k - 1]
        if mu < 1 or not droppable:
            return trimmed
        smallest = min(droppable, key=lambda part: part.width)
        trimmed.remove(smallest)


def _series_sites(node: SPNode, k: int) -> Iterator[ReductionSite]:
    children = node.children
    widths = [child.width for child in children]
    windows: list[tuple[int, int, int]] = []
    for start in range(len(children)):
        total = widths[start]
        for stop in range(start + 1, len(children)):
            total += widths[stop] + 1
            if total >= k - 1:
                windows.append((start, stop, total))
                break
    if not windows:
        return

    ordered = [windows[0], *sorted(windows[1:], key=lambda window: (window[2], window[0]))]
    for start, stop, total in ordered:
        splits = [stop]
        if total >= k + 1:
            splits.extend(
                split
                for split in range(start + 1, stop)
                if _joined_width(widths[start:split]) <= k - 2 and _joined_width(widths[split : stop + 1]) <= k - 2
            )
        for split in splits:
            first, second = children[start:split], children[split : stop + 1]
            logger.trace("Serial window {}..{} split at {} (width {})", start, stop, split, total)
            yield make_site(children[start : stop + 1], k, JoinKind.SERIES, node=node, first=first, second=second)


def _joined_width(widths: Sequence[int]) -> int:
    return sum(widths) + len(widths) - 1
