"""Turning a coloring of the reduced graph back into a coloring of the original.

Every branch recolors only its region, with a fixed multiset of colors that
keeps the class sizes equitable when the reduced coloring is sorted by class
size. ``search_region`` is the exhaustive fallback used when a branch's
closed-form extension does not apply to the coloring at hand.
"""

from __future__ import annotations

from collections import Counter
from typing import TYPE_CHECKING

from core.errors import ExtensionError
from core.graph_core import Coloring, Graph
from core.solver_types import LemmaTag, MultiplicityVector, ReductionStep
from core.structure_checks import independent_pair, non_neighbors

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Mapping, Sequence


def _cyclic(count: int, k: int) -> Counter[int]:
    """Colors ``1..count`` taken modulo ``k``."""
    return Counter((index % k) + 1 for index in range(count))


def branch_multiset(step: ReductionStep, alpha: Coloring) -> Counter[int]:
    """Colors the branch puts on its region, given the sorted reduced coloring."""
    k = alpha.k
    plan = step.plan
    full = Counter(range(1, k + 1))
    width = len(step.site.inner)
    match step.lemma:
        case LemmaTag.CRYSTAL_DIAMOND | LemmaTag.CONTRACTION:
            return full + Counter([alpha.color(plan.contraction_vertex)])  # type: ignore[arg-type]
        case LemmaTag.INNER_DELETION | LemmaTag.HEURISTIC_INNER_DELETION:
            return Counter(range(1, width + 1))
        case LemmaTag.POLE_DELETION | LemmaTag.HEURISTIC_POLE_DELETION:
            return full
        case LemmaTag.WIDTH_K:
            return full + Counter([alpha.color(plan.pole)])
        case LemmaTag.PARALLEL_SMALL:
            return full + Counter(alpha.color(v) for v in plan.crystal_vertices)
        case LemmaTag.PARALLEL_LARGE:
            return full + Counter(range(1, step.site.mu + 1))
        case LemmaTag.PARALLEL_DOMINATED:
            return _cyclic(k + step.site.mu + 1, k)
        case LemmaTag.SERIES_INDEPENDENT:
            return _cyclic(width, k)
        case LemmaTag.SERIES_CLIQUE:
            return full + Counter([alpha.color(plan.middle)])  # type: ignore[arg-type]
    msg = f"Unknown branch {step.lemma}"
    raise ExtensionError(msg)


def two_part_greedy(
    first: Sequence[int],
    second: Sequence[int],
    multiplicities: MultiplicityVector,
    graph: Graph | None = None,
) -> dict[int, int]:
    """Spread colors of multiplicity one or two over two sides with no color twice on a side.

    Doubles go to ``first[i]`` and ``second[i]``; the remaining vertices take the
    singles in order. Needs ``|first| + |second|`` equal to the total and each side
    no larger than the number of distinct colors.
    """
    if len(first) + len(second) != multiplicities.total:
        msg = f"Sides hold {len(first) + len(second)} vertices but {multiplicities.total} colors were given"
        raise ExtensionError(msg)
    if len(first) > multiplicities.m or len(second) > multiplicities.m:
        msg = f"A side has more vertices than the {multiplicities.m} distinct colors"
        raise ExtensionError(msg)
    if graph is not None and any(graph.has_edge(u, v) for u in first for v in second):
        msg = "The two sides of a greedy distribution must not be adjacent"
        raise ExtensionError(msg)

    doubles = [color for color, count in multiplicities.multiplicities.items() if count == 2]  # noqa: PLR2004
    singles = [color for color, count in multiplicities.multiplicities.items() if count == 1]
    assignment: dict[int, int] = {}
    for index, color in enumerate(doubles):
        assignment[first[index]] = color
        assignment[second[index]] = color
    rest = [*first[len(doubles) :], *second[len(doubles) :]]
    assignment.update(zip(rest, singles, strict=True))
    return assignment


class _Painter:
    """Region colors layered over the fixed reduced coloring, checked edge by edge as they are set."""

    def __init__(self, g: Graph, step: ReductionStep, alpha: Coloring) -> None:
        self.g = g
        self.k = alpha.k
        self.region = frozenset(step.region)
        self.colors: dict[int, int] = {
            v: alpha.assignment[v] for v in g.vertices if v not in self.region and v in alpha.assignment
        }
        self.assigned: dict[int, int] = {}

    def color_of(self, vertex: int) -> int | None:
        return self.assigned.get(vertex, self.colors.get(vertex))

    def used_around(self, vertex: int) -> set[int]:
        return {color for nbr in self.g.neighbors(vertex) if (color := self.color_of(nbr)) is not None}

    def paint(self, vertex: int | None, color: int) -> None:
        if vertex is None or vertex not in self.region:
            msg = f"Vertex {vertex} is not in the region being recolored"
            raise ExtensionError(msg)
        if vertex in self.assigned:
            msg = f"Vertex {vertex} was already given color {self.assigned[vertex]}"
            raise ExtensionError(msg)
        if color in self.used_around(vertex):
            msg = f"Color {color} on vertex {vertex} clashes with a neighbor"
            raise ExtensionError(msg)
        self.assigned[vertex] = color

    def first_free(self, vertex: int, exclude: Iterable[int] = ()) -> int:
        blocked = self.used_around(vertex) | set(exclude)
        for color in range(1, self.k + 1):
            if color not in blocked:
                return color
        msg = f"No free color left for vertex {vertex}"
        raise ExtensionError(msg)

    def paint_sorted(self, vertices: Iterable[int], colors: Iterable[int]) -> None:
        ordered = sorted(vertices)
        palette = sorted(colors)
        if len(ordered) != len(palette):
            msg = f"{len(ordered)} vertices cannot take the {len(palette)} colors {palette}"
            raise ExtensionError(msg)
        for vertex, color in zip(ordered, palette, strict=True):
            self.paint(vertex, color)

    def paint_greedy(self, first: Iterable[int], second: Iterable[int], remaining: Counter[int]) -> None:
        left = sorted(v for v in first if v not in self.assigned)
        right = sorted(v for v in second if v not in self.assigned)
        for vertex, color in two_part_greedy(left, right, MultiplicityVector.from_counter(remaining), self.g).items():
            self.paint(vertex, color)

    def unpainted(self, vertices: Iterable[int]) -> list[int]:
        return sorted(v for v in vertices if v not in self.assigned)

    def result(self) -> dict[int, int]:
        missing = self.region - self.assigned.keys()
        if missing:
            msg = f"Extension left {len(missing)} region vertices uncolored"
            raise ExtensionError(msg)
        return dict(self.assigned)


def _full(k: int) -> list[int]:
    return list(range(1, k + 1))


def _without(colors: Iterable[int], *removed: int) -> list[int]:
    remaining = Counter(colors)
    remaining.subtract(removed)
    if any(count < 0 for count in remaining.values()):
        msg = f"Cannot remove colors {removed} from the multiset"
        raise ExtensionError(msg)
    return sorted(remaining.elements())


def _pick_non_neighbor(painter: _Painter, vertex: int, candidates: Iterable[int], preferred: int | None) -> int:
    options = painter.unpainted(non_neighbors(painter.g, vertex, candidates))
    if preferred is not None and preferred in options:
        return preferred
    if not options:
        msg = f"No free vertex is non-adjacent to pole {vertex}"
        raise ExtensionError(msg)
    return options[0]


def extend_coloring(g: Graph, step: ReductionStep, alpha: Coloring) -> dict[int, int]:
    """Colors of the step region for the sorted reduced coloring ``alpha``."""
    painter = _Painter(g, step, alpha)
    _BRANCHES[step.lemma](painter, step, alpha)
    return painter.result()


def _extend_contracted(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    a, b = plan.pole, plan.other_pole
    gamma = alpha.color(plan.contraction_vertex)  # type: ignore[arg-type]
    inner = sorted(step.site.inner)
    k = painter.k
    if not painter.g.has_edge(a, b):
        painter.paint(a, gamma)
        painter.paint(b, gamma)
        painter.paint_sorted(inner, _without(_full(k), gamma))
        return
    if step.lemma is LemmaTag.CRYSTAL_DIAMOND:
        painter.paint(a, painter.first_free(a, exclude={gamma}))
        painter.paint(b, painter.first_free(b, exclude={gamma}))
        rest = _without([*_full(k), gamma], painter.assigned[a], painter.assigned[b])
        painter.paint_sorted(inner, rest)
        return
    a_prime = _pick_non_neighbor(painter, a, inner, plan.a_prime)
    painter.paint(a, gamma)
    painter.paint(a_prime, gamma)
    painter.paint(b, painter.first_free(b))
    painter.paint_sorted([v for v in inner if v != a_prime], _without(_full(k), gamma, painter.assigned[b]))


def _extend_inner_deletion(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    inner = sorted(step.site.inner)
    colors = list(range(1, len(inner) + 1))
    for pole, preferred in ((plan.pole, plan.a_prime), (plan.other_pole, plan.b_prime)):
        pole_color = alpha.color(pole)
        if pole_color in colors:
            painter.paint(_pick_non_neighbor(painter, pole, inner, preferred), pole_color)
            colors.remove(pole_color)
    painter.paint_sorted(painter.unpainted(inner), colors)


def _extend_pole_deletion(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    p, q = plan.pole, plan.other_pole
    inner = sorted(step.site.inner)
    q_color = alpha.color(q)
    if plan.b_prime is None:
        painter.paint(p, q_color)
        painter.paint_sorted(inner, _without(_full(painter.k), q_color))
        return
    p_color = painter.first_free(p)
    painter.paint(p, p_color)
    if p_color == q_color:
        painter.paint_sorted(inner, _without(_full(painter.k), p_color))
        return
    painter.paint(_pick_non_neighbor(painter, q, inner, plan.b_prime), q_color)
    painter.paint_sorted(painter.unpainted(inner), _without(_full(painter.k), p_color, q_color))


def _extend_width_k(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    p, q = plan.pole, plan.other_pole
    inner = sorted(step.site.inner)
    p_color, q_color = alpha.color(p), alpha.color(q)
    if plan.pair_first is None:
        msg = "Width-k branch needs an independent pair"
        raise ExtensionError(msg)
    if painter.k == 3:  # noqa: PLR2004
        painter.paint(p, q_color)
        for vertex in plan.pair_first:
            painter.paint(vertex, p_color)
        painter.paint_sorted(painter.unpainted(inner), _without(_full(3), p_color, q_color))
        return
    new_color = painter.first_free(p, exclude={p_color, q_color})
    painter.paint(p, new_color)
    painter.paint(plan.b_prime, q_color)
    for vertex in plan.pair_first:
        painter.paint(vertex, p_color)
    painter.paint_sorted(painter.unpainted(inner), _without(_full(painter.k), new_color, p_color, q_color))


def _place_triple(painter: _Painter, first: list[int], second: list[int], color: int) -> None:
    """Put one color on an independent pair of one side and a vertex of the other."""
    for pair_side, single_side in ((first, second), (second, first)):
        pair = independent_pair(painter.g, painter.unpainted(pair_side))
        singles = painter.unpainted(single_side)
        if pair is not None and singles:
            painter.paint(pair[0], color)
            painter.paint(pair[1], color)
            painter.paint(singles[0], color)
            return
    msg = f"Color {color} cannot be placed three times"
    raise ExtensionError(msg)


def _extend_parallel_small(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    a, b = plan.pole, plan.other_pole
    first, second = list(plan.side_first), list(plan.side_second)
    remaining = branch_multiset(step, alpha)
    painter.paint(plan.u1, alpha.color(b))
    painter.paint(plan.u2, alpha.color(a))
    remaining.subtract([alpha.color(a), alpha.color(b)])
    for color in sorted(remaining):
        if remaining[color] == 3:  # noqa: PLR2004
            _place_triple(painter, first, second, color)
            remaining[color] = 0
    painter.paint_greedy(first, second, +remaining)


def _paint_pole_color(painter: _Painter, vertices: Sequence[int | None], pole: int, color: int, count: int) -> None:
    chosen = [v for v in vertices if v is not None][:count]
    if len(chosen) < count:
        msg = f"Color of pole {pole} needs {count} non-adjacent vertices"
        raise ExtensionError(msg)
    for vertex in chosen:
        painter.paint(vertex, color)


def _extend_parallel_large(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    a, b = plan.pole, plan.other_pole
    remaining = branch_multiset(step, alpha)
    a_color, b_color = alpha.color(a), alpha.color(b)
    _paint_pole_color(painter, (plan.w2, plan.w2_prime), a, a_color, remaining[a_color])
    _paint_pole_color(painter, (plan.w1, plan.w1_prime), b, b_color, remaining[b_color])
    remaining[a_color] = 0
    remaining[b_color] = 0
    painter.paint_greedy(plan.side_first, plan.side_second, +remaining)


def _extend_parallel_dominated(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    p, q = plan.pole, plan.other_pole
    remaining = branch_multiset(step, alpha)
    q_color = alpha.color(q)
    blocked = painter.used_around(p) | {q_color}
    options = [color for color in sorted(remaining) if remaining[color] == 1 and color not in blocked]
    if not options:
        msg = f"No single color is free for the dominating pole {p}"
        raise ExtensionError(msg)
    painter.paint(p, options[0])
    remaining[options[0]] -= 1

    first_free = non_neighbors(painter.g, q, plan.side_first)
    second_free = non_neighbors(painter.g, q, plan.side_second)
    if remaining[q_color] == 2:  # noqa: PLR2004
        if not first_free or not second_free:
            msg = f"Color of pole {q} needs a non-neighbor on both sides"
            raise ExtensionError(msg)
        painter.paint(first_free[0], q_color)
        painter.paint(second_free[0], q_color)
    else:
        sides = sorted(
            ((first_free, len(plan.side_first)), (second_free, len(plan.side_second))),
            key=lambda side: -side[1],
        )
        target = next((free for free, _ in sides if free), None)
        if target is None:
            msg = f"Color of pole {q} has no non-adjacent vertex"
            raise ExtensionError(msg)
        painter.paint(target[0], q_color)
    remaining[q_color] = 0
    painter.paint_greedy(plan.side_first, plan.side_second, +remaining)


def _extend_series_independent(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    a, c, b = plan.pole, plan.other_pole, plan.middle
    if b is None or plan.pair_first is None or plan.pair_second is None:
        msg = "Serial branch needs the middle pole and one independent pair per side"
        raise ExtensionError(msg)
    remaining = branch_multiset(step, alpha)
    a_color, c_color = alpha.color(a), alpha.color(c)
    options = [color for color in sorted(remaining) if remaining[color] == 1 and color not in {a_color, c_color}]
    if not options:
        msg = "No single color is left for the middle pole"
        raise ExtensionError(msg)
    painter.paint(b, options[0])
    remaining[options[0]] = 0
    for vertex in plan.pair_first[: remaining[c_color]]:
        painter.paint(vertex, c_color)
    for vertex in plan.pair_second[: remaining[a_color]]:
        painter.paint(vertex, a_color)
    remaining[a_color] = 0
    remaining[c_color] = 0
    painter.paint_greedy(plan.side_first, plan.side_second, +remaining)


def _extend_series_clique(painter: _Painter, step: ReductionStep, alpha: Coloring) -> None:
    plan = step.plan
    p, q, b = plan.pole, plan.other_pole, plan.middle
    if b is None or plan.clique is None:
        msg = "Clique branch needs the middle pole and the clique pair"
        raise ExtensionError(msg)
    b_color, q_color = alpha.color(b), alpha.color(q)
    gamma = painter.first_free(b, exclude={alpha.color(p), b_color, q_color})
    painter.paint(b, gamma)
    first, second = plan.clique
    painter.paint(first, b_color)
    painter.paint(second, q_color)
    painter.paint_sorted(plan.side_second, _without(_full(painter.k), gamma, q_color))


_BRANCHES: dict[LemmaTag, Callable[[_Painter, ReductionStep, Coloring], None]] = {
    LemmaTag.CRYSTAL_DIAMOND: _extend_contracted,
    LemmaTag.CONTRACTION: _extend_contracted,
    LemmaTag.INNER_DELETION: _extend_inner_deletion,
    LemmaTag.POLE_DELETION: _extend_pole_deletion,
    LemmaTag.HEURISTIC_INNER_DELETION: _extend_inner_deletion,
    LemmaTag.HEURISTIC_POLE_DELETION: _extend_pole_deletion,
    LemmaTag.WIDTH_K: _extend_width_k,
    LemmaTag.PARALLEL_SMALL: _extend_parallel_small,
    LemmaTag.PARALLEL_LARGE: _extend_parallel_large,
    LemmaTag.PARALLEL_DOMINATED: _extend_parallel_dominated,
    LemmaTag.SERIES_INDEPENDENT: _extend_series_independent,
    LemmaTag.SERIES_CLIQUE: _extend_series_clique,
}


class SearchBudgetExceededError(Exception):
    pass


def search_region(
    g: Graph,
    fixed: Mapping[int, int],
    region: Sequence[int],
    k: int,
    *,
    multiset: Counter[int] | None = None,
    node_budget: int = 200_000,
) -> dict[int, int] | None:
    """Backtracking completion of ``fixed`` on ``region``.

    With ``multiset`` the region must use exactly those colors; without it the
    completed coloring of ``g`` must be equitable. Returns ``None`` when no
    completion exists or the node budget runs out.
    """
    quotient, remainder = divmod(len(g), k)
    counts = Counter(fixed[v] for v in g.vertices if v in fixed and v not in region)
    remaining = Counter(multiset) if multiset is not None else None
    assignment: dict[int, int] = {}
    nodes = 0

    def capacity_ok() -> bool:
        if remaining is not None:
            return True
        over = sum(1 for color in range(1, k + 1) if counts[color] > quotient)
        if any(counts[color] > quotient + 1 for color in range(1, k + 1)) or over > remainder:
            return False
        deficit = sum(max(0, quotient - counts[color]) for color in range(1, k + 1))
        return deficit <= len(region) - len(assignment)

    def allowed(vertex: int) -> list[int]:
        blocked = {
            assignment.get(nbr, fixed.get(nbr))
            for nbr in g.neighbors(vertex)
            if nbr in assignment or (nbr in fixed and nbr not in region)
        }
        return [
            color
            for color in range(1, k + 1)
            if color not in blocked and (remaining is None or remaining[color] > 0)
        ]

    def backtrack() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceededError
        open_vertices = [v for v in region if v not in assignment]
        if not open_vertices:
            return True
        options = {v: allowed(v) for v in open_vertices}
        vertex = min(open_vertices, key=lambda v: (len(options[v]), v))
        for color in options[vertex]:
            assignment[vertex] = color
            counts[color] += 1
            if remaining is not None:
                remaining[color] -= 1
            if capacity_ok() and backtrack():
                return True
            del assignment[vertex]
            counts[color] -= 1
            if remaining is not None:
                remaining[color] += 1
        return False

    if remaining is not None and sum(remaining.values()) != len(region):
        return None
    if not capacity_ok():
        return None
    try:
        return dict(assignment) if backtrack() else None
    except SearchBudgetExceededError:
        return None
