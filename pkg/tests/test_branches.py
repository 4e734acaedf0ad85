"""Tests for core/solver_sites.py, core/solver_dispatch.py and the per-branch extensions.

Every site here is built by hand so the preferred branch, its plan and the
colors the extension puts on the region can be checked exactly.
"""

from __future__ import annotations

from collections import Counter
from itertools import pairwise
from typing import TYPE_CHECKING

import pytest

from core.errors import GraphInputError, InvariantViolationError
from core.gadgets import GadgetTag, diamond
from core.graph_core import Coloring, Graph, is_equitable, sort_colors_increasing
from core.solver_dispatch import build_step, candidate_steps, dispatch, parallel_join_ready
from core.solver_extension import branch_multiset, extend_coloring
from core.solver_sites import atomic_site, find_reduction_site, make_site
from core.solver_types import HEURISTIC_TAGS, ExtensionPlan, JoinKind, LemmaTag
from core.sp_decompose import decompose
from core.sp_normalize import is_normal_form, normalize
from core.sp_tree import SPTree, leaf, parallel, series

if TYPE_CHECKING:
    from core.solver_types import ReductionSite, ReductionStep
    from core.sp_tree import SPNode


def _path(a: int, b: int, inner: list[int]) -> SPNode:
    return series(leaf(u, v) for u, v in pairwise([a, *inner, b]))


def _pendant(a: int, b: int, x: int) -> SPNode:
    """``x`` hangs off ``a`` only."""
    return series([leaf(a, x), leaf(x, b, has_edge=False)])


def _fan(x: int, y: int, z: int) -> SPNode:
    """Pole 0 adjacent to the whole path x-y-z, whose end z meets pole 1."""
    top = parallel([leaf(0, y), series([leaf(0, x), leaf(x, y)])])
    return series([parallel([leaf(0, z), series([top, leaf(y, z)])]), leaf(z, 1)])


def _fan_at_far_pole(chain: list[int], x: int, y: int, z: int) -> SPNode:
    """Path from pole 0 through ``chain`` to x, then pole 1 adjacent to the whole path x-y-z."""
    tail = parallel([leaf(y, 1), series([leaf(y, z), leaf(z, 1)])])
    fan = parallel([leaf(x, 1), series([leaf(x, y), tail])])
    return series([*(leaf(u, v) for u, v in pairwise([0, *chain, x])), fan])


def _realized(node: SPNode, *extra: tuple[int, int]) -> Graph:
    return Graph(set(node.vertices).union(*extra), [*node.real_edges, *extra])


def _parallel_site(first: SPNode, second: SPNode, k: int) -> ReductionSite:
    return make_site([first, second], k, JoinKind.PARALLEL, first=[first], second=[second])


def _series_site(first: SPNode, second: SPNode, k: int) -> ReductionSite:
    return make_site([first, second], k, JoinKind.SERIES, first=[first], second=[second])


def _dense_poles() -> SPNode:
    """Width 3: pole 0 sees every inner vertex, pole 1 sees two of them."""
    return parallel([_path(0, 1, [2]), _path(0, 1, [3]), _pendant(0, 1, 4)])


def _lemmas(site: ReductionSite, g: Graph, *, heuristic: bool = False) -> list[LemmaTag]:
    return [step.lemma for step in candidate_steps(site, g, heuristic=heuristic)]


def _extend(g: Graph, step: ReductionStep, assignment: dict[int, int]) -> dict[int, int]:
    """Region colors for a hand-built sorted equitable coloring of the reduced graph, checked end to end."""
    alpha = Coloring(step.site.k, assignment)
    assert is_equitable(step.reduced, alpha)
    assert dict(sort_colors_increasing(alpha).assignment) == assignment

    colors = extend_coloring(g, step, alpha)
    assert Counter(colors.values()) == branch_multiset(step, alpha)
    kept = {v: color for v, color in assignment.items() if v in g.vertices and v not in colors}
    assert is_equitable(g, Coloring(alpha.k, {**kept, **colors}))
    return colors


# ---------------------------------------------------------------------------
# Sites
# ---------------------------------------------------------------------------


class TestReductionSites:
    @pytest.mark.parametrize("k", [4, 5])
    def test_diamond_root_is_the_whole_site(self, k: int) -> None:
        graph, poles = diamond(k - 1)
        site = find_reduction_site(normalize(decompose(graph)), k)
        assert site.graph.vertices == graph.vertices
        assert site.poles == poles
        assert site.gadget.is_(GadgetTag.DIAMOND, k - 1)

    def test_wide_diamond_gives_narrow_diamond_site(self) -> None:
        graph, _ = diamond(5)
        site = find_reduction_site(normalize(decompose(graph)), 4)
        assert site.width == 3
        assert site.join_kind is JoinKind.PARALLEL
        assert site.gadget.is_(GadgetTag.DIAMOND, 3)

    def test_path_site_is_first_serial_window(self) -> None:
        tree = SPTree(_path(0, 5, [1, 2, 3, 4]))
        assert is_normal_form(tree)
        site = find_reduction_site(tree, 3)
        assert site.join_kind is JoinKind.SERIES
        assert site.poles == (0, 3)
        assert site.middle == 2
        assert site.width == 2
        assert site.first_inner == {1}
        assert site.second_inner == frozenset()

    def test_narrow_tree_has_no_site(self) -> None:
        with pytest.raises(GraphInputError, match="no reduction site"):
            find_reduction_site(SPTree(_path(0, 5, [1, 2, 3, 4])), 7)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


class TestDispatch:
    def test_diamond_root_contracts_whole_gadget(self) -> None:
        graph, _ = diamond(3)
        step = dispatch(find_reduction_site(normalize(decompose(graph)), 4), graph)
        assert step.lemma is LemmaTag.CRYSTAL_DIAMOND
        assert len(step.reduced) == len(graph) - 4

    def test_dense_poles_prefer_contraction(self) -> None:
        node = _dense_poles()
        site, g = atomic_site(node, 4), _realized(node)
        assert _lemmas(site, g) == [LemmaTag.CONTRACTION, LemmaTag.POLE_DELETION]

    def test_sparse_poles_prefer_pole_deletion(self) -> None:
        node = parallel([_path(0, 1, [2]), _pendant(0, 1, 3), _pendant(0, 1, 4)])
        site, g = atomic_site(node, 4), _realized(node)
        assert _lemmas(site, g) == [LemmaTag.POLE_DELETION, LemmaTag.CONTRACTION]
        assert dispatch(site, g).plan.b_prime == 3

    def test_width_k_candidate(self) -> None:
        node = parallel([_path(0, 1, [2]), _path(0, 1, [3]), _path(0, 1, [4, 5])])
        site, g = atomic_site(node, 4), _realized(node, (0, 6), (1, 7))
        plans = [step.plan for step in candidate_steps(site, g) if step.lemma is LemmaTag.WIDTH_K]
        assert ExtensionPlan(pole=0, other_pole=1, b_prime=4, pair_first=(2, 3)) in plans

    def test_small_parallel_join(self) -> None:
        site = _parallel_site(_path(0, 1, [2, 3, 4]), _path(0, 1, [5, 6, 7]), 5)
        assert parallel_join_ready(site)
        step = dispatch(site, site.graph)
        assert step.lemma is LemmaTag.PARALLEL_SMALL
        assert (step.plan.u1, step.plan.u2) == (2, 6)
        assert step.plan.crystal_vertices == (8,)

    def test_large_parallel_join(self) -> None:
        site = _parallel_site(_path(0, 1, [2, 3, 4, 5, 6]), _path(0, 1, [7, 8, 9, 10, 11]), 7)
        step = dispatch(site, site.graph)
        assert step.lemma is LemmaTag.PARALLEL_LARGE
        assert (step.plan.w1, step.plan.w1_prime, step.plan.w2, step.plan.w2_prime) == (2, 4, 8, 10)

    def test_large_join_without_independent_pairs_is_skipped(self) -> None:
        first = _fan_at_far_pole([2, 3], 4, 5, 6)
        second = _fan_at_far_pole([7, 8], 9, 10, 11)
        site = _parallel_site(first, second, 7)
        assert parallel_join_ready(site)
        assert set(_lemmas(site, site.graph)) == {LemmaTag.INNER_DELETION}

    def test_dominated_parallel_join(self) -> None:
        site = _parallel_site(_fan(2, 3, 4), _fan(5, 6, 7), 5)
        step = dispatch(site, site.graph)
        assert step.lemma is LemmaTag.PARALLEL_DOMINATED
        assert (step.plan.pole, step.plan.other_pole) == (0, 1)

    def test_parallel_join_needs_large_components(self) -> None:
        wide = _path(0, 1, [2, 3, 4])
        singles = [_path(0, 1, [x]) for x in (5, 6, 7)]
        site = make_site([wide, *singles], 5, JoinKind.PARALLEL, first=[wide], second=singles)
        assert site.mu == 1
        assert not parallel_join_ready(site)
        assert set(_lemmas(site, site.graph)) == {LemmaTag.INNER_DELETION}

    def test_series_independent(self) -> None:
        first = parallel([_path(0, 1, [3]), _path(0, 1, [4])])
        second = parallel([_path(1, 2, [5]), _path(1, 2, [6])])
        site = _series_site(first, second, 4)
        step = dispatch(site, site.graph)
        assert step.lemma is LemmaTag.SERIES_INDEPENDENT
        assert (step.plan.pair_first, step.plan.pair_second) == ((3, 4), (5, 6))

    def test_series_clique(self) -> None:
        first = series([leaf(0, 2), parallel([leaf(2, 1), _path(2, 1, [3])])])
        second = parallel([_path(1, 4, [5]), _path(1, 4, [6])])
        site = _series_site(first, second, 4)
        step = dispatch(site, site.graph)
        assert step.lemma is LemmaTag.SERIES_CLIQUE
        assert step.plan.clique == (2, 3)
        assert step.reduced.edges == [(0, 1), (0, 4), (1, 4)]

    def test_heuristic_tags_stay_out_of_the_ladder(self) -> None:
        node = _dense_poles()
        site, g = atomic_site(node, 4), _realized(node)
        assert not HEURISTIC_TAGS.intersection(_lemmas(site, g))
        assert _lemmas(site, g, heuristic=True) == [
            LemmaTag.HEURISTIC_POLE_DELETION,
            LemmaTag.HEURISTIC_POLE_DELETION,
            LemmaTag.HEURISTIC_INNER_DELETION,
        ]

    def test_no_branch_raises(self) -> None:
        node = _path(0, 1, [2])
        with pytest.raises(InvariantViolationError, match="No branch applies"):
            dispatch(atomic_site(node, 5), _realized(node))


# ---------------------------------------------------------------------------
# Extension per branch
# ---------------------------------------------------------------------------


class TestBranchExtensions:
    def test_crystal_diamond_without_pole_edge(self) -> None:
        node = parallel([_path(0, 1, [2]), _path(0, 1, [3])])
        g = _realized(node, (1, 4))
        step = build_step(g, LemmaTag.CRYSTAL_DIAMOND, atomic_site(node, 3), ExtensionPlan(pole=0, other_pole=1))
        assert step.plan.contraction_vertex == 5
        assert _extend(g, step, {4: 3, 5: 2}) == {0: 2, 1: 2, 2: 1, 3: 3}

    def test_contraction_with_pole_edge(self) -> None:
        node = parallel([leaf(0, 1), _path(0, 1, [2]), _path(0, 1, [3, 4])])
        g = _realized(node, (0, 5), (1, 6), (5, 6))
        plan = ExtensionPlan(pole=0, other_pole=1, a_prime=4)
        step = build_step(g, LemmaTag.CONTRACTION, atomic_site(node, 4), plan)
        assert _extend(g, step, {5: 2, 6: 3, 7: 4}) == {0: 4, 4: 4, 1: 1, 2: 2, 3: 3}

    def test_inner_deletion_reuses_pole_color(self) -> None:
        node = _path(0, 1, [2, 3])
        g = _realized(node, (1, 4), (4, 5), (5, 6))
        plan = ExtensionPlan(pole=0, other_pole=1, a_prime=3, b_prime=2)
        step = build_step(g, LemmaTag.INNER_DELETION, atomic_site(node, 5), plan)
        colors = _extend(g, step, {0: 1, 1: 5, 4: 2, 5: 3, 6: 4})
        assert colors == {3: 1, 2: 2}
        assert set(colors.values()) == {1, 2}

    def test_pole_deletion(self) -> None:
        node = _dense_poles()
        g = _realized(node, (1, 5), (0, 6), (5, 6))
        step = build_step(g, LemmaTag.POLE_DELETION, atomic_site(node, 4), ExtensionPlan(0, 1, b_prime=4))
        assert _extend(g, step, {1: 2, 5: 3, 6: 4}) == {0: 1, 4: 2, 2: 3, 3: 4}

    def test_width_k(self) -> None:
        node = parallel([_path(0, 1, [2]), _path(0, 1, [3]), _path(0, 1, [4, 5])])
        g = _realized(node, (0, 6), (1, 7))
        plan = ExtensionPlan(pole=0, other_pole=1, b_prime=4, pair_first=(2, 3))
        step = build_step(g, LemmaTag.WIDTH_K, atomic_site(node, 4), plan)
        assert _extend(g, step, {0: 1, 1: 2, 6: 3, 7: 4}) == {0: 4, 4: 2, 2: 1, 3: 1, 5: 3}

    def test_parallel_small(self) -> None:
        site = _parallel_site(_path(0, 1, [2, 3, 4]), _path(0, 1, [5, 6, 7]), 5)
        plan = ExtensionPlan(pole=0, other_pole=1, side_first=(2, 3, 4), side_second=(5, 6, 7), u1=2, u2=6)
        step = build_step(site.graph, LemmaTag.PARALLEL_SMALL, site, plan)
        colors = _extend(site.graph, step, {0: 3, 1: 4, 8: 5})
        assert colors == {2: 4, 6: 3, 3: 5, 5: 5, 4: 1, 7: 2}

    def test_parallel_large(self) -> None:
        site = _parallel_site(_path(0, 1, [2, 3, 4, 5, 6]), _path(0, 1, [7, 8, 9, 10, 11]), 7)
        plan = ExtensionPlan(
            pole=0,
            other_pole=1,
            side_first=(2, 3, 4, 5, 6),
            side_second=(7, 8, 9, 10, 11),
            w1=2,
            w1_prime=4,
            w2=8,
            w2_prime=10,
        )
        step = build_step(site.graph, LemmaTag.PARALLEL_LARGE, site, plan)
        colors = _extend(site.graph, step, {0: 6, 1: 7})
        assert colors == {8: 6, 2: 7, 3: 1, 7: 1, 4: 2, 9: 2, 5: 3, 10: 3, 6: 4, 11: 5}

    def test_parallel_dominated(self) -> None:
        site = _parallel_site(_fan(2, 3, 4), _fan(5, 6, 7), 5)
        plan = ExtensionPlan(pole=0, other_pole=1, side_first=(2, 3, 4), side_second=(5, 6, 7))
        step = build_step(site.graph, LemmaTag.PARALLEL_DOMINATED, site, plan)
        colors = _extend(site.graph, step, {1: 5})
        assert colors == {0: 3, 2: 5, 3: 1, 5: 1, 4: 2, 6: 2, 7: 4}

    def test_series_independent(self) -> None:
        first = parallel([_path(0, 1, [3]), _path(0, 1, [4])])
        second = parallel([_path(1, 2, [5]), _path(1, 2, [6])])
        site = _series_site(first, second, 4)
        plan = ExtensionPlan(
            pole=0,
            other_pole=2,
            middle=1,
            side_first=(3, 4),
            side_second=(5, 6),
            pair_first=(3, 4),
            pair_second=(5, 6),
        )
        step = build_step(site.graph, LemmaTag.SERIES_INDEPENDENT, site, plan)
        assert _extend(site.graph, step, {0: 3, 2: 4}) == {1: 2, 3: 4, 5: 3, 4: 1, 6: 1}

    def test_series_clique(self) -> None:
        first = series([leaf(0, 2), parallel([leaf(2, 1), _path(2, 1, [3])])])
        second = parallel([_path(1, 4, [5]), _path(1, 4, [6])])
        site = _series_site(first, second, 4)
        plan = ExtensionPlan(pole=0, other_pole=4, middle=1, clique=(2, 3), side_second=(5, 6))
        step = build_step(site.graph, LemmaTag.SERIES_CLIQUE, site, plan)
        colors = _extend(site.graph, step, {0: 2, 1: 3, 4: 4})
        assert colors == {1: 1, 2: 3, 3: 4, 5: 2, 6: 3}

    def test_heuristic_pole_deletion_takes_other_pole_color(self) -> None:
        node = _dense_poles()
        g = _realized(node, (1, 5), (5, 6))
        step = build_step(g, LemmaTag.HEURISTIC_POLE_DELETION, atomic_site(node, 4), ExtensionPlan(0, 1))
        assert _extend(g, step, {1: 2, 5: 3, 6: 4}) == {0: 2, 2: 1, 3: 3, 4: 4}
