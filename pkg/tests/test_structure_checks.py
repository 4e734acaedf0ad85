"""Tests for core/structure_checks.py."""

from __future__ import annotations

from dataclasses import replace

from core.gadgets import diamond
from core.graph_core import Coloring, Graph
from core.solver_types import BRIDGE_STEP, FallbackStage, TraceRecord
from core.structure_checks import (
    degeneracy_order,
    independent_pair,
    inner_forest,
    non_neighbors,
    pole_dominates,
    profile_after,
    verify_trace,
)


def _record(**overrides: object) -> TraceRecord:
    base = TraceRecord(
        depth=0,
        lemma="INNER_DELETION",
        k=3,
        poles=(0, 1),
        middle=None,
        width=2,
        mu=0,
        n_before=4,
        n_after=2,
        max_degree_after=1,
        removed_vertices=(2, 3),
        added_vertices=(),
        added_edges=((0, 1),),
        region=(2, 3),
        replaced_colors=(),
        target_multiset={1: 1, 2: 1},
        region_multiset={1: 1, 2: 1},
        reduced_profile=(0, 1, 1),
        profile=(1, 2, 1),
    )
    return replace(base, **overrides)  # type: ignore[arg-type]


class TestPredicates:
    def test_inner_forest(self) -> None:
        graph, poles = diamond(3)
        assert inner_forest(graph, poles)

    def test_inner_cycle(self) -> None:
        graph = Graph(range(5), [(0, 2), (2, 3), (3, 4), (4, 2), (4, 1)])
        assert not inner_forest(graph, (0, 1))

    def test_pole_dominates(self) -> None:
        graph, _ = diamond(3)
        assert pole_dominates(graph, 0, [2, 3, 4])
        assert not pole_dominates(graph, 2, [3])

    def test_non_neighbors_sorted(self) -> None:
        graph = Graph(range(5), [(0, 1), (0, 3)])
        assert non_neighbors(graph, 0, [4, 3, 2, 1, 0]) == [2, 4]

    def test_independent_pair(self) -> None:
        graph, _ = diamond(3)
        assert independent_pair(graph, [4, 3, 2]) == (2, 3)
        assert independent_pair(graph, [2, 3, 4], exclude=[2]) == (3, 4)

    def test_no_independent_pair_in_triangle(self) -> None:
        triangle = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
        assert independent_pair(triangle, [0, 1, 2]) is None

    def test_degeneracy_order(self) -> None:
        assert degeneracy_order(Graph(range(3), [(0, 1), (1, 2)])) == [0, 1, 2]

    def test_profile_after(self) -> None:
        assert profile_after((1, 1, 2), (3,), {1: 1, 3: 2}) == (2, 1, 3)


class TestVerifyTrace:
    def setup_method(self) -> None:
        # Square 0-2-1-3-0: classes {0, 1} and {2, 3} with one spare color.
        self.graph = Graph(range(4), [(0, 2), (2, 1), (1, 3), (3, 0)])
        self.coloring = Coloring(3, {0: 2, 1: 2, 2: 1, 3: 3})

    def test_consistent_record(self) -> None:
        # Top-level sizes are compared up to a renaming of the colors.
        record = _record(region_multiset={1: 1, 3: 1}, target_multiset={1: 1, 3: 1}, profile=(1, 1, 2))
        assert verify_trace(self.graph, self.coloring, [record]) == []

    def test_conservation_violation(self) -> None:
        record = _record(profile=(2, 2, 1))
        problems = verify_trace(self.graph, self.coloring, [record])
        assert any("do not conserve" in problem for problem in problems)

    def test_growth_reported(self) -> None:
        record = _record(n_after=5)
        problems = verify_trace(self.graph, self.coloring, [record])
        assert any("not smaller" in problem for problem in problems)

    def test_bridge_records_may_keep_size(self) -> None:
        record = _record(lemma=BRIDGE_STEP, n_after=4, replaced_colors=(), region_multiset={}, target_multiset={})
        record = replace(record, reduced_profile=(1, 2, 1), profile=(1, 2, 1))
        assert verify_trace(self.graph, self.coloring, [record]) == []

    def test_degree_bound_reported(self) -> None:
        record = _record(max_degree_after=4)
        problems = verify_trace(self.graph, self.coloring, [record])
        assert any("exceeds 3" in problem for problem in problems)

    def test_multiset_mismatch_allowed_for_equitable_fallback(self) -> None:
        record = _record(target_multiset={1: 2})
        assert any("declared multiset" in problem for problem in verify_trace(self.graph, self.coloring, [record]))
        relaxed = replace(record, fallback=FallbackStage.EQUITABLE.value)
        assert not any("declared multiset" in problem for problem in verify_trace(self.graph, self.coloring, [relaxed]))

    def test_improper_final_coloring(self) -> None:
        bad = Coloring(3, {0: 1, 1: 2, 2: 1, 3: 3})
        assert "final coloring is not equitable" in verify_trace(self.graph, bad, [])
