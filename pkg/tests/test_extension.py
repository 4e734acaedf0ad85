"""Tests for the extension helpers in core/solver_extension.py."""

from __future__ import annotations

from collections import Counter

import pytest

from core.errors import ExtensionError
from core.graph_core import Graph
from core.solver_extension import search_region, two_part_greedy
from core.solver_types import MultiplicityVector


class TestMultiplicityVector:
    def test_counts(self) -> None:
        vector = MultiplicityVector({1: 2, 2: 1, 3: 1, 4: 0})
        assert vector.m == 3
        assert vector.m1 == 2
        assert vector.m2 == 1
        assert vector.total == 4

    def test_from_counter(self) -> None:
        vector = MultiplicityVector.from_counter(Counter([1, 1, 2]))
        assert dict(vector.multiplicities) == {1: 2, 2: 1}

    def test_triple_rejected(self) -> None:
        with pytest.raises(ExtensionError):
            MultiplicityVector({1: 3})


class TestTwoPartGreedy:
    def test_doubles_go_to_both_sides(self) -> None:
        assignment = two_part_greedy([0, 1], [2, 3], MultiplicityVector({1: 2, 2: 1, 3: 1}))
        assert assignment == {0: 1, 2: 1, 1: 2, 3: 3}

    def test_no_repeated_color_on_a_side(self) -> None:
        first, second = [0, 1, 2], [3, 4]
        assignment = two_part_greedy(first, second, MultiplicityVector({1: 2, 2: 2, 3: 1}))
        assert len({assignment[v] for v in first}) == len(first)
        assert len({assignment[v] for v in second}) == len(second)
        assert Counter(assignment.values()) == Counter({1: 2, 2: 2, 3: 1})

    def test_total_mismatch(self) -> None:
        with pytest.raises(ExtensionError, match="vertices"):
            two_part_greedy([0], [1], MultiplicityVector({1: 2, 2: 1}))

    def test_side_too_large(self) -> None:
        with pytest.raises(ExtensionError, match="distinct colors"):
            two_part_greedy([0, 1, 2], [3], MultiplicityVector({1: 2, 2: 2}))

    def test_adjacent_sides(self) -> None:
        graph = Graph(range(2), [(0, 1)])
        with pytest.raises(ExtensionError, match="adjacent"):
            two_part_greedy([0], [1], MultiplicityVector({1: 2}), graph)


class TestSearchRegion:
    def setup_method(self) -> None:
        self.path = Graph(range(3), [(0, 1), (1, 2)])

    def test_equitable_completion(self) -> None:
        assert search_region(self.path, {0: 1}, [1, 2], 3) == {1: 2, 2: 3}

    def test_multiset_completion(self) -> None:
        found = search_region(self.path, {0: 1}, [1, 2], 3, multiset=Counter({2: 1, 3: 1}))
        assert found == {1: 2, 2: 3}

    def test_impossible_multiset(self) -> None:
        assert search_region(self.path, {0: 1}, [1, 2], 3, multiset=Counter({1: 2})) is None

    def test_multiset_of_wrong_size(self) -> None:
        assert search_region(self.path, {0: 1}, [1, 2], 3, multiset=Counter({2: 1})) is None

    def test_no_proper_completion(self) -> None:
        triangle = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
        assert search_region(triangle, {0: 1}, [1, 2], 2) is None

    def test_budget_exhausted(self) -> None:
        assert search_region(self.path, {0: 1}, [1, 2], 3, node_budget=0) is None
