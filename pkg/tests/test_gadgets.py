"""Tests for core/gadgets.py: gadget families and their classification."""

from __future__ import annotations

import pytest

from core.errors import GraphInputError
from core.gadgets import (
    OTHER,
    GadgetKind,
    GadgetTag,
    classify_gadget,
    common_pole_neighbors_independent,
    crystal,
    crystal_prime,
    diamond,
    diamond_prime,
    path,
    star,
)
from core.graph_core import Graph


class TestFamilies:
    def test_diamond_shape(self) -> None:
        graph, poles = diamond(3)
        assert poles == (0, 1)
        assert len(graph) == 5
        assert graph.number_of_edges() == 6
        assert not graph.has_edge(0, 1)

    def test_crystal_zero_is_an_edge(self) -> None:
        graph, _ = crystal(0)
        assert graph == Graph([0, 1], [(0, 1)])

    def test_crystal_adds_pole_edge(self) -> None:
        graph, _ = crystal(2)
        assert graph.has_edge(0, 1)
        assert graph.number_of_edges() == 5

    def test_diamond_prime_one_is_claw(self) -> None:
        graph, (a, b) = diamond_prime(1)
        assert sorted(graph.degree(v) for v in graph) == [1, 1, 1, 3]
        assert graph.degree(a) == graph.degree(b) == 1

    def test_star(self) -> None:
        graph, _ = star(5)
        assert graph.max_degree == 5
        assert len(graph) == 6

    @pytest.mark.parametrize("build", [diamond, diamond_prime, crystal_prime])
    def test_width_below_one_rejected(self, build: object) -> None:
        with pytest.raises(GraphInputError):
            build(0)  # type: ignore[operator]

    def test_short_path_rejected(self) -> None:
        with pytest.raises(GraphInputError):
            path(1)


class TestClassify:
    @pytest.mark.parametrize("i", [1, 2, 3, 4])
    def test_diamond(self, i: int) -> None:
        assert classify_gadget(*diamond(i)) == GadgetKind(GadgetTag.DIAMOND, i)

    @pytest.mark.parametrize("i", [0, 1, 2, 4])
    def test_crystal(self, i: int) -> None:
        assert classify_gadget(*crystal(i)) == GadgetKind(GadgetTag.CRYSTAL, i)

    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_primed(self, i: int) -> None:
        assert classify_gadget(*diamond_prime(i)).is_(GadgetTag.DIAMOND_PRIME, i)
        assert classify_gadget(*crystal_prime(i)).is_(GadgetTag.CRYSTAL_PRIME, i)

    def test_path_is_other(self) -> None:
        assert classify_gadget(*path(4)) == OTHER

    def test_relabeled_diamond(self) -> None:
        graph = Graph([7, 8, 9, 10], [(7, 9), (9, 8), (7, 10), (10, 8)])
        assert classify_gadget(graph, (7, 8)).is_(GadgetTag.DIAMOND, 2)

    def test_pole_role_matters(self) -> None:
        graph, _ = diamond(2)
        assert classify_gadget(graph, (0, 2)) == OTHER

    def test_bad_poles(self) -> None:
        graph, _ = diamond(1)
        with pytest.raises(GraphInputError):
            classify_gadget(graph, (0, 9))

    def test_kind_str(self) -> None:
        assert str(GadgetKind(GadgetTag.DIAMOND_PRIME, 3)) == "D'(3)"
        assert str(OTHER) == "Other"


class TestCommonNeighbors:
    def test_diamond_common_neighbors_independent(self) -> None:
        assert common_pole_neighbors_independent(*diamond(3))

    def test_adjacent_common_neighbors(self) -> None:
        graph = Graph(range(4), [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        assert not common_pole_neighbors_independent(graph, (0, 1))
