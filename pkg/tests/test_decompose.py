"""Tests for core/sp_decompose.py and core/sp_normalize.py."""

from __future__ import annotations

import networkx as nx
import pytest

from core.errors import GraphInputError, K4MinorError
from core.gadgets import crystal, crystal_prime, diamond, diamond_prime, path, star
from core.generators import gen_random_k4_free, gen_random_sp
from core.graph_core import Graph
from core.sp_decompose import decompose
from core.sp_normalize import is_normal_form, normalize
from core.sp_tree import NodeKind, SPTree, leaf, parallel, realize, series, source_graph

GADGETS = [
    diamond(1),
    diamond(3),
    crystal(0),
    crystal(2),
    crystal_prime(2),
    diamond_prime(1),
    diamond_prime(3),
    star(4),
    path(6),
]


class TestDecompose:
    @pytest.mark.parametrize(("graph", "poles"), GADGETS)
    def test_gadgets_roundtrip(self, graph: Graph, poles: tuple[int, int]) -> None:
        tree = decompose(graph)
        assert source_graph(tree) == graph
        assert tree.virtual_edges == frozenset()

    def test_root_pole(self) -> None:
        graph, _ = path(5)
        tree = decompose(graph, root_pole=2)
        assert 2 in tree.poles
        assert source_graph(tree) == graph

    def test_cycle(self) -> None:
        graph = Graph.from_networkx(nx.cycle_graph(7))
        assert source_graph(decompose(graph)) == graph

    def test_k4_rejected(self) -> None:
        with pytest.raises(K4MinorError):
            decompose(Graph.from_networkx(nx.complete_graph(4)))

    def test_disconnected_rejected(self) -> None:
        with pytest.raises(GraphInputError):
            decompose(Graph(range(4), [(0, 1), (2, 3)]))

    def test_single_vertex_rejected(self) -> None:
        with pytest.raises(GraphInputError):
            decompose(Graph([0]))

    def test_random_graphs_roundtrip(self) -> None:
        for seed in range(40):
            graph = gen_random_k4_free(14, 0.2, seed)
            if not graph.is_connected():
                continue
            assert source_graph(decompose(graph)) == graph


class TestNormalize:
    def test_split_parallel_pieces(self) -> None:
        # Inner vertices 2 and 3 are one component, 4 another.
        tree = SPTree(
            parallel(
                [
                    series([leaf(0, 2), parallel([series([leaf(2, 3), leaf(3, 1)]), leaf(2, 1)])]),
                    series([leaf(0, 4), leaf(4, 1)]),
                ]
            )
        )
        normal = normalize(tree)
        assert realize(normal)[0] == realize(tree)[0]
        assert is_normal_form(normal)
        assert normal.root.kind is NodeKind.PARALLEL

    def test_serial_join_with_disconnected_inner_is_not_normal(self) -> None:
        # Inner vertices 2 and 3 are only joined through the pole 0.
        tree = SPTree(
            series(
                [
                    parallel([series([leaf(0, 3), leaf(3, 2, has_edge=False)]), leaf(0, 2)]),
                    leaf(2, 1),
                ]
            )
        )
        assert not is_normal_form(tree)
        normal = normalize(tree)
        assert is_normal_form(normal)
        assert realize(normal)[0] == realize(tree)[0]

    @pytest.mark.parametrize(("graph", "poles"), GADGETS)
    def test_gadgets_normalize(self, graph: Graph, poles: tuple[int, int]) -> None:
        tree = decompose(graph)
        normal = normalize(tree)
        assert is_normal_form(normal)
        assert realize(normal)[0] == graph

    def test_random_trees_normalize(self) -> None:
        for seed in range(60):
            tree = gen_random_sp(16, seed)
            normal = normalize(tree)
            assert is_normal_form(normal), seed
            assert realize(normal)[0] == realize(tree)[0], seed
            assert normal.poles == tree.poles, seed

    def test_normalize_is_idempotent_on_realization(self) -> None:
        tree = gen_random_sp(12, 3)
        once = normalize(tree)
        twice = normalize(once)
        assert realize(twice)[0] == realize(once)[0]
        assert is_normal_form(twice)
