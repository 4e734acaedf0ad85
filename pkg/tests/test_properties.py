import pytest

try:
    from hypothesis import given, settings
    from hypothesis import strategies as st
except ModuleNotFoundError:  # pragma: no cover
    pytest.skip("hypothesis not installed", allow_module_level=True)

from core.generators import gen_random_k4_free, gen_random_sp
from core.graph_core import Graph, has_k4_minor, is_equitable, required_colors
from core.io_formats import format_edge_list, parse_edge_list
from core.oracle import oracle_k4_minor
from core.solver import EquitableSolver
from core.solver_types import SolveRequest
from core.sp_decompose import decompose
from core.sp_normalize import is_normal_form, normalize
from core.sp_tree import realize, reroot, source_graph
from core.structure_checks import verify_trace


@st.composite
def k4_free_graphs(draw: st.DrawFn) -> Graph:
    n = draw(st.integers(min_value=2, max_value=24))
    drop = draw(st.sampled_from([0.0, 0.1, 0.3]))
    seed = draw(st.integers(min_value=0, max_value=2**32))
    return gen_random_k4_free(n, drop, seed)


@st.composite
def small_graphs(draw: st.DrawFn) -> Graph:
    n = draw(st.integers(min_value=1, max_value=7))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(range(n), chosen)


@given(k4_free_graphs(), st.integers(min_value=0, max_value=3))
@settings(max_examples=60, deadline=None)
def test_solver_colors_equitably_at_and_above_bound(graph: Graph, extra: int) -> None:
    k = required_colors(graph.max_degree) + extra
    result = EquitableSolver().solve(SolveRequest(graph, k))
    assert is_equitable(graph, result.coloring)
    assert verify_trace(graph, result.coloring, result.trace) == []


@given(small_graphs())
@settings(max_examples=150, deadline=None)
def test_reduction_detector_matches_exhaustive_search(graph: Graph) -> None:
    assert has_k4_minor(graph) == oracle_k4_minor(graph)


@given(st.integers(min_value=2, max_value=30), st.integers(min_value=0, max_value=2**32))
@settings(max_examples=60, deadline=None)
def test_normalize_keeps_realization(n: int, seed: int) -> None:
    tree = gen_random_sp(n, seed)
    normal = normalize(tree)
    assert is_normal_form(normal)
    assert realize(normal)[0] == realize(tree)[0]


@given(st.integers(min_value=2, max_value=30), st.integers(min_value=0, max_value=2**32), st.data())
@settings(max_examples=60, deadline=None)
def test_reroot_keeps_realization(n: int, seed: int, data: st.DataObject) -> None:
    tree = gen_random_sp(n, seed)
    vertex = data.draw(st.sampled_from(sorted(tree.vertices)))
    rerooted = reroot(tree, vertex)
    assert vertex in rerooted.poles
    assert realize(rerooted)[0] == realize(tree)[0]


@given(k4_free_graphs())
@settings(max_examples=60, deadline=None)
def test_decompose_realizes_connected_graphs(graph: Graph) -> None:
    if not graph.is_connected():
        return
    assert source_graph(decompose(graph)) == graph


@given(small_graphs())
def test_edge_list_text_roundtrip(graph: Graph) -> None:
    assert parse_edge_list(format_edge_list(graph)) == graph
