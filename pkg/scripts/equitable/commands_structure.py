"""Structure commands: SP decomposition of an input graph and instance generation."""

from __future__ import annotations

from pathlib import Path

import click

from core.config import GeneratorRuntimeConfig, load_generator_config
from core.errors import EquitableError
from core.generators import RANDOM_FAMILIES, Family, GenSpec, gen_family, gen_random_k4_free_with_tree, gen_random_sp
from core.graph_core import Graph
from core.io_formats import format_edge_list, graph_to_dot, read_edge_list, tree_to_dot, tree_to_json
from core.solver import bridge_components
from core.sp_decompose import decompose
from core.sp_normalize import is_normal_form, normalize
from core.sp_tree import SPTree, mark_virtual
from scripts.equitable.common import ExitStatus, config_dir_option, fail, load_settings, write_text

_OUTPUT_PATH = click.Path(dir_okay=False, path_type=Path)


def decompose_any(graph: Graph, root_pole: int | None = None) -> SPTree:
    """Decompose ``graph``, chaining its components by virtual edges when it is disconnected."""
    if graph.is_connected():
        return decompose(graph, root_pole)
    bridged, bridges = bridge_components(graph)
    tree = decompose(bridged, root_pole)
    return SPTree(mark_virtual(tree.root, bridges))


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        click.echo(text, nl=False)
    else:
        write_text(output, text)
        click.echo(f"Written to {output}", err=True)


@click.command("decompose")
@click.option(
    "--input",
    "-i",
    "input_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Edge list of the graph",
)
@click.option("--normalize", "normalize_tree", is_flag=True, help="Bring the tree into normal form")
@click.option("--dot", "as_dot", is_flag=True, help="Emit Graphviz DOT instead of JSON")
@click.option("--root-pole", type=int, default=None, help="Reroot the tree so this vertex is a root pole")
@click.option("--output", "-o", type=_OUTPUT_PATH, default=None, help="Write the tree here instead of stdout")
@click.option("--graph-dot", type=_OUTPUT_PATH, default=None, help="Also write the realized graph as DOT")
@config_dir_option
def decompose_command(
    input_path: Path,
    normalize_tree: bool,
    as_dot: bool,
    root_pole: int | None,
    output: Path | None,
    graph_dot: Path | None,
    config_dir: Path,
) -> None:
    """Build the SP-decomposition tree of a K4-minor-free graph."""
    load_settings(config_dir)
    try:
        graph = read_edge_list(input_path)
        tree = decompose_any(graph, root_pole)
    except EquitableError as exc:
        fail(str(exc), ExitStatus.INVALID_INPUT)

    if normalize_tree:
        tree = normalize(tree)
    _emit(tree_to_dot(tree) if as_dot else tree_to_json(tree) + "\n", output)
    if graph_dot is not None:
        write_text(graph_dot, graph_to_dot(graph, virtual_edges=tree.virtual_edges))
    click.echo(
        f"Tree on {len(tree.vertices)} vertices, poles {tree.poles}, normal form: {is_normal_form(tree)}",
        err=True,
    )


@click.command("gen")
@click.option(
    "--family",
    "-f",
    type=click.Choice([family.value for family in Family]),
    required=True,
    help="Gadget family or random model",
)
@click.option("--size", "-n", type=int, required=True, help="Width for gadgets, leaves for stars, vertices otherwise")
@click.option("--seed", type=int, default=None, help="Seed for random families (required for them)")
@click.option("--drop-prob", type=float, default=0.0, show_default=True, help="Edge deletion probability")
@click.option("--output", "-o", type=_OUTPUT_PATH, default=None, help="Write the edge list here instead of stdout")
@click.option("--tree-output", type=_OUTPUT_PATH, default=None, help="Also write the SP tree as JSON")
@config_dir_option
def gen_command(
    family: str,
    size: int,
    seed: int | None,
    drop_prob: float,
    output: Path | None,
    tree_output: Path | None,
    config_dir: Path,
) -> None:
    """Generate a gadget or a seeded random K4-minor-free graph."""
    generator_config = load_generator_config(load_settings(config_dir))
    chosen = Family(family)
    if chosen in RANDOM_FAMILIES and seed is None:
        fail(f"Family {chosen} needs an explicit --seed", ExitStatus.INVALID_INPUT)

    try:
        spec = GenSpec(chosen, size, seed or 0, drop_prob)
        graph, poles = gen_family(spec, generator_config)
        tree = None
        if tree_output is not None:
            tree = _generated_tree(spec, graph, poles, generator_config)
    except EquitableError as exc:
        fail(str(exc), ExitStatus.INVALID_INPUT)

    _emit(f"# {chosen} size={size} seed={spec.seed} poles={poles[0]},{poles[1]}\n{format_edge_list(graph)}", output)
    if tree is not None and tree_output is not None:
        write_text(tree_output, tree_to_json(tree) + "\n")


def _generated_tree(
    spec: GenSpec,
    graph: Graph,
    poles: tuple[int, int],
    config: GeneratorRuntimeConfig,
) -> SPTree:
    match spec.family:
        case Family.RANDOM_SP:
            return gen_random_sp(spec.size, spec.seed, config)
        case Family.RANDOM_K4_FREE:
            _, tree = gen_random_k4_free_with_tree(spec.size, spec.drop_prob, spec.seed, config)
            if tree is None:
                return decompose_any(graph)
            return tree
        case _:
            return decompose_any(graph, poles[0])


def register_structure_commands(main_group: click.Group) -> None:
    """Register the decomposition and generator commands to the main group."""
    main_group.add_command(decompose_command)
    main_group.add_command(gen_command)
