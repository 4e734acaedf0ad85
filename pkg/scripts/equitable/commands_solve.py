"""Coloring commands: solve, verify a given coloring, and ask the exact oracle."""

from __future__ import annotations

import sys
from collections import Counter
from pathlib import Path
from typing import TYPE_CHECKING

import click
from loguru import logger

from core.config import load_solver_config, load_stress_config
from core.errors import GraphInputError, InvariantViolationError
from core.graph_core import required_colors
from core.io_formats import coloring_from_json, coloring_to_json, read_edge_list, write_trace_jsonl
from core.oracle import oracle_equitable
from core.solver import EquitableSolver
from core.solver_types import SolveRequest
from scripts.equitable.common import (
    ExitStatus,
    config_dir_option,
    dump_instance,
    fail,
    load_settings,
    write_text,
)

if TYPE_CHECKING:
    from core.graph_core import Coloring, Graph

_INPUT_PATH = click.Path(exists=True, dir_okay=False, path_type=Path)
_OUTPUT_PATH = click.Path(dir_okay=False, path_type=Path)


def coloring_problems(g: Graph, c: Coloring, k: int) -> list[str]:
    """Everything that keeps ``c`` from being an equitable k-coloring of ``g``."""
    problems = []
    if c.k != k:
        problems.append(f"coloring declares k={c.k}, expected k={k}")
    missing = sorted(g.vertices - c.assignment.keys())
    if missing:
        problems.append(f"{len(missing)} vertices uncolored: {missing[:10]}")
    extra = sorted(c.assignment.keys() - g.vertices)
    if extra:
        problems.append(f"{len(extra)} colored vertices are not in the graph: {extra[:10]}")
    clashes = [(u, v) for u, v in g.edges if u in c.assignment and c.assignment.get(u) == c.assignment.get(v)]
    if clashes:
        problems.append(f"{len(clashes)} edges join equal colors, e.g. {clashes[0]}")
    sizes = Counter(c.assignment[v] for v in g.vertices if v in c.assignment)
    counts = [sizes.get(color, 0) for color in range(1, c.k + 1)]
    if counts and max(counts) - min(counts) > 1:
        problems.append(f"class sizes {counts} differ by more than one")
    return problems


@click.command("color")
@click.option("--input", "-i", "input_path", type=_INPUT_PATH, required=True, help="Edge list of the graph")
@click.option("--k", "-k", type=int, required=True, help="Number of colors")
@click.option("--output", "-o", type=_OUTPUT_PATH, default=None, help="Write the coloring JSON here")
@click.option("--trace", "trace_path", type=_OUTPUT_PATH, default=None, help="Write the reduction trace as JSON lines")
@config_dir_option
def color_command(
    input_path: Path,
    k: int,
    output: Path | None,
    trace_path: Path | None,
    config_dir: Path,
) -> None:
    """Compute an equitable k-coloring of a K4-minor-free graph."""
    app_config = load_settings(config_dir)
    solver = EquitableSolver(load_solver_config(app_config))
    try:
        graph = read_edge_list(input_path)
        request = SolveRequest(graph, k)
    except GraphInputError as exc:
        fail(str(exc), ExitStatus.INVALID_INPUT)

    try:
        result = solver.solve(request)
    except InvariantViolationError as exc:
        dump_directory = Path(load_stress_config(app_config).dump_directory)
        dumped = dump_instance(dump_directory, f"color_{input_path.stem}_k{k}", graph, k, exc.trace)
        message = f"Solver invariant violated: {exc}. Instance and trace written to {dumped}"
        fail(message, ExitStatus.INVARIANT_VIOLATION)

    problems = coloring_problems(graph, result.coloring, k)
    if problems:
        fail("Coloring failed verification: " + "; ".join(problems), ExitStatus.FAILED)

    text = coloring_to_json(result.coloring) + "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        write_text(output, text)
        click.echo(f"Coloring written to {output}")
    if trace_path is not None:
        write_trace_jsonl(trace_path, result.trace)
        click.echo(f"Trace ({len(result.trace)} records) written to {trace_path}")

    stats = result.stats
    click.echo(f"Class sizes: {list(result.coloring.profile().as_tuple())}", err=True)
    click.echo(
        f"Reductions: {stats.steps}, fallbacks: {stats.fallback_activations}, "
        f"rejected candidates: {stats.rejected_candidates}, heuristic steps: {stats.heuristic_steps}, "
        f"max depth: {stats.max_depth}",
        err=True,
    )


@click.command("check")
@click.option("--input", "-i", "input_path", type=_INPUT_PATH, required=True, help="Edge list of the graph")
@click.option("--coloring", "-c", "coloring_path", type=_INPUT_PATH, required=True, help="Coloring JSON to verify")
@click.option("--k", "-k", type=int, required=True, help="Number of colors the coloring must use")
@config_dir_option
def check_command(input_path: Path, coloring_path: Path, k: int, config_dir: Path) -> None:
    """Verify that a coloring is an equitable k-coloring of the graph."""
    load_settings(config_dir)
    try:
        graph = read_edge_list(input_path)
        coloring = coloring_from_json(coloring_path.read_text(encoding="utf-8"))
    except GraphInputError as exc:
        fail(str(exc), ExitStatus.INVALID_INPUT)

    problems = coloring_problems(graph, coloring, k)
    if problems:
        for problem in problems:
            click.secho(f"  FAIL  {problem}", fg="red")
        sys.exit(int(ExitStatus.FAILED))
    click.secho(f"  PASS  equitable {k}-coloring of {len(graph)} vertices", fg="green")


@click.command("oracle")
@click.option("--input", "-i", "input_path", type=_INPUT_PATH, required=True, help="Edge list of the graph")
@click.option("--k", "-k", type=int, required=True, help="Number of colors")
@click.option("--output", "-o", type=_OUTPUT_PATH, default=None, help="Write the witness coloring JSON here")
@config_dir_option
def oracle_command(input_path: Path, k: int, output: Path | None, config_dir: Path) -> None:
    """Decide equitable k-colorability by exhaustive search."""
    load_settings(config_dir)
    try:
        graph = read_edge_list(input_path)
        result = oracle_equitable(graph, k)
    except GraphInputError as exc:
        fail(str(exc), ExitStatus.INVALID_INPUT)

    bound = required_colors(graph.max_degree)
    logger.info("Oracle explored {} nodes for n={} k={}", result.nodes_explored, len(graph), k)
    if not result.feasible:
        click.secho(
            f"Infeasible: no equitable {k}-coloring (bound for max degree {graph.max_degree} is {bound})",
            fg="yellow",
        )
        sys.exit(int(ExitStatus.FAILED))

    click.secho(f"Feasible: equitable {k}-coloring found after {result.nodes_explored} nodes", fg="green")
    if output is not None and result.witness is not None:
        write_text(output, coloring_to_json(result.witness) + "\n")
        click.echo(f"Witness written to {output}")


def register_solve_commands(main_group: click.Group) -> None:
    """Register the coloring commands to the main group."""
    main_group.add_command(color_command)
    main_group.add_command(check_command)
    main_group.add_command(oracle_command)
