"""Stress command: run the solver, the verifiers and the oracle over many instances.

Prints a PASS / WARN / FAIL summary table and exits non-zero if any check fails.
Use --strict to promote warnings (fallback activations, degree diagnostics, heuristic
reductions) to failures.
"""

from __future__ import annotations

import multiprocessing as mp
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import TYPE_CHECKING

import click
from loguru import logger

from core.config import K_POLICIES, load_generator_config, load_solver_config, load_stress_config
from scripts.equitable.common import ExitStatus, config_dir_option, fail, load_settings
from scripts.equitable.stress_core import (
    DETECTOR,
    FALLBACK,
    ORACLE,
    SOLVER,
    STRUCTURE,
    StressSettings,
    StressSummary,
    check_instance,
    exhaustive_instances,
    init_worker,
    random_instances,
)

if TYPE_CHECKING:
    from collections.abc import Iterable

    from scripts.equitable.stress_core import StressInstance

_CHUNK_SIZE = 64


def _step_label(status: str) -> str:
    labels = {"pass": "PASS", "warn": "WARN", "fail": "FAIL", "skip": "SKIP"}
    return labels.get(status, status.upper())


def _print_summary_table(results: list[tuple[str, str, str]]) -> None:
    """Print a formatted PASS/WARN/FAIL summary table."""
    click.echo("\n" + "=" * 72)
    click.echo(f"{'Check':<40}  {'Status':<6}  Detail")
    click.echo("-" * 72)
    for step_name, status, detail in results:
        status_label = _step_label(status)
        color = {"PASS": "green", "WARN": "yellow", "FAIL": "red", "SKIP": "cyan"}.get(status_label, "white")
        click.secho(f"  {step_name:<38}  {status_label:<6}  {detail}", fg=color)
    click.echo("=" * 72)


def _category_row(summary: StressSummary, category: str, name: str, checked: int) -> tuple[str, str, str]:
    if checked == 0:
        return name, "skip", "nothing in range"
    count = summary.problems[category]
    if count == 0:
        return name, "pass", f"{checked} checked"
    return name, "fail", f"{count} problem(s), first: {summary.examples[category]}"


def summary_rows(summary: StressSummary, oracle_max_n: int) -> list[tuple[str, str, str]]:
    stats = summary.stats
    rows = [
        (
            "Instances",
            "pass" if summary.instances else "skip",
            f"{summary.instances} graphs, {summary.skipped_k4} with K4 minor, {summary.solves} solves",
        ),
        _category_row(summary, SOLVER, "Solver + trace verifier", summary.solves),
        _category_row(summary, STRUCTURE, "Decompose / normalize roundtrip", summary.instances - summary.skipped_k4),
        _category_row(summary, ORACLE, f"Oracle agreement (n <= {oracle_max_n})", summary.oracle_checks),
        _category_row(summary, DETECTOR, f"K4 detector agreement (n <= {oracle_max_n})", summary.detector_checks),
    ]
    fallbacks = summary.problems[FALLBACK]
    rows.append(
        (
            "Extension fallbacks",
            "warn" if fallbacks else "pass",
            f"{stats.fallback_activations} activation(s) in {fallbacks} solve(s)",
        ),
    )
    rows.append(
        (
            "Reduced max degree diagnostics",
            "warn" if stats.delta_diagnostics else "pass",
            f"{stats.delta_diagnostics} rejected candidate(s), {stats.rejected_candidates} rejections overall",
        ),
    )
    rows.append(
        (
            "Heuristic reductions",
            "warn" if stats.heuristic_steps else "pass",
            f"{stats.heuristic_steps} step(s), {stats.rerooted_decompositions} rerooted decomposition(s), "
            f"{stats.descent_backtracks} backtrack(s)",
        ),
    )
    return rows


def run_stress(
    instances: Iterable[StressInstance],
    settings: StressSettings,
    workers: int,
    app_config: dict[str, object],
) -> StressSummary:
    """Check every instance, across worker processes when ``workers > 1``."""
    summary = StressSummary()
    check = partial(check_instance, settings=settings)
    if workers <= 1:
        for outcome in map(check, instances):
            summary.add(outcome)
        return summary
    with ProcessPoolExecutor(
        max_workers=workers,
        mp_context=mp.get_context("spawn"),
        initializer=init_worker,
        initargs=(app_config,),
    ) as executor:
        for outcome in executor.map(check, instances, chunksize=_CHUNK_SIZE):
            summary.add(outcome)
    return summary


@click.command("stress")
@click.option(
    "--mode",
    type=click.Choice(["exhaustive", "random"]),
    required=True,
    help="Every connected graph up to --max-n vertices, or seeded random K4-minor-free graphs",
)
@click.option("--max-n", type=int, default=5, show_default=True, help="Largest vertex count to generate")
@click.option("--iters", type=int, default=100, show_default=True, help="Number of random instances")
@click.option("--seed", type=int, default=None, help="Master seed for random mode (required there)")
@click.option(
    "--k-policy",
    type=click.Choice(K_POLICIES),
    default=None,
    help="tight: k at the bound; all: every k up to n",
)
@click.option("--workers", type=int, default=None, help="Worker processes (defaults to the config value)")
@click.option(
    "--dump-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Where failing instances are written (defaults to the config value)",
)
@click.option("--strict", is_flag=True, help="Treat warnings as failures")
@config_dir_option
def stress_command(
    mode: str,
    max_n: int,
    iters: int,
    seed: int | None,
    k_policy: str | None,
    workers: int | None,
    dump_dir: Path | None,
    strict: bool,
    config_dir: Path,
) -> None:
    """Cross-check solver, verifiers and oracle over many instances."""
    app_config = load_settings(config_dir)
    stress_config = load_stress_config(app_config)
    if mode == "random" and seed is None:
        fail("Random stress runs need an explicit --seed", ExitStatus.INVALID_INPUT)
    if max_n < 1 or iters < 0:
        fail("--max-n must be positive and --iters non-negative", ExitStatus.INVALID_INPUT)

    settings = StressSettings(
        k_policy=k_policy or stress_config.default_k_policy,
        oracle_max_n=stress_config.oracle_max_n,
        dump_directory=dump_dir or Path(stress_config.dump_directory),
        solver=load_solver_config(app_config),
    )
    if mode == "exhaustive":
        instances = exhaustive_instances(max_n)
    else:
        instances = random_instances(iters, seed or 0, max_n, load_generator_config(app_config))

    tic = time.perf_counter()
    summary = run_stress(instances, settings, workers or stress_config.workers, app_config)
    toc = time.perf_counter()
    logger.info("Stress run ({}) checked {} graphs in {:0.2f} seconds", mode, summary.instances, toc - tic)

    rows = summary_rows(summary, settings.oracle_max_n)
    _print_summary_table(rows)
    if summary.dumps:
        click.echo(f"{len(summary.dumps)} instance(s) dumped under {settings.dump_directory}")

    failing = [row for row in rows if row[1] == "fail" or (strict and row[1] == "warn")]
    if failing:
        click.secho(f"{len(failing)} check(s) failed", fg="red")
        sys.exit(int(ExitStatus.FAILED))
    click.secho(f"All checks passed in {toc - tic:0.1f}s", fg="green")


def register_stress_commands(main_group: click.Group) -> None:
    """Register the stress command to the main group."""
    main_group.add_command(stress_command)
