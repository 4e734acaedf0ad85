"""Shared pieces of the equitable commands: exit codes, config loading and failure dumps."""

from __future__ import annotations

import sys
from enum import IntEnum
from pathlib import Path
from typing import TYPE_CHECKING, NoReturn

import click
from loguru import logger

from core.config import CONFIG_DIR, ConfigMap, configure_logging, load_app_config
from core.io_formats import format_edge_list, write_trace_jsonl

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

    from core.graph_core import Graph
    from core.solver_types import TraceRecord


class ExitStatus(IntEnum):
    OK = 0
    FAILED = 1
    INVALID_INPUT = 2
    INVARIANT_VIOLATION = 3


def config_dir_option[F: Callable[..., object]](func: F) -> F:
    return click.option(
        "--config-dir",
        type=click.Path(file_okay=False, path_type=Path),
        default=CONFIG_DIR,
        show_default=True,
        help="Directory containing solver_config.json",
    )(func)


def load_settings(config_dir: Path) -> ConfigMap:
    """Read the config directory and set up logging for this process."""
    try:
        app_config = load_app_config(config_dir)
    except ValueError as exc:
        fail(str(exc), ExitStatus.INVALID_INPUT)
    configure_logging(app_config)
    return app_config


def fail(message: str, status: ExitStatus) -> NoReturn:
    click.secho(message, fg="red", err=True)
    sys.exit(int(status))


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def dump_instance(
    dump_directory: Path,
    name: str,
    graph: Graph,
    k: int,
    trace: Iterable[TraceRecord] = (),
) -> Path:
    """Write a reproducible failing instance: edge list with k in the header, plus the trace."""
    target = dump_directory / name
    target.mkdir(parents=True, exist_ok=True)
    write_text(target / "graph.txt", f"# k={k}\n{format_edge_list(graph)}")
    write_trace_jsonl(target / "trace.jsonl", trace)
    logger.warning("Dumped failing instance to {}", target)
    return target
