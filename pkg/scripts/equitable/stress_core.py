"""Instance supply and per-instance checks for the stress command.

Each instance is checked in isolation, so instances can be fanned out across
worker processes and the outcomes aggregated in any order.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

from loguru import logger

from core.config import GeneratorRuntimeConfig, SolverRuntimeConfig, configure_logging
from core.errors import EquitableError, InvariantViolationError
from core.generators import gen_random_k4_free
from core.graph_core import Graph, has_k4_minor, is_equitable, required_colors
from core.oracle import enumerate_connected_graphs, oracle_equitable, oracle_k4_minor
from core.solver import EquitableSolver
from core.solver_types import SolveRequest, SolveStats
from core.sp_decompose import decompose
from core.sp_normalize import is_normal_form, normalize
from core.sp_tree import realize, source_graph
from core.structure_checks import verify_trace
from scripts.equitable.common import dump_instance

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping

    from core.solver_types import TraceRecord

SOLVER = "solver"
ORACLE = "oracle"
DETECTOR = "detector"
STRUCTURE = "structure"
FALLBACK = "fallback"
CATEGORIES = (SOLVER, ORACLE, DETECTOR, STRUCTURE, FALLBACK)
RANDOM_DROP_PROBABILITIES = (0.0, 0.1, 0.3)


@dataclass(frozen=True)
class StressInstance:
    label: str
    graph: Graph


@dataclass(frozen=True)
class StressSettings:
    k_policy: str
    oracle_max_n: int
    dump_directory: Path
    solver: SolverRuntimeConfig = field(default_factory=SolverRuntimeConfig)


@dataclass
class StressOutcome:
    label: str
    n: int
    k4_free: bool = True
    solves: int = 0
    oracle_checks: int = 0
    detector_checked: bool = False
    problems: list[tuple[str, str]] = field(default_factory=list)
    dumps: list[str] = field(default_factory=list)
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def failed(self) -> bool:
        return any(category != FALLBACK for category, _ in self.problems)


def k_values(g: Graph, k_policy: str) -> list[int]:
    """``tight`` is the bound alone; ``all`` is every k from the bound up to the vertex count."""
    bound = required_colors(g.max_degree)
    if k_policy == "tight":
        return [bound]
    return list(range(bound, max(bound, len(g)) + 1))


def exhaustive_instances(max_n: int) -> Iterator[StressInstance]:
    for n in range(1, max_n + 1):
        for index, graph in enumerate(enumerate_connected_graphs(n)):
            yield StressInstance(f"exhaustive n={n} #{index}", graph)


def random_instances(
    iterations: int,
    seed: int,
    max_n: int,
    config: GeneratorRuntimeConfig | None = None,
) -> Iterator[StressInstance]:
    """Instances drawn from a master seed; each label carries its own reproducible seed."""
    rng = random.Random(seed)
    for _ in range(iterations):
        n = rng.randint(2, max(2, max_n))
        drop_prob = rng.choice(RANDOM_DROP_PROBABILITIES)
        instance_seed = rng.getrandbits(64)
        graph = gen_random_k4_free(n, drop_prob, instance_seed, config)
        yield StressInstance(f"random n={n} drop={drop_prob} seed={instance_seed}", graph)


def _dump_name(label: str, k: int) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_") + f"_k{k}"


def init_worker(app_config: Mapping[str, object]) -> None:
    configure_logging(app_config)


def check_instance(instance: StressInstance, settings: StressSettings) -> StressOutcome:
    """Run every applicable check on one graph and collect the problems found."""
    g = instance.graph
    outcome = StressOutcome(instance.label, len(g))
    outcome.k4_free = not has_k4_minor(g)

    outcome.detector_checked = len(g) <= settings.oracle_max_n
    if outcome.detector_checked and oracle_k4_minor(g) != (not outcome.k4_free):
        message = f"reduction detector says k4_free={outcome.k4_free}, exhaustive search disagrees"
        outcome.problems.append((DETECTOR, message))
    if not outcome.k4_free:
        return outcome

    _check_structure(g, outcome)
    solver = EquitableSolver(settings.solver)
    for k in k_values(g, settings.k_policy):
        _check_solve(instance, k, solver, settings, outcome)
    return outcome


def _check_structure(g: Graph, outcome: StressOutcome) -> None:
    if len(g) < 2 or not g.is_connected():  # noqa: PLR2004
        return
    try:
        tree = decompose(g)
        normal = normalize(tree)
    except EquitableError as exc:
        outcome.problems.append((STRUCTURE, f"decomposition failed: {exc}"))
        return
    if source_graph(tree) != g:
        outcome.problems.append((STRUCTURE, "decomposition does not realize the graph"))
    if realize(normal)[0] != realize(tree)[0]:
        outcome.problems.append((STRUCTURE, "normalization changed the realized graph"))
    if not is_normal_form(normal):
        outcome.problems.append((STRUCTURE, "normalized tree is not in normal form"))


def _check_solve(
    instance: StressInstance,
    k: int,
    solver: EquitableSolver,
    settings: StressSettings,
    outcome: StressOutcome,
) -> None:
    g = instance.graph
    outcome.solves += 1
    trace: tuple[TraceRecord, ...] = ()
    problems: list[tuple[str, str]] = []
    try:
        result = solver.solve(SolveRequest(g, k))
    except InvariantViolationError as exc:
        trace = tuple(exc.trace)
        problems.append((SOLVER, f"k={k}: {exc}"))
    except EquitableError as exc:
        problems.append((SOLVER, f"k={k}: {exc}"))
    else:
        trace = result.trace
        outcome.stats.merge(result.stats)
        if not is_equitable(g, result.coloring):
            problems.append((SOLVER, f"k={k}: coloring is not equitable"))
        problems.extend((SOLVER, f"k={k}: {problem}") for problem in verify_trace(g, result.coloring, trace))
        if result.stats.fallback_activations:
            problems.append((FALLBACK, f"k={k}: {result.stats.fallback_activations} fallback activations"))
        if result.stats.heuristic_steps:
            problems.append((FALLBACK, f"k={k}: {result.stats.heuristic_steps} heuristic reduction(s)"))

    if len(g) <= settings.oracle_max_n:
        outcome.oracle_checks += 1
        if not oracle_equitable(g, k).feasible:
            problems.append((ORACLE, f"k={k}: exhaustive search finds no equitable coloring"))

    if problems:
        logger.warning("{} k={}: {}", instance.label, k, "; ".join(message for _, message in problems))
        dumped = dump_instance(settings.dump_directory, _dump_name(instance.label, k), g, k, trace)
        outcome.dumps.append(str(dumped))
        outcome.problems.extend(problems)


@dataclass
class StressSummary:
    instances: int = 0
    skipped_k4: int = 0
    solves: int = 0
    oracle_checks: int = 0
    detector_checks: int = 0
    failed_instances: int = 0
    problems: Counter[str] = field(default_factory=Counter)
    examples: dict[str, str] = field(default_factory=dict)
    dumps: list[str] = field(default_factory=list)
    stats: SolveStats = field(default_factory=SolveStats)

    def add(self, outcome: StressOutcome) -> None:
        self.instances += 1
        self.skipped_k4 += not outcome.k4_free
        self.solves += outcome.solves
        self.oracle_checks += outcome.oracle_checks
        self.detector_checks += outcome.detector_checked
        self.failed_instances += outcome.failed
        for category, message in outcome.problems:
            self.problems[category] += 1
            self.examples.setdefault(category, f"{outcome.label}: {message}")
        self.dumps.extend(outcome.dumps)
        self.stats.merge(outcome.stats)
