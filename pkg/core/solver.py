"""Equitable k-coloring of K4-minor-free graphs by reduction and extension.

The solver repeatedly replaces a reduction site by a smaller gadget until the
graph is trivially colorable, then unwinds the reductions, extending the
coloring of each reduced graph to the graph it came from. The descent is an
explicit stack of frames so deep reductions do not hit the interpreter's
recursion limit.

Steps for a graph come from its normalized decomposition first, then from the
decomposition rerooted at each vertex, then from the heuristic ladder. A graph
with no admissible step sends the descent back to the deepest frame that still
has an untried step.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from loguru import logger

from core.config import SolverRuntimeConfig
from core.errors import ExtensionError, InvariantViolationError
from core.graph_core import Coloring, Graph, add_edges, is_equitable, is_proper, sort_colors_increasing
from core.solver_dispatch import admissibility_problems, candidate_steps
from core.solver_extension import branch_multiset, extend_coloring, search_region
from core.solver_sites import candidate_sites
from core.solver_types import (
    BRIDGE_STEP,
    HEURISTIC_TAGS,
    FallbackStage,
    ReductionStep,
    SolveRequest,
    SolveResult,
    SolveStats,
    TraceRecord,
)
from core.sp_decompose import decompose
from core.sp_normalize import normalize
from core.sp_tree import reroot
from core.structure_checks import degeneracy_order

if TYPE_CHECKING:
    from collections.abc import Iterator

    from core.solver_types import ExtensionPlan, LemmaTag
    from core.sp_tree import SPTree


@dataclass
class _Frame:
    graph: Graph
    depth: int
    trace_mark: int
    step: ReductionStep | None = None
    alternatives: Iterator[ReductionStep] | None = None
    bridge_edges: tuple[tuple[int, int], ...] = ()


@dataclass
class _Run:
    k: int
    stats: SolveStats = field(default_factory=SolveStats)
    trace: list[TraceRecord] = field(default_factory=list)


def equitable_color(request: SolveRequest, config: SolverRuntimeConfig | None = None) -> Coloring:
    """Equitable k-coloring of ``request.graph``."""
    return EquitableSolver(config).solve(request).coloring


def direct_coloring(g: Graph, k: int) -> Coloring | None:
    """Coloring without reductions when the graph is small or has max degree at most 2."""
    if len(g) <= k:
        return Coloring(k, {v: k - index for index, v in enumerate(g.sorted_vertices())})
    if g.max_degree <= 2:  # noqa: PLR2004
        order = [v for component in g.components() for v in _walk_component(g, component, k)]
        return Coloring(k, {v: (position % k) + 1 for position, v in enumerate(order)})
    return None


def _walk_component(g: Graph, component: frozenset[int], k: int) -> list[int]:
    """Vertices of a path or cycle in traversal order; cycles of length 1 mod k get their last two swapped."""
    ends = sorted(v for v in component if g.degree(v) <= 1)
    start = ends[0] if ends else min(component)
    order = [start]
    previous, current = None, start
    while True:
        following = sorted(v for v in g.neighbors(current) if v != previous and v != start)
        if not following or following[0] in order:
            break
        previous, current = current, following[0]
        order.append(current)
    if not ends and len(order) % k == 1 and len(order) > 2:  # noqa: PLR2004
        order[-1], order[-2] = order[-2], order[-1]
    return order


def bridge_components(g: Graph) -> tuple[Graph, tuple[tuple[int, int], ...]]:
    """Chain the components by edges between low-degree vertices."""
    rank = {v: position for position, v in enumerate(degeneracy_order(g))}
    ends: list[tuple[int, int]] = []
    for component in g.components():
        ordered = sorted(component, key=lambda v: (g.degree(v), rank[v]))
        ends.append((ordered[0], ordered[1] if len(ordered) > 1 else ordered[0]))
    bridges = tuple((ends[index][1], ends[index + 1][0]) for index in range(len(ends) - 1))
    return add_edges(g, bridges), bridges


class EquitableSolver:
    def __init__(self, config: SolverRuntimeConfig | None = None) -> None:
        self.config = config or SolverRuntimeConfig()

    def solve(self, request: SolveRequest) -> SolveResult:
        run = _Run(k=request.k)
        logger.info("Solving n={} max_degree={} k={}", len(request.graph), request.graph.max_degree, request.k)
        try:
            coloring = self._solve(request.graph, 0, run)
        except InvariantViolationError as exc:
            if not exc.trace:
                exc.trace = list(run.trace)
            raise
        if not is_equitable(request.graph, coloring):
            msg = "Final coloring is not equitable"
            raise InvariantViolationError(msg, run.trace)
        logger.info(
            "Solved n={} k={} in {} steps ({} fallbacks, {} rejected candidates)",
            len(request.graph),
            request.k,
            run.stats.steps,
            run.stats.fallback_activations,
            run.stats.rejected_candidates,
        )
        trace = tuple(run.trace) if self.config.trace_enabled else ()
        return SolveResult(coloring=coloring, trace=trace, stats=run.stats)

    def _solve(self, graph: Graph, depth: int, run: _Run) -> Coloring:
        frames: list[_Frame] = []
        current, level = graph, depth
        while True:
            run.stats.max_depth = max(run.stats.max_depth, level)
            if level - depth > self.config.max_recursion_depth:
                msg = f"Reduction depth exceeded {self.config.max_recursion_depth}"
                raise InvariantViolationError(msg, run.trace)
            coloring = direct_coloring(current, run.k)
            if coloring is not None:
                break
            if not current.is_connected():
                bridged, bridges = bridge_components(current)
                frames.append(_Frame(current, level, len(run.trace), bridge_edges=bridges))
                current, level = bridged, level + 1
                continue
            alternatives = self._admissible_steps(current, run)
            step = next(alternatives, None)
            if step is None:
                frame, step = self._backtrack(frames, current, run)
                current, level = step.reduced, frame.depth + 1
                continue
            frames.append(_Frame(current, level, len(run.trace), step=step, alternatives=alternatives))
            current, level = step.reduced, level + 1

        while frames:
            coloring = self._unwind(frames.pop(), coloring, run)
        return coloring

    def _backtrack(self, frames: list[_Frame], stuck: Graph, run: _Run) -> tuple[_Frame, ReductionStep]:
        """Move the deepest frame with an untried step onto that step, dropping the frames below it."""
        logger.warning("No admissible reduction for a graph on {} vertices with k={}; backtracking", len(stuck), run.k)
        while frames:
            frame = frames[-1]
            step = next(frame.alternatives, None) if frame.alternatives is not None else None
            if step is not None:
                run.stats.descent_backtracks += 1
                frame.step = step
                return frame, step
            frames.pop()
        msg = f"No admissible reduction for a graph on {len(stuck)} vertices with k={run.k}"
        raise InvariantViolationError(msg, run.trace)

    def _admissible_steps(self, g: Graph, run: _Run) -> Iterator[ReductionStep]:
        """Proof branches of the decomposition, then of the decomposition rerooted at each vertex, then heuristics."""
        seen: set[tuple[LemmaTag, frozenset[int], ExtensionPlan]] = set()
        base = decompose(g)
        normal = normalize(base)
        yield from self._steps_of(normal, g, run, seen)
        for vertex in g.sorted_vertices():
            if vertex in base.poles:
                continue
            run.stats.rerooted_decompositions += 1
            logger.debug("Rerooting the decomposition of the graph on {} vertices at {}", len(g), vertex)
            yield from self._steps_of(normalize(reroot(base, vertex)), g, run, seen)
        yield from self._steps_of(normal, g, run, seen, heuristic=True)

    def _steps_of(
        self,
        tree: SPTree,
        g: Graph,
        run: _Run,
        seen: set[tuple[LemmaTag, frozenset[int], ExtensionPlan]],
        *,
        heuristic: bool = False,
    ) -> Iterator[ReductionStep]:
        for site in candidate_sites(tree, run.k):
            for step in candidate_steps(site, g, heuristic=heuristic):
                key = (step.lemma, step.site.graph.vertices, step.plan)
                if key in seen:
                    continue
                seen.add(key)
                problems = admissibility_problems(g, step.reduced, run.k, check_k4=self.config.check_k4_each_step)
                if problems:
                    run.stats.rejected_candidates += 1
                    run.stats.delta_diagnostics += sum("max degree" in problem for problem in problems)
                    run.stats.k4_diagnostics += sum("K4" in problem for problem in problems)
                    logger.debug("Skipping {} at poles {}: {}", step.lemma, site.poles, "; ".join(problems))
                    continue
                yield step

    def _unwind(self, frame: _Frame, alpha: Coloring, run: _Run) -> Coloring:
        if frame.step is None:
            run.stats.bridges += 1
            self._record_bridge(frame, alpha, run)
            return alpha
        try:
            return self._apply(frame, frame.step, alpha, run)
        except ExtensionError as exc:
            logger.warning("Extension of {} at depth {} failed: {}", frame.step.lemma, frame.depth, exc)
            del run.trace[frame.trace_mark :]

        for step in frame.alternatives or ():
            run.stats.extension_retries += 1
            try:
                reduced_coloring = self._solve(step.reduced, frame.depth + 1, run)
                return self._apply(frame, step, reduced_coloring, run)
            except (ExtensionError, InvariantViolationError) as exc:
                logger.warning("Alternative {} at depth {} failed: {}", step.lemma, frame.depth, exc)
                del run.trace[frame.trace_mark :]
        msg = f"Every reduction of the graph on {len(frame.graph)} vertices failed to extend"
        raise InvariantViolationError(msg, run.trace)

    def _apply(self, frame: _Frame, step: ReductionStep, alpha: Coloring, run: _Run) -> Coloring:
        g, k = frame.graph, run.k
        ordered = sort_colors_increasing(alpha)
        region = set(step.region)
        fixed = {v: ordered.assignment[v] for v in g.vertices if v not in region}
        target = branch_multiset(step, ordered)
        fallback = FallbackStage.NONE
        try:
            colors = extend_coloring(g, step, ordered)
            if Counter(colors.values()) != target:
                msg = f"{step.lemma} used colors {sorted(colors.values())} instead of {sorted(target.elements())}"
                raise ExtensionError(msg)
        except ExtensionError as exc:
            logger.debug("Closed-form extension of {} failed ({}); searching the region", step.lemma, exc)
            colors, fallback = self._search(g, fixed, step, target, run)

        coloring = Coloring(k, {**fixed, **colors})
        if self.config.verify_each_step and not is_equitable(g, coloring):
            proper = is_proper(g, coloring)
            msg = f"{step.lemma} at depth {frame.depth} produced a {'non-equitable' if proper else 'improper'} coloring"
            raise ExtensionError(msg)

        run.stats.steps += 1
        if step.lemma in HEURISTIC_TAGS:
            run.stats.heuristic_steps += 1
            logger.warning("Applied {} at depth {} on {} vertices", step.lemma, frame.depth, len(g))
        run.trace.append(
            TraceRecord(
                depth=frame.depth,
                lemma=step.lemma.value,
                k=k,
                poles=step.site.poles,
                middle=step.site.middle,
                width=step.site.width,
                mu=step.site.mu,
                n_before=len(g),
                n_after=len(step.reduced),
                max_degree_after=step.reduced.max_degree,
                removed_vertices=step.removed_vertices,
                added_vertices=step.added_vertices,
                added_edges=step.added_edges,
                region=step.region,
                replaced_colors=tuple(ordered.assignment[v] for v in step.replaced),
                target_multiset=dict(sorted(target.items())),
                region_multiset=dict(sorted(Counter(colors.values()).items())),
                reduced_profile=ordered.profile().as_tuple(),
                profile=coloring.profile().as_tuple(),
                fallback=fallback.value,
            )
        )
        return coloring

    def _search(
        self,
        g: Graph,
        fixed: dict[int, int],
        step: ReductionStep,
        target: Counter[int],
        run: _Run,
    ) -> tuple[dict[int, int], FallbackStage]:
        budget = self.config.fallback_node_budget
        run.stats.fallback_multiset += 1
        found = search_region(g, fixed, step.region, run.k, multiset=target, node_budget=budget)
        if found is not None:
            return found, FallbackStage.MULTISET
        run.stats.fallback_equitable += 1
        found = search_region(g, fixed, step.region, run.k, node_budget=budget)
        if found is not None:
            logger.warning("{} needed an unrestricted equitable completion of its region", step.lemma)
            return found, FallbackStage.EQUITABLE
        msg = f"No completion of the {step.lemma} region exists for this coloring"
        raise ExtensionError(msg)

    def _record_bridge(self, frame: _Frame, alpha: Coloring, run: _Run) -> None:
        profile = alpha.profile().as_tuple()
        run.trace.append(
            TraceRecord(
                depth=frame.depth,
                lemma=BRIDGE_STEP,
                k=run.k,
                poles=None,
                middle=None,
                width=0,
                mu=0,
                n_before=len(frame.graph),
                n_after=len(frame.graph),
                max_degree_after=add_edges(frame.graph, frame.bridge_edges).max_degree,
                removed_vertices=(),
                added_vertices=(),
                added_edges=frame.bridge_edges,
                region=(),
                replaced_colors=(),
                target_multiset={},
                region_multiset={},
                reduced_profile=profile,
                profile=profile,
            )
        )
