"""Tests for the stress instance checks and the summary table."""

from __future__ import annotations

from typing import TYPE_CHECKING
from unittest.mock import patch

import networkx as nx

from core.gadgets import star
from core.graph_core import Graph
from scripts.equitable.commands_stress import _print_summary_table, _step_label, run_stress, summary_rows
from scripts.equitable.stress_core import (
    FALLBACK,
    SOLVER,
    StressInstance,
    StressOutcome,
    StressSettings,
    StressSummary,
    check_instance,
    exhaustive_instances,
    k_values,
    random_instances,
)

if TYPE_CHECKING:
    from pathlib import Path


def _settings(tmp_path: Path, k_policy: str = "tight", oracle_max_n: int = 7) -> StressSettings:
    return StressSettings(k_policy=k_policy, oracle_max_n=oracle_max_n, dump_directory=tmp_path / "dumps")


class TestKValues:
    def test_tight(self) -> None:
        graph, _ = star(5)
        assert k_values(graph, "tight") == [4]

    def test_all(self) -> None:
        graph, _ = star(5)
        assert k_values(graph, "all") == [4, 5, 6]

    def test_all_on_tiny_graph(self) -> None:
        assert k_values(Graph([0]), "all") == [2]


class TestInstances:
    def test_exhaustive_counts(self) -> None:
        assert sum(1 for _ in exhaustive_instances(4)) == 1 + 1 + 4 + 38

    def test_random_labels_are_reproducible(self) -> None:
        first = [instance.label for instance in random_instances(5, 11, 12)]
        second = [instance.label for instance in random_instances(5, 11, 12)]
        assert first == second
        assert all(label.startswith("random n=") for label in first)


class TestCheckInstance:
    def test_k4_graph_is_skipped_after_detector_check(self, tmp_path: Path) -> None:
        graph = Graph.from_networkx(nx.complete_graph(4))
        outcome = check_instance(StressInstance("k4", graph), _settings(tmp_path))
        assert not outcome.k4_free
        assert outcome.detector_checked
        assert outcome.solves == 0
        assert outcome.problems == []

    def test_star_passes_every_check(self, tmp_path: Path) -> None:
        graph, _ = star(5)
        outcome = check_instance(StressInstance("star", graph), _settings(tmp_path, "all"))
        assert outcome.solves == 3
        assert outcome.oracle_checks == 3
        assert not outcome.failed

    def test_oracle_skipped_above_limit(self, tmp_path: Path) -> None:
        graph, _ = star(8)
        outcome = check_instance(StressInstance("star", graph), _settings(tmp_path, oracle_max_n=4))
        assert outcome.oracle_checks == 0
        assert not outcome.detector_checked

    def test_fallback_problems_do_not_fail(self) -> None:
        outcome = StressOutcome("x", 3, problems=[(FALLBACK, "k=3: 1 fallback activations")])
        assert not outcome.failed
        outcome.problems.append((SOLVER, "k=3: broken"))
        assert outcome.failed


class TestSummary:
    def test_serial_run_aggregates(self, tmp_path: Path) -> None:
        instances = [StressInstance(f"star {leaves}", star(leaves)[0]) for leaves in (2, 3, 4)]
        summary = run_stress(instances, _settings(tmp_path), workers=1, app_config={})
        assert summary.instances == 3
        assert summary.solves == 3
        assert summary.failed_instances == 0

    def test_rows_report_failures(self) -> None:
        summary = StressSummary()
        summary.add(StressOutcome("bad", 5, solves=1, problems=[(SOLVER, "k=4: coloring is not equitable")]))
        rows = {name: (status, detail) for name, status, detail in summary_rows(summary, 7)}
        assert rows["Solver + trace verifier"][0] == "fail"
        assert "bad: k=4" in rows["Solver + trace verifier"][1]
        assert rows["Oracle agreement (n <= 7)"][0] == "skip"

    def test_rows_warn_on_fallbacks(self) -> None:
        summary = StressSummary()
        summary.add(StressOutcome("slow", 5, solves=1, problems=[(FALLBACK, "k=4: 1 fallback activations")]))
        rows = {name: status for name, status, _ in summary_rows(summary, 7)}
        assert rows["Extension fallbacks"] == "warn"
        assert rows["Solver + trace verifier"] == "pass"

    def test_rows_warn_on_heuristic_reductions(self) -> None:
        outcome = StressOutcome("hard", 9, solves=1, problems=[(FALLBACK, "k=5: 1 heuristic reduction(s)")])
        outcome.stats.heuristic_steps = 1
        outcome.stats.rerooted_decompositions = 4
        summary = StressSummary()
        summary.add(outcome)
        rows = {name: (status, detail) for name, status, detail in summary_rows(summary, 7)}
        assert rows["Heuristic reductions"] == ("warn", "1 step(s), 4 rerooted decomposition(s), 0 backtrack(s)")
        assert not outcome.failed

    def test_rows_pass_without_heuristic_reductions(self) -> None:
        rows = {name: status for name, status, _ in summary_rows(StressSummary(), 7)}
        assert rows["Heuristic reductions"] == "pass"


class TestSummaryTable:
    def test_step_labels(self) -> None:
        assert _step_label("pass") == "PASS"
        assert _step_label("skip") == "SKIP"
        assert _step_label("custom") == "CUSTOM"

    def test_renders_rows(self) -> None:
        output: list[str] = []
        with (
            patch("click.echo", side_effect=lambda msg, **_kw: output.append(str(msg))),
            patch("click.secho", side_effect=lambda msg, **_kw: output.append(str(msg))),
        ):
            _print_summary_table([("Solver", "pass", "3 checked"), ("Oracle", "fail", "1 problem(s)")])
        full = "\n".join(output)
        assert "Check" in full
        assert "PASS" in full
        assert "FAIL" in full
