"""Tests for the __main__ entry points."""

from __future__ import annotations

import runpy
from unittest.mock import patch


def test_main_module_runs_cli() -> None:
    with patch("scripts.equitable.cli.cli") as mock_cli:
        runpy.run_module("main", run_name="__main__", alter_sys=True)
        mock_cli.assert_called_once()
