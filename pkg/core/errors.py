"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Sequence

    from core.solver_types import TraceRecord


class EquitableError(Exception):
    """Base class for every error raised by this package."""


class GraphInputError(EquitableError, ValueError):
    """Malformed graph, coloring or argument supplied by the caller."""


class K4MinorError(GraphInputError):
    """The input graph contains K4 as a minor."""


class BoundViolationError(GraphInputError):
    """The requested number of colors is below ceil((max_degree + 3) / 2)."""


class StructuralError(EquitableError, ValueError):
    """An SP-decomposition tree violates its structural invariants."""


class ExtensionError(EquitableError):
    """A reduction branch could not extend the coloring of the reduced graph."""


class InvariantViolationError(EquitableError, RuntimeError):
    """The solver reached a state its reductions should rule out."""

    def __init__(self, message: str, trace: Sequence[TraceRecord] = ()) -> None:
        super().__init__(message)
        self.trace = list(trace)
