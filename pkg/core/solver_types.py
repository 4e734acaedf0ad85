"""Value types shared by the site search, the branch dispatch, the extension and the solver loop."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from enum import StrEnum
from types import MappingProxyType
from typing import TYPE_CHECKING

from core.errors import BoundViolationError, ExtensionError, GraphInputError, K4MinorError
from core.graph_core import Coloring, Edge, Graph, has_k4_minor, required_colors

if TYPE_CHECKING:
    from collections.abc import Mapping

    from core.gadgets import GadgetKind
    from core.sp_tree import SPNode


class LemmaTag(StrEnum):
    CRYSTAL_DIAMOND = "CRYSTAL_DIAMOND"
    INNER_DELETION = "INNER_DELETION"
    CONTRACTION = "CONTRACTION"
    POLE_DELETION = "POLE_DELETION"
    WIDTH_K = "WIDTH_K"
    PARALLEL_SMALL = "PARALLEL_SMALL"
    PARALLEL_LARGE = "PARALLEL_LARGE"
    PARALLEL_DOMINATED = "PARALLEL_DOMINATED"
    SERIES_INDEPENDENT = "SERIES_INDEPENDENT"
    SERIES_CLIQUE = "SERIES_CLIQUE"
    HEURISTIC_INNER_DELETION = "HEURISTIC_INNER_DELETION"
    HEURISTIC_POLE_DELETION = "HEURISTIC_POLE_DELETION"


# Tried only after every proof branch of every decomposition; the extension may need the region search.
HEURISTIC_TAGS = frozenset({LemmaTag.HEURISTIC_INNER_DELETION, LemmaTag.HEURISTIC_POLE_DELETION})

BRIDGE_STEP = "BRIDGE"


class JoinKind(StrEnum):
    PARALLEL = "parallel"
    SERIES = "series"
    ATOMIC = "atomic"


class FallbackStage(StrEnum):
    NONE = "none"
    MULTISET = "multiset"
    EQUITABLE = "equitable"


@dataclass(frozen=True)
class SolveRequest:
    graph: Graph
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            msg = f"Number of colors must be positive, got {self.k}"
            raise GraphInputError(msg)
        bound = required_colors(self.graph.max_degree)
        if self.k < bound:
            msg = (
                f"k={self.k} is below the bound ceil((max_degree + 3) / 2) = {bound} "
                f"for max_degree {self.graph.max_degree}"
            )
            raise BoundViolationError(msg)
        if has_k4_minor(self.graph):
            msg = "Graph has a K4 minor"
            raise K4MinorError(msg)


@dataclass(frozen=True, eq=False)
class ReductionSite:
    """A construction subtree of a normalized tree and the two-terminal graph it represents.

    For serial joins ``poles`` are the outer poles and ``middle`` the pole shared by
    the two halves; ``first_inner``/``second_inner`` are the inner vertices of the
    two halves (the middle pole excluded).
    """

    node: SPNode
    parts: tuple[SPNode, ...]
    poles: tuple[int, int]
    graph: Graph
    k: int
    gadget: GadgetKind
    join_kind: JoinKind
    first_inner: frozenset[int] = frozenset()
    second_inner: frozenset[int] = frozenset()
    middle: int | None = None

    @property
    def inner(self) -> frozenset[int]:
        return self.graph.vertices - set(self.poles)

    @property
    def width(self) -> int:
        return len(self.graph) - 2

    @property
    def mu(self) -> int:
        return self.width - self.k


@dataclass(frozen=True)
class ExtensionPlan:
    """Vertices chosen by the dispatch for one branch.

    ``pole`` is the pole the branch acts on (deleted, recolored or given the
    contraction color); ``other_pole`` is the remaining one.
    """

    pole: int
    other_pole: int
    middle: int | None = None
    a_prime: int | None = None
    b_prime: int | None = None
    u1: int | None = None
    u2: int | None = None
    w1: int | None = None
    w1_prime: int | None = None
    w2: int | None = None
    w2_prime: int | None = None
    pair_first: tuple[int, int] | None = None
    pair_second: tuple[int, int] | None = None
    clique: tuple[int, int] | None = None
    side_first: tuple[int, ...] = ()
    side_second: tuple[int, ...] = ()
    contraction_vertex: int | None = None
    crystal_vertices: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class ReductionStep:
    lemma: LemmaTag
    site: ReductionSite
    plan: ExtensionPlan
    reduced: Graph
    region: tuple[int, ...]
    replaced: tuple[int, ...]
    added_vertices: tuple[int, ...] = ()
    added_edges: tuple[Edge, ...] = ()

    @property
    def removed_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.region) - self.reduced.vertices))


@dataclass(frozen=True)
class MultiplicityVector:
    """Colors to distribute with multiplicity one or two each."""

    multiplicities: Mapping[int, int]

    def __post_init__(self) -> None:
        cleaned = {color: count for color, count in sorted(self.multiplicities.items()) if count}
        for color, count in cleaned.items():
            if count not in (1, 2):
                msg = f"Color {color} has multiplicity {count}; only 1 or 2 can be distributed"
                raise ExtensionError(msg)
        object.__setattr__(self, "multiplicities", MappingProxyType(cleaned))

    @classmethod
    def from_counter(cls, counter: Counter[int]) -> MultiplicityVector:
        return cls(dict(counter))

    @property
    def m(self) -> int:
        return len(self.multiplicities)

    @property
    def m1(self) -> int:
        return sum(1 for count in self.multiplicities.values() if count == 1)

    @property
    def m2(self) -> int:
        return sum(1 for count in self.multiplicities.values() if count == 2)  # noqa: PLR2004

    @property
    def total(self) -> int:
        return sum(self.multiplicities.values())


@dataclass(frozen=True)
class TraceRecord:
    """One completed reduction, in the order the recursion finished them (deepest first)."""

    depth: int
    lemma: str
    k: int
    poles: tuple[int, int] | None
    middle: int | None
    width: int
    mu: int
    n_before: int
    n_after: int
    max_degree_after: int
    removed_vertices: tuple[int, ...]
    added_vertices: tuple[int, ...]
    added_edges: tuple[Edge, ...]
    region: tuple[int, ...]
    replaced_colors: tuple[int, ...]
    target_multiset: Mapping[int, int]
    region_multiset: Mapping[int, int]
    reduced_profile: tuple[int, ...]
    profile: tuple[int, ...]
    fallback: str = FallbackStage.NONE.value

    def to_dict(self) -> dict[str, object]:
        data = asdict(self)
        data["target_multiset"] = {str(color): count for color, count in self.target_multiset.items()}
        data["region_multiset"] = {str(color): count for color, count in self.region_multiset.items()}
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> TraceRecord:
        def pairs(value: object) -> tuple[Edge, ...]:
            return tuple((int(u), int(v)) for u, v in value)  # type: ignore[union-attr]

        def ints(value: object) -> tuple[int, ...]:
            return tuple(int(x) for x in value)  # type: ignore[union-attr]

        def counts(value: object) -> dict[int, int]:
            return {int(color): int(count) for color, count in dict(value).items()}  # type: ignore[call-overload]

        poles = data.get("poles")
        middle = data.get("middle")
        return cls(
            depth=int(data["depth"]),  # type: ignore[call-overload]
            lemma=str(data["lemma"]),
            k=int(data["k"]),  # type: ignore[call-overload]
            poles=(int(poles[0]), int(poles[1])) if poles else None,  # type: ignore[index]
            middle=int(middle) if middle is not None else None,  # type: ignore[call-overload]
            width=int(data["width"]),  # type: ignore[call-overload]
            mu=int(data["mu"]),  # type: ignore[call-overload]
            n_before=int(data["n_before"]),  # type: ignore[call-overload]
            n_after=int(data["n_after"]),  # type: ignore[call-overload]
            max_degree_after=int(data["max_degree_after"]),  # type: ignore[call-overload]
            removed_vertices=ints(data["removed_vertices"]),
            added_vertices=ints(data["added_vertices"]),
            added_edges=pairs(data["added_edges"]),
            region=ints(data["region"]),
            replaced_colors=ints(data["replaced_colors"]),
            target_multiset=counts(data["target_multiset"]),
            region_multiset=counts(data["region_multiset"]),
            reduced_profile=ints(data["reduced_profile"]),
            profile=ints(data["profile"]),
            fallback=str(data.get("fallback", FallbackStage.NONE.value)),
        )


@dataclass
class SolveStats:
    steps: int = 0
    bridges: int = 0
    fallback_multiset: int = 0
    fallback_equitable: int = 0
    delta_diagnostics: int = 0
    k4_diagnostics: int = 0
    rejected_candidates: int = 0
    extension_retries: int = 0
    heuristic_steps: int = 0
    rerooted_decompositions: int = 0
    descent_backtracks: int = 0
    max_depth: int = 0

    @property
    def fallback_activations(self) -> int:
        return self.fallback_multiset + self.fallback_equitable

    def merge(self, other: SolveStats) -> None:
        for name in (
            "steps",
            "bridges",
            "fallback_multiset",
            "fallback_equitable",
            "delta_diagnostics",
            "k4_diagnostics",
            "rejected_candidates",
            "extension_retries",
            "heuristic_steps",
            "rerooted_decompositions",
            "descent_backtracks",
        ):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.max_depth = max(self.max_depth, other.max_depth)


@dataclass(frozen=True)
class SolveResult:
    coloring: Coloring
    trace: tuple[TraceRecord, ...] = ()
    stats: SolveStats = field(default_factory=SolveStats)
