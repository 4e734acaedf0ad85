"""Branch selection for a reduction site and construction of the reduced graph.

``candidate_steps`` walks a fixed ladder of branches for a site and yields
every branch whose structural preconditions hold, preferred branch first,
followed by the same branches on the parts of the join. The heuristic ladder
holds deletions whose extension is not guaranteed; they carry their own tags.
Whether the reduced graph is admissible (smaller, degree bound kept, still
K4-minor-free) is decided by the solver, which moves on to the next candidate
otherwise.
"""

from __future__ import annotations

from dataclasses import replace
from typing import TYPE_CHECKING

from loguru import logger

from core.errors import InvariantViolationError
from core.gadgets import GadgetTag
from core.graph_core import Graph, add_edge, add_edges, contract_set, delete_set, has_k4_minor, normalize_edge
from core.solver_sites import atomic_site, is_two_edge_path, make_site
from core.solver_types import ExtensionPlan, JoinKind, LemmaTag, ReductionSite, ReductionStep
from core.structure_checks import independent_pair, non_neighbors, pole_dominates

if TYPE_CHECKING:
    from collections.abc import Iterator

type Candidate = tuple[LemmaTag, ReductionSite, ExtensionPlan]


def dispatch(site: ReductionSite, g: Graph) -> ReductionStep:
    """Preferred branch for ``site``."""
    step = next(candidate_steps(site, g), None)
    if step is None:
        msg = f"No branch applies to the site at poles {site.poles} (width {site.width}, k={site.k})"
        raise InvariantViolationError(msg)
    return step


def candidate_steps(site: ReductionSite, g: Graph, *, heuristic: bool = False) -> Iterator[ReductionStep]:
    seen: set[tuple[LemmaTag, frozenset[int], ExtensionPlan]] = set()
    ladder = _heuristic_branches(site, g) if heuristic else _ladder(site, g)
    for lemma, branch_site, plan in ladder:
        key = (lemma, branch_site.graph.vertices, plan)
        if key in seen:
            continue
        seen.add(key)
        yield build_step(g, lemma, branch_site, plan)


def admissibility_problems(g: Graph, f: Graph, k: int, *, check_k4: bool = True) -> list[str]:
    """Reasons the reduced graph ``f`` cannot be recursed on."""
    problems = []
    if len(f) >= len(g):
        problems.append(f"reduced graph has {len(f)} vertices, not fewer than {len(g)}")
    if f.max_degree > max(2 * k - 3, 2):
        problems.append(f"reduced max degree {f.max_degree} exceeds {2 * k - 3}")
    if check_k4 and has_k4_minor(f):
        problems.append("reduced graph has a K4 minor")
    return problems


def _ladder(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    k, width = site.k, site.width
    if width == k - 1:
        yield from _narrow_branches(site, g)
    elif width == k:
        yield from _width_k_branches(site, g)
    elif site.join_kind is JoinKind.PARALLEL:
        yield from _parallel_branches(site, g)
    elif site.join_kind is JoinKind.SERIES:
        yield from _series_branches(site, g)
    yield from _part_branches(site, g)


def _inner_degree(g: Graph, pole: int, inner: frozenset[int]) -> int:
    return len(g.neighbors(pole) & inner)


def _outside_degree(g: Graph, pole: int, inner: frozenset[int]) -> int:
    return len(g.neighbors(pole) - inner)


def _orientations(site: ReductionSite, g: Graph) -> list[tuple[int, int]]:
    """Both pole orders, the pole with more inner neighbors first."""
    a, b = site.poles
    return sorted(((a, b), (b, a)), key=lambda poles: -_inner_degree(g, poles[0], site.inner))


def _first_non_neighbor(g: Graph, vertex: int, candidates: frozenset[int]) -> int | None:
    found = non_neighbors(g, vertex, candidates)
    return found[0] if found else None


def _distinct_primes(site: ReductionSite, g: Graph) -> tuple[int, int] | None:
    """Distinct inner vertices ``a'`` and ``b'`` with ``a'`` not adjacent to ``a`` and ``b'`` not adjacent to ``b``."""
    a, b = site.poles
    for a_prime in non_neighbors(g, a, site.inner):
        for b_prime in non_neighbors(g, b, site.inner):
            if a_prime != b_prime:
                return a_prime, b_prime
    return None


def _inner_deletion(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    if not 1 <= site.width <= site.k:
        return
    primes = _distinct_primes(site, g)
    if primes is not None:
        a, b = site.poles
        yield LemmaTag.INNER_DELETION, site, ExtensionPlan(pole=a, other_pole=b, a_prime=primes[0], b_prime=primes[1])


def _narrow_branches(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    k = site.k
    a, b = site.poles
    if site.gadget.is_(GadgetTag.CRYSTAL, k - 1) or site.gadget.is_(GadgetTag.DIAMOND, k - 1):
        yield LemmaTag.CRYSTAL_DIAMOND, site, ExtensionPlan(pole=a, other_pole=b)
    yield from _inner_deletion(site, g)

    contraction = list(_contractions(site, g))
    pole_edge = 2 * int(site.graph.has_edge(a, b))
    pole_degrees = _inner_degree(g, a, site.inner) + _inner_degree(g, b, site.inner) + pole_edge
    if pole_degrees >= 2 * k - 3:
        yield from contraction
        contraction = []
    yield from _pole_deletions(site, g)
    yield from contraction


def _contractions(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    a, b = site.poles
    if not g.has_edge(a, b):
        yield LemmaTag.CONTRACTION, site, ExtensionPlan(pole=a, other_pole=b)
        return
    for p, q in _orientations(site, g):
        p_prime = _first_non_neighbor(g, p, site.inner)
        if p_prime is not None and _outside_degree(g, q, site.inner) <= site.k - 1:
            yield LemmaTag.CONTRACTION, site, ExtensionPlan(pole=p, other_pole=q, a_prime=p_prime)


def _pole_deletions(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    for p, q in _orientations(site, g):
        q_prime = _first_non_neighbor(g, q, site.inner)
        if q_prime is not None and _outside_degree(g, p, site.inner) <= site.k - 1:
            yield LemmaTag.POLE_DELETION, site, ExtensionPlan(pole=p, other_pole=q, b_prime=q_prime)


def _prime_sub_site(site: ReductionSite) -> ReductionSite | None:
    """Width ``k - 1`` part of a primed crystal or diamond: drop one two-edge path and the pole edge."""
    if site.join_kind is not JoinKind.PARALLEL:
        return None
    components = [part for part in site.parts if not part.is_leaf]
    paths = [part for part in components if is_two_edge_path(part)]
    if not paths:
        return None
    kept = [part for part in components if part is not paths[-1]]
    if len(kept) == 1:
        return atomic_site(kept[0], site.k)
    return make_site(kept, site.k, JoinKind.PARALLEL, node=site.node, first=kept[:-1], second=kept[-1:])


def _width_k_branches(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    k = site.k
    if site.gadget.is_(GadgetTag.CRYSTAL_PRIME, k - 1) or site.gadget.is_(GadgetTag.DIAMOND_PRIME, k - 1):
        sub = _prime_sub_site(site)
        if sub is not None and sub.width == k - 1:
            yield from _narrow_branches(sub, g)
    yield from _inner_deletion(site, g)

    inner = site.inner
    for p, q in _orientations(site, g):
        if k >= 4:  # noqa: PLR2004
            q_prime = _first_non_neighbor(g, q, inner)
            if q_prime is None:
                continue
            pair = independent_pair(g, inner, exclude={q_prime})
            if pair is not None and len(g.neighbors(p) - inner - {q}) <= k - 3:
                yield LemmaTag.WIDTH_K, site, ExtensionPlan(pole=p, other_pole=q, b_prime=q_prime, pair_first=pair)
        elif g.neighbors(p) <= inner:
            pair = independent_pair(g, inner)
            if pair is not None:
                yield LemmaTag.WIDTH_K, site, ExtensionPlan(pole=p, other_pole=q, pair_first=pair)


def parallel_join_ready(site: ReductionSite) -> bool:
    """Wide parallel join whose sides are at most ``k - 2`` wide and whose inner components have ``mu + 2`` vertices."""
    k, mu = site.k, site.mu
    if site.join_kind is not JoinKind.PARALLEL or mu < 1:
        return False
    if not site.first_inner or not site.second_inner:
        return False
    if len(site.first_inner) > k - 2 or len(site.second_inner) > k - 2:
        return False
    return all(len(component) >= mu + 2 for component in site.graph.subgraph(site.inner).components())


def _parallel_branches(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    if not parallel_join_ready(site):
        return
    k, mu, inner = site.k, site.mu, site.inner
    sides = (tuple(sorted(site.first_inner)), tuple(sorted(site.second_inner)))
    for p, q in _orientations(site, g):
        if not pole_dominates(g, p, inner) or len(g.neighbors(p) - inner - {q}) > k - mu - 3:
            continue
        if non_neighbors(g, q, sides[0]) and non_neighbors(g, q, sides[1]):
            yield (
                LemmaTag.PARALLEL_DOMINATED,
                site,
                ExtensionPlan(pole=p, other_pole=q, side_first=sides[0], side_second=sides[1]),
            )

    a, b = site.poles
    if pole_dominates(g, a, inner) or pole_dominates(g, b, inner):
        return
    for first, second in (sides, sides[::-1]):
        if mu <= 2:  # noqa: PLR2004
            u1 = _first_non_neighbor(g, b, frozenset(first))
            u2 = _first_non_neighbor(g, a, frozenset(second))
            if u1 is not None and u2 is not None:
                plan = ExtensionPlan(pole=a, other_pole=b, side_first=first, side_second=second, u1=u1, u2=u2)
                yield LemmaTag.PARALLEL_SMALL, site, plan
            continue
        pair1 = independent_pair(g, non_neighbors(g, b, first))
        pair2 = independent_pair(g, non_neighbors(g, a, second))
        if pair1 is None or pair2 is None:
            logger.debug("No independent non-neighbor pairs for a wide join at poles {}", site.poles)
            continue
        plan = ExtensionPlan(
            pole=a,
            other_pole=b,
            side_first=first,
            side_second=second,
            w1=pair1[0],
            w1_prime=pair1[1],
            w2=pair2[0],
            w2_prime=pair2[1],
        )
        yield LemmaTag.PARALLEL_LARGE, site, plan


def _series_branches(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    a, c = site.poles
    b = site.middle
    first, second = site.first_inner, site.second_inner
    sides = (tuple(sorted(first)), tuple(sorted(second)))
    pair1 = independent_pair(g, first)
    pair2 = independent_pair(g, second)
    if pair1 is not None and pair2 is not None:
        plan = ExtensionPlan(
            pole=a,
            other_pole=c,
            middle=b,
            side_first=sides[0],
            side_second=sides[1],
            pair_first=pair1,
            pair_second=pair2,
        )
        yield LemmaTag.SERIES_INDEPENDENT, site, plan

    if site.k >= 4:  # noqa: PLR2004
        if len(first) == 2 and len(second) == site.k - 2:  # noqa: PLR2004
            clique = (sides[0][0], sides[0][1])
            plan = ExtensionPlan(pole=a, other_pole=c, middle=b, clique=clique, side_second=sides[1])
            yield LemmaTag.SERIES_CLIQUE, site, plan
        if len(second) == 2 and len(first) == site.k - 2:  # noqa: PLR2004
            clique = (sides[1][0], sides[1][1])
            plan = ExtensionPlan(pole=c, other_pole=a, middle=b, clique=clique, side_second=sides[0])
            yield LemmaTag.SERIES_CLIQUE, site, plan


def _part_branches(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    """Inner deletions on the parts of the join, tried after the site's own branches."""
    for part in site.parts:
        if part.is_leaf or part.width > site.k:
            continue
        yield from _inner_deletion(atomic_site(part, site.k), g)


def _heuristic_branches(site: ReductionSite, g: Graph) -> Iterator[Candidate]:
    """Deletions without the non-neighbors a closed-form extension needs."""
    if site.width == site.k - 1:
        for p, q in _orientations(site, g):
            if _outside_degree(g, p, site.inner) <= site.k - 1 and not g.has_edge(p, q):
                yield LemmaTag.HEURISTIC_POLE_DELETION, site, ExtensionPlan(pole=p, other_pole=q)

    if 1 <= site.width <= site.k and _distinct_primes(site, g) is None:
        a, b = site.poles
        yield LemmaTag.HEURISTIC_INNER_DELETION, site, ExtensionPlan(pole=a, other_pole=b)


def build_step(g: Graph, lemma: LemmaTag, site: ReductionSite, plan: ExtensionPlan) -> ReductionStep:
    """Reduced graph, region and replaced vertices of one branch."""
    inner = site.inner
    p, q = plan.pole, plan.other_pole
    added_vertices: tuple[int, ...] = ()
    added: list[tuple[int, int]] = []
    replaced: tuple[int, ...] = ()
    region = set(inner)

    match lemma:
        case LemmaTag.CRYSTAL_DIAMOND | LemmaTag.CONTRACTION:
            reduced, fresh = contract_set(g, site.graph.vertices)
            plan = replace(plan, contraction_vertex=fresh)
            added_vertices = (fresh,)
            replaced = (fresh,)
            region = set(site.graph.vertices)
        case LemmaTag.INNER_DELETION | LemmaTag.HEURISTIC_INNER_DELETION | LemmaTag.PARALLEL_LARGE:
            reduced = delete_set(g, inner)
            added = [] if reduced.has_edge(p, q) else [normalize_edge(p, q)]
            reduced = add_edge(reduced, p, q)
        case LemmaTag.WIDTH_K:
            reduced = delete_set(g, inner)
            added = [] if reduced.has_edge(p, q) else [normalize_edge(p, q)]
            reduced = add_edge(reduced, p, q)
            replaced = (p,)
            region.add(p)
        case LemmaTag.POLE_DELETION | LemmaTag.HEURISTIC_POLE_DELETION | LemmaTag.PARALLEL_DOMINATED:
            reduced = delete_set(g, inner | {p})
            region.add(p)
        case LemmaTag.PARALLEL_SMALL:
            base = delete_set(g, inner)
            fresh_start = g.fresh_vertex()
            crystal = tuple(range(fresh_start, fresh_start + site.mu))
            added = [normalize_edge(p, q)] if not base.has_edge(p, q) else []
            added.extend(edge for v in crystal for edge in ((p, v), (q, v)))
            reduced = Graph([*base.vertices, *crystal], [*base.edges, *added])
            plan = replace(plan, crystal_vertices=crystal)
            added_vertices = crystal
            replaced = crystal
        case LemmaTag.SERIES_INDEPENDENT:
            reduced = delete_set(g, inner)
            added = [] if reduced.has_edge(p, q) else [normalize_edge(p, q)]
            reduced = add_edge(reduced, p, q)
        case LemmaTag.SERIES_CLIQUE:
            middle = plan.middle
            if middle is None or plan.clique is None:
                msg = "Clique branch needs the middle pole and the clique pair"
                raise InvariantViolationError(msg)
            region = {*plan.clique, *plan.side_second, middle}
            reduced = delete_set(g, set(plan.clique) | set(plan.side_second))
            triangle = [normalize_edge(p, middle), normalize_edge(middle, q), normalize_edge(p, q)]
            added = [edge for edge in triangle if not reduced.has_edge(*edge)]
            reduced = add_edges(reduced, triangle)
            replaced = (middle,)

    logger.trace("Built {} at poles {}: n {} -> {}", lemma, site.poles, len(g), len(reduced))
    return ReductionStep(
        lemma=lemma,
        site=site,
        plan=plan,
        reduced=reduced,
        region=tuple(sorted(region)),
        replaced=replaced,
        added_vertices=added_vertices,
        added_edges=tuple(added),
    )
