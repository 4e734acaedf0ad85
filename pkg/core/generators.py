"""Test instances: the gadget families and seeded random SP graphs.

Random output depends only on the arguments and the seed; every draw goes
through one ``random.Random`` instance per call.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import StrEnum

from loguru import logger

from core.config import GeneratorRuntimeConfig
from core.errors import GraphInputError
from core.gadgets import crystal, crystal_prime, diamond, diamond_prime, path, star
from core.graph_core import Graph
from core.sp_tree import SPNode, SPTree, leaf, mark_virtual, parallel, series, source_graph

MAX_SEED = 2**64


class Family(StrEnum):
    DIAMOND = "diamond"
    CRYSTAL = "crystal"
    CRYSTAL_PRIME = "crystal_prime"
    DIAMOND_PRIME = "diamond_prime"
    STAR = "star"
    PATH = "path"
    RANDOM_SP = "random_sp"
    RANDOM_K4_FREE = "random_k4_free"


RANDOM_FAMILIES = frozenset({Family.RANDOM_SP, Family.RANDOM_K4_FREE})
_MINIMUM_SIZE = {Family.CRYSTAL: 0, Family.PATH: 2, Family.RANDOM_SP: 2, Family.RANDOM_K4_FREE: 2}


@dataclass(frozen=True)
class GenSpec:
    """``size`` is the width for gadgets, the leaf count for stars and the vertex count otherwise."""

    family: Family
    size: int
    seed: int = 0
    drop_prob: float = 0.0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < MAX_SEED:
            msg = f"Seed must be a 64-bit unsigned integer, got {self.seed}"
            raise GraphInputError(msg)
        if not 0.0 <= self.drop_prob <= 1.0:
            msg = f"Drop probability must lie in [0, 1], got {self.drop_prob}"
            raise GraphInputError(msg)
        minimum = _MINIMUM_SIZE.get(self.family, 1)
        if self.size < minimum:
            msg = f"Family {self.family} needs size at least {minimum}, got {self.size}"
            raise GraphInputError(msg)


def gen_family(spec: GenSpec, config: GeneratorRuntimeConfig | None = None) -> tuple[Graph, tuple[int, int]]:
    """Graph and poles for ``spec``; random graphs use the root poles of their tree."""
    match spec.family:
        case Family.DIAMOND:
            return diamond(spec.size)
        case Family.CRYSTAL:
            return crystal(spec.size)
        case Family.CRYSTAL_PRIME:
            return crystal_prime(spec.size)
        case Family.DIAMOND_PRIME:
            return diamond_prime(spec.size)
        case Family.STAR:
            return star(spec.size)
        case Family.PATH:
            return path(spec.size)
        case Family.RANDOM_SP:
            tree = gen_random_sp(spec.size, spec.seed, config)
            return source_graph(tree), tree.poles
        case _:
            graph, tree = gen_random_k4_free_with_tree(spec.size, spec.drop_prob, spec.seed, config)
            if tree is None:
                msg = "Random K4-minor-free family needs at least two vertices"
                raise GraphInputError(msg)
            return graph, tree.poles


def gen_random_sp(n: int, seed: int, config: GeneratorRuntimeConfig | None = None) -> SPTree:
    if n < 2:  # noqa: PLR2004
        msg = f"A random SP tree needs at least two vertices, got {n}"
        raise GraphInputError(msg)
    return _random_tree(n, random.Random(seed), config or GeneratorRuntimeConfig())


def gen_random_k4_free(
    n: int,
    drop_prob: float,
    seed: int,
    config: GeneratorRuntimeConfig | None = None,
) -> Graph:
    graph, _ = gen_random_k4_free_with_tree(n, drop_prob, seed, config)
    return graph


def gen_random_k4_free_with_tree(
    n: int,
    drop_prob: float,
    seed: int,
    config: GeneratorRuntimeConfig | None = None,
) -> tuple[Graph, SPTree | None]:
    """Random spanning subgraph of a random SP graph, and the tree with dropped edges marked virtual."""
    if n < 1:
        msg = f"A graph needs at least one vertex, got {n}"
        raise GraphInputError(msg)
    if not 0.0 <= drop_prob <= 1.0:
        msg = f"Drop probability must lie in [0, 1], got {drop_prob}"
        raise GraphInputError(msg)
    if n == 1:
        return Graph([0]), None

    rng = random.Random(seed)
    tree = _random_tree(n, rng, config or GeneratorRuntimeConfig())
    full = source_graph(tree)
    dropped = {edge for edge in full.edges if rng.random() < drop_prob}
    logger.debug("Random graph n={} seed={}: dropped {} of {} edges", n, seed, len(dropped), len(full.edges))
    graph = Graph(full.vertices, [edge for edge in full.edges if edge not in dropped])
    return graph, SPTree(mark_virtual(tree.root, dropped))


def _random_tree(n: int, rng: random.Random, config: GeneratorRuntimeConfig) -> SPTree:
    inner = list(range(2, n))
    rng.shuffle(inner)
    if not inner:
        return SPTree(leaf(0, 1))
    return SPTree(_random_node(0, 1, inner, rng, config))


def _random_node(a: int, b: int, inner: list[int], rng: random.Random, config: GeneratorRuntimeConfig) -> SPNode:
    if not inner:
        return leaf(a, b, has_edge=rng.random() >= config.edgeless_leaf_probability)

    if len(inner) == 1 or rng.random() < 0.5:  # noqa: PLR2004
        split = rng.randrange(len(inner))
        middle = inner[split]
        left = _random_node(a, middle, inner[:split], rng, config)
        right = _random_node(middle, b, inner[split + 1 :], rng, config)
        return series([left, right])

    split = rng.randint(1, len(inner) - 1)
    children = [
        _random_node(a, b, inner[:split], rng, config),
        _random_node(a, b, inner[split:], rng, config),
    ]
    if rng.random() < config.pole_edge_probability:
        children.append(leaf(a, b))
    return parallel(children)

