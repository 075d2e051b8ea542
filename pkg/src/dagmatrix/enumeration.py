"""Enumerating and sampling parent graphs and singleton queries."""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator

import numpy as np

from .graph import ParentGraph, Query, build_parent_graph

__all__ = ["all_pairs", "all_parent_graphs", "random_parent_graph", "singleton_queries"]


def all_pairs(d: int) -> list[tuple[int, int]]:
    """Every possible arrow ``(i, j)``, ``i < j``, in lexicographic order."""
    return list(combinations(range(1, d + 1), 2))


def all_parent_graphs(d: int) -> Iterator[ParentGraph]:
    """All ``2 ** (d (d - 1) / 2)`` parent graphs on d ordered nodes.

    Graph number ``k`` has arrow ``all_pairs(d)[t]`` iff bit ``t`` of ``k`` is set.
    """
    pairs = all_pairs(d)
    for flags in product((0, 1), repeat=len(pairs)):
        yield build_parent_graph(d, [pr for pr, f in zip(reversed(pairs), flags) if f])


def random_parent_graph(d: int, rng: np.random.Generator, density: float | None = None) -> ParentGraph:
    """Each arrow present independently with probability ``density`` (drawn if None)."""
    if density is None:
        density = rng.uniform(0.2, 0.8)
    pairs = all_pairs(d)
    keep = rng.random(len(pairs)) < density
    return build_parent_graph(d, [pr for pr, k in zip(pairs, keep) if k])


def singleton_queries(G: ParentGraph, uncoupled_only: bool = True) -> Iterator[Query]:
    """Queries ``i _||_ j | C`` for ``i < j`` and every C among the other nodes."""
    for i, j in all_pairs(G.d):
        if uncoupled_only and G.coupled(i, j):
            continue
        rest = [v for v in G.nodes if v not in (i, j)]
        for k in range(len(rest) + 1):
            for C in combinations(rest, k):
                yield Query(frozenset({i}), frozenset({j}), frozenset(C))
