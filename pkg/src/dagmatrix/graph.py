"""Parent graphs: DAGs on the ordered node set 1..d.

An arrow ``i <- j`` always has ``i < j``; the parent graph is stored as its
edge matrix, which has a 1 at ``(i, j)`` for each arrow ``i <- j`` and ones on
the diagonal.  All public functions speak 1-based node labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import AbstractSet, Iterable

import numpy as np

from .binary import BinaryMatrix, LabeledBinary, bits, mask
from .operators import transitive_closure

__all__ = [
    "MAX_NODES",
    "GraphError",
    "QueryError",
    "ParentGraph",
    "IndexPartition",
    "Query",
    "build_parent_graph",
    "defining_independencies",
    "reorder",
]

#: Upper bound on ``d`` so that a row of an edge matrix fits one machine word.
MAX_NODES = 64


class GraphError(ValueError):
    """Malformed parent graph."""


class QueryError(ValueError):
    """Malformed independence query or partition."""


def _labels(nodes: Iterable[int]) -> frozenset[int]:
    return frozenset(int(v) for v in nodes)


@dataclass(frozen=True)
class ParentGraph:
    """A DAG with a total node order, stored as its edge matrix.

    Use :func:`build_parent_graph` to construct one from a list of arrows.
    """

    d: int
    edge_matrix: BinaryMatrix

    def __post_init__(self):
        if not 1 <= self.d <= MAX_NODES:
            raise GraphError(f"d must be in 1..{MAX_NODES}, got {self.d}")
        if self.edge_matrix.shape != (self.d, self.d):
            raise GraphError("edge matrix has the wrong size")
        for i, r in enumerate(self.edge_matrix.rows):
            if not (r >> i) & 1:
                raise GraphError(f"edge matrix diagonal entry ({i + 1}, {i + 1}) is 0")
            if r & ((1 << i) - 1):
                raise GraphError(f"edge matrix row {i + 1} is not upper triangular")

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(range(1, self.d + 1))

    def arrows(self) -> list[tuple[int, int]]:
        """All arrows as ``(i, j)`` pairs meaning ``i <- j``, sorted."""
        return [(i + 1, j + 1) for i, j in self.edge_matrix.nonzero() if i != j]

    def has_arrow(self, i: int, j: int) -> bool:
        """True iff ``i <- j`` is present."""
        return i < j and bool(self.edge_matrix[i - 1, j - 1])

    def coupled(self, i: int, j: int) -> bool:
        return self.has_arrow(min(i, j), max(i, j))

    @cached_property
    def _parents(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(j + 1 for j in bits(r) if j != i) for i, r in enumerate(self.edge_matrix.rows)
        )

    @cached_property
    def _children(self) -> tuple[frozenset[int], ...]:
        kids: list[set[int]] = [set() for _ in range(self.d)]
        for i, j in self.arrows():
            kids[j - 1].add(i)
        return tuple(frozenset(k) for k in kids)

    def parents(self, i: int) -> frozenset[int]:
        return self._parents[i - 1]

    def children(self, i: int) -> frozenset[int]:
        return self._children[i - 1]

    @cached_property
    def closure(self) -> BinaryMatrix:
        """Edge matrix of the transitive closure."""
        return transitive_closure(self.edge_matrix)

    def ancestors(self, nodes: Iterable[int]) -> frozenset[int]:
        """Proper ancestors of ``nodes`` that are not themselves in ``nodes``."""
        nodes = _labels(nodes)
        rows = self.closure.rows
        acc = 0
        for v in nodes:
            acc |= rows[v - 1]
        return frozenset(j + 1 for j in bits(acc)) - nodes

    def descendants(self, nodes: Iterable[int]) -> frozenset[int]:
        """Proper descendants of ``nodes`` that are not themselves in ``nodes``."""
        nodes = _labels(nodes)
        want = mask(v - 1 for v in nodes)
        return frozenset(i + 1 for i, r in enumerate(self.closure.rows) if r & want) - nodes

    def adjacency(self) -> np.ndarray:
        """Standard adjacency matrix: entry ``(j, i)`` is 1 for an arrow ``j -> i``."""
        A = self.edge_matrix.to_array()
        np.fill_diagonal(A, 0)
        return A.T.copy()

    def labeled(self) -> LabeledBinary:
        return LabeledBinary(self.edge_matrix, self.nodes, self.nodes)

    def is_complete(self) -> bool:
        return len(self.arrows()) == self.d * (self.d - 1) // 2


def build_parent_graph(d: int, arrows: Iterable[tuple[int, int]]) -> ParentGraph:
    """Build the parent graph on nodes 1..d with arrows ``i <- j``.

    Parameters
    ----------
    d : int
        Number of nodes.
    arrows : iterable of (int, int)
        Pairs ``(i, j)`` with ``1 <= i < j <= d``, one per arrow ``i <- j``.

    Raises
    ------
    GraphError
        On ``i >= j``, labels outside 1..d, or a repeated arrow.
    """
    if not isinstance(d, (int, np.integer)) or not 1 <= d <= MAX_NODES:
        raise GraphError(f"d must be an integer in 1..{MAX_NODES}, got {d!r}")
    d = int(d)
    rows = [1 << i for i in range(d)]
    seen = set()
    for pair in arrows:
        i, j = (int(v) for v in pair)
        if not (1 <= i <= d and 1 <= j <= d):
            raise GraphError(f"arrow ({i}, {j}) has a node outside 1..{d}")
        if i >= j:
            raise GraphError(f"arrow ({i}, {j}) violates the node order: need i < j")
        if (i, j) in seen:
            raise GraphError(f"duplicate arrow ({i}, {j})")
        seen.add((i, j))
        rows[i - 1] |= 1 << (j - 1)
    return ParentGraph(d, BinaryMatrix(rows, d))


@dataclass(frozen=True)
class IndexPartition:
    """Ordered split of 1..d into ``a`` followed by ``b``.

    Within each part the original order is kept.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]
    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = tuple(sorted(int(v) for v in self.a))
        b = tuple(sorted(int(v) for v in self.b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if sorted(a + b) != list(range(1, len(a) + len(b) + 1)):
            raise QueryError(f"a={a}, b={b} is not a partition of 1..{len(a) + len(b)}")
        object.__setattr__(self, "_pos", {v: k for k, v in enumerate(a + b)})

    @classmethod
    def split(cls, d: int, a: Iterable[int]) -> "IndexPartition":
        a = _labels(a)
        if not a <= set(range(1, d + 1)):
            raise QueryError(f"a={sorted(a)} is not a subset of 1..{d}")
        return cls(tuple(a), tuple(v for v in range(1, d + 1) if v not in a))

    @property
    def d(self) -> int:
        return len(self.a) + len(self.b)

    @property
    def order(self) -> tuple[int, ...]:
        """Node labels in partition order; position ``k`` holds ``order[k]``."""
        return self.a + self.b

    def position(self, label: int) -> int:
        """0-based position of ``label`` in the reordered matrix."""
        return self._pos[label]

    def positions(self, labels: Iterable[int]) -> list[int]:
        return sorted(self._pos[v] for v in labels)

    @property
    def a_indices(self) -> range:
        """1-based indices of ``a`` within the reordered matrix."""
        return range(1, len(self.a) + 1)

    @property
    def b_indices(self) -> range:
        return range(len(self.a) + 1, self.d + 1)

    def is_order_compatible(self) -> bool:
        return self.a == tuple(range(1, len(self.a) + 1))


def reorder(M, p: IndexPartition):
    """Permute rows and columns of ``M`` into the order ``(a, b)`` of ``p``.

    Works for :class:`BinaryMatrix` and for real arrays.
    """
    order = [v - 1 for v in p.order]
    if isinstance(M, BinaryMatrix):
        if M.shape != (p.d, p.d):
            raise QueryError(f"matrix shape {M.shape} does not match partition of {p.d} nodes")
        return M.permute(order)
    M = np.asarray(M)
    if M.shape != (p.d, p.d):
        raise QueryError(f"matrix shape {M.shape} does not match partition of {p.d} nodes")
    return M[np.ix_(order, order)]


@dataclass(frozen=True)
class Query:
    """The statement ``alpha _||_ beta | cond``; the rest of V is marginalised."""

    alpha: frozenset[int]
    beta: frozenset[int]
    cond: frozenset[int] = frozenset()

    def __post_init__(self):
        for name in ("alpha", "beta", "cond"):
            object.__setattr__(self, name, _labels(getattr(self, name)))
        if not self.alpha or not self.beta:
            raise QueryError("alpha and beta must be nonempty")
        if self.alpha & self.beta or self.alpha & self.cond or self.beta & self.cond:
            raise QueryError("alpha, beta and cond must be pairwise disjoint")
        if min(self.alpha | self.beta | self.cond) < 1:
            raise QueryError("node labels start at 1")

    def validate(self, d: int) -> "Query":
        top = max(self.alpha | self.beta | self.cond)
        if top > d:
            raise QueryError(f"query mentions node {top} but the graph has {d} nodes")
        return self

    def marginal(self, d: int) -> frozenset[int]:
        """The set M of nodes that are neither in alpha, beta nor cond."""
        return frozenset(range(1, d + 1)) - self.alpha - self.beta - self.cond

    def __str__(self) -> str:
        def fmt(s: AbstractSet[int]) -> str:
            if len(s) == 1:
                return str(next(iter(s)))
            return "{" + ",".join(map(str, sorted(s))) + "}"

        cond = fmt(self.cond) if self.cond else "{}"
        return f"{fmt(self.alpha)} _||_ {fmt(self.beta)} | {cond}"


def defining_independencies(G: ParentGraph) -> list[Query]:
    """One statement ``i _||_ j | par_i`` per missing arrow ``i <- j``."""
    out = []
    for i in range(1, G.d):
        par = G.parents(i)
        for j in range(i + 1, G.d + 1):
            if j not in par:
                out.append(Query(frozenset({i}), frozenset({j}), par))
    return out

