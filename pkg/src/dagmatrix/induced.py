"""Induced edge matrices and their numeric counterparts.

Everything here starts from a split of the nodes into ``a`` and ``b``.
Partial closure of the reordered edge matrix on ``a`` gives the partial
ancestor graph; closing a second, derived matrix on ``b`` gives the pattern
``H`` from which the three induced blocks (conditional covariance of ``a``
given ``b``, regression of ``a`` on ``b``, marginal concentration of ``b``)
are read off.  The numeric functions do the same computation with partial
inversion on a :class:`~dagmatrix.gaussian.TriangularSystem`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .binary import BinaryMatrix, LabeledBinary
from .gaussian import TriangularSystem, moments
from .graph import IndexPartition, ParentGraph, Query, reorder
from .operators import inv_set, transitive_closure, zer_set

__all__ = [
    "ConsistencyError",
    "PartialAncestorGraph",
    "InducedEdgeMatrices",
    "NumericInducedBlocks",
    "partial_ancestor_graph",
    "a_line_ancestors",
    "numeric_B",
    "induced_components",
    "numeric_induced_blocks",
    "covariance_graph_given_C",
    "moral_graph",
    "concentration_graph_without_M",
    "concentration_graph_via_moral",
]

BLOCK_TOL = 1e-9


class ConsistencyError(AssertionError):
    """Two routes that must agree did not."""


@dataclass(frozen=True)
class PartialAncestorGraph:
    """Graph whose edge ``i <- j`` means ``j`` is an a-line ancestor of ``i``.

    ``edge_matrix`` is stored in partition order ``(a, b)``; use the label
    based accessors rather than raw positions.
    """

    base: ParentGraph
    partition: IndexPartition
    edge_matrix: BinaryMatrix

    @property
    def a(self) -> frozenset[int]:
        return frozenset(self.partition.a)

    @property
    def b(self) -> frozenset[int]:
        return frozenset(self.partition.b)

    def has_arrow(self, i: int, j: int) -> bool:
        """True iff the arrow ``i <- j`` is present (``i != j``)."""
        p = self.partition
        return i != j and bool(self.edge_matrix[p.position(i), p.position(j)])

    def parents(self, i: int) -> list[int]:
        p = self.partition
        row = self.edge_matrix.rows[p.position(i)]
        return sorted(p.order[k] for k in range(p.d) if (row >> k) & 1 and p.order[k] != i)

    def children(self, j: int) -> list[int]:
        p = self.partition
        col = p.position(j)
        return sorted(
            p.order[k] for k, r in enumerate(self.edge_matrix.rows) if (r >> col) & 1 and p.order[k] != j
        )

    def labeled(self) -> LabeledBinary:
        order = self.partition.order
        return LabeledBinary(self.edge_matrix, order, order)


def partial_ancestor_graph(G: ParentGraph, a: Iterable[int]) -> PartialAncestorGraph:
    """Close every a-line path of ``G``: the edge matrix ``zer_a`` of the reordered graph."""
    p = IndexPartition.split(G.d, a)
    B = zer_set(reorder(G.edge_matrix, p), p.a_indices)
    return PartialAncestorGraph(G, p, B)


def a_line_ancestors(G: ParentGraph, a: Iterable[int]) -> LabeledBinary:
    """Path-search construction of the partial ancestor graph.

    Walks up from every node through parents, continuing only through nodes
    of ``a``.  Used to cross-check :func:`partial_ancestor_graph`.
    """
    p = IndexPartition.split(G.d, a)
    aset = set(p.a)
    rows = []
    for i in p.order:
        found = set()
        stack = [i]
        seen = {i}
        while stack:
            x = stack.pop()
            for j in G.parents(x):
                found.add(j)
                if j in aset and j not in seen:
                    seen.add(j)
                    stack.append(j)
        rows.append(
            sum(1 << p.position(j) for j in found) | (1 << p.position(i))
        )
    return LabeledBinary(BinaryMatrix(rows, G.d), p.order, p.order)


def numeric_B(A, p: IndexPartition) -> np.ndarray:
    """Closed form of ``inv_a`` of the reordered generating matrix.

    Returns the matrix in partition order.
    """
    At = reorder(np.asarray(A, dtype=float), p)
    na = len(p.a)
    Aaa, Aab = At[:na, :na], At[:na, na:]
    Aba, Abb = At[na:, :na], At[na:, na:]
    # raises LinAlgError if A_aa is singular, which a valid system never is
    Aaa_inv = np.linalg.inv(Aaa) if na else Aaa
    return np.block([
        [Aaa_inv, -Aaa_inv @ Aab],
        [Aba @ Aaa_inv, Abb - Aba @ Aaa_inv @ Aab],
    ])


@dataclass(frozen=True)
class InducedEdgeMatrices:
    """Edge matrices induced for the partial inverse of the concentration matrix.

    ``B`` and ``H`` are kept in partition order; the three induced blocks are
    labeled by node.
    """

    partition: IndexPartition
    B: BinaryMatrix
    H: BinaryMatrix
    S_aa_given_b: LabeledBinary
    P_a_given_b: LabeledBinary
    S_bb_dot_a: LabeledBinary


def _split(M: BinaryMatrix, na: int):
    n = M.shape[0]
    a, b = range(na), range(na, n)
    return M.take(a, a), M.take(a, b), M.take(b, a), M.take(b, b)


def _induce(At: BinaryMatrix, na: int):
    n = At.n
    nb = n - na
    B = zer_set(At, range(1, na + 1))
    Baa, Bab, Bba, Bbb = _split(B, na)
    Bba_T = Bba.T
    Ia, Ib = BinaryMatrix.identity(na), BinaryMatrix.identity(nb)
    T = BinaryMatrix.bmat([[Ia, Bba_T], [Bba, Ib | (Bba @ Bba_T)]])
    H = zer_set(T, range(na + 1, n + 1))
    Haa, Hab, _, Hbb = _split(H, na)
    S_aa = Baa @ Haa @ Baa.T
    P = Bab | (Baa @ Hab @ Bbb)
    S_bb = Bbb.T @ Hbb @ Bbb
    return B, H, S_aa, P, S_bb


def induced_components(G: ParentGraph, p: IndexPartition) -> InducedEdgeMatrices:
    """Induced edge matrices for the split ``p`` of ``G``'s nodes."""
    if p.d != G.d:
        raise ValueError("partition size does not match the graph")
    B, H, S_aa, P, S_bb = _induce(reorder(G.edge_matrix, p), len(p.a))
    return InducedEdgeMatrices(
        p,
        B,
        H,
        LabeledBinary(S_aa, p.a, p.a),
        LabeledBinary(P, p.a, p.b),
        LabeledBinary(S_bb, p.b, p.b),
    )


@dataclass(frozen=True)
class NumericInducedBlocks:
    """Numeric counterparts of :class:`InducedEdgeMatrices` for one system.

    ``B`` and ``H`` are in partition order.  The blocks are indexed by
    ``partition.a`` / ``partition.b`` in ascending label order.
    """

    partition: IndexPartition
    B: np.ndarray
    H: np.ndarray
    Sigma_aa_given_b: np.ndarray
    Pi_a_given_b: np.ndarray
    Sigma_bb_dot_a: np.ndarray

    def assembled(self) -> np.ndarray:
        """The full partially inverted concentration matrix, in partition order."""
        return np.block([
            [self.Sigma_aa_given_b, self.Pi_a_given_b],
            [-self.Pi_a_given_b.T, self.Sigma_bb_dot_a],
        ])


def numeric_induced_blocks(
    sys: TriangularSystem, p: IndexPartition, verify: bool = True
) -> NumericInducedBlocks:
    """Blocks of ``inv_a`` of the concentration matrix computed from ``(A, Delta)``.

    Eliminates ``Y_a`` from the triangular equations, forms the residual
    covariance ``tau`` of ``(eps_a, eta_b)``, partially inverts it on ``b``
    and assembles the blocks from the pieces.  With ``verify`` the result is
    compared with direct partial inversion of the concentration matrix.

    Raises
    ------
    ConsistencyError
        If ``verify`` is set and the routes differ by more than 1e-9.
    """
    if p.d != sys.d:
        raise ValueError("partition size does not match the system")
    na, n = len(p.a), p.d
    B = inv_set(reorder(sys.A, p), range(1, na + 1))
    Dt = np.diag(sys.Delta[[v - 1 for v in p.order]])
    Daa, Dbb = Dt[:na, :na], Dt[na:, na:]
    Baa, Bab = B[:na, :na], B[:na, na:]
    Bba, Bbb = B[na:, :na], B[na:, na:]
    tau = np.block([
        [Daa, -Daa @ Bba.T],
        [-Bba @ Daa, Dbb + Bba @ Daa @ Bba.T],
    ])
    H = inv_set(tau, range(na + 1, n + 1))
    Haa, Hab, Hbb = H[:na, :na], H[:na, na:], H[na:, na:]
    out = NumericInducedBlocks(
        p,
        B,
        H,
        Baa @ Haa @ Baa.T,
        Bab + Baa @ Hab @ Bbb,
        Bbb.T @ Hbb @ Bbb,
    )
    if verify:
        direct = inv_set(reorder(moments(sys).Conc, p), range(1, na + 1))
        err = np.max(np.abs(direct - out.assembled())) if n else 0.0
        if err > BLOCK_TOL:
            raise ConsistencyError(f"block formula differs from partial inversion by {err:.3g}")
    return out


def covariance_graph_given_C(G: ParentGraph, C: Iterable[int]) -> LabeledBinary:
    """Induced covariance graph of the nodes outside ``C`` given ``C``."""
    C = frozenset(C)
    g = [v for v in G.nodes if v not in C]
    return induced_components(G, IndexPartition.split(G.d, g)).S_aa_given_b


def moral_graph(G: ParentGraph, q_seed: Iterable[int]) -> LabeledBinary:
    """Moral graph of the smallest ancestral set containing ``q_seed``.

    Nodes are joined when coupled in ``G`` or when they share an offspring
    inside the ancestral set.  Rows and columns are the ancestral set in
    ascending order.
    """
    q_seed = frozenset(q_seed)
    Q = sorted(q_seed | G.ancestors(q_seed))
    pos = [v - 1 for v in Q]
    A_QQ = G.edge_matrix.take(pos, pos)
    return LabeledBinary(A_QQ.T @ A_QQ, Q, Q)


def concentration_graph_without_M(G: ParentGraph, query: Query) -> LabeledBinary:
    """Induced concentration graph of ``q = alpha | beta | cond`` after marginalising M.

    Closes all M-line paths, then joins nodes of ``q`` whose M-line
    descendants are linked through common ancestors in ``r``, the ancestors
    of ``q`` inside M.
    """
    query.validate(G.d)
    M = query.marginal(G.d)
    q = sorted(query.alpha | query.beta | query.cond)
    p = IndexPartition.split(G.d, M)
    Z = zer_set(reorder(G.edge_matrix, p), p.a_indices)
    r = sorted(G.ancestors(q) & M)
    qpos = [p.position(v) for v in q]
    rpos = [p.position(v) for v in r]
    Zqq = Z.take(qpos, qpos)
    Zqr = Z.take(qpos, rpos)
    X = transitive_closure(BinaryMatrix.identity(len(q)) | (Zqr @ Zqr.T))
    return LabeledBinary(Zqq.T @ X @ Zqq, q, q)


def concentration_graph_via_moral(G: ParentGraph, query: Query) -> LabeledBinary:
    """Same graph as :func:`concentration_graph_without_M`, built from the moral graph.

    Closes every r-line path of the moral graph, ``r`` being the ancestors
    of ``q`` in M, and keeps the rows and columns of ``q``.
    """
    query.validate(G.d)
    q = sorted(query.alpha | query.beta | query.cond)
    moral = moral_graph(G, q)
    Q = moral.row_labels
    qset = set(q)
    r_idx = [k + 1 for k, v in enumerate(Q) if v not in qset]
    closed = zer_set(moral.matrix, r_idx)
    return LabeledBinary(closed, Q, Q).block(q, q)
