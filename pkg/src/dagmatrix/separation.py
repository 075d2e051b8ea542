"""Deciding whether ``alpha _||_ beta | C`` is implied by a parent graph.

Six routes are available and must agree:

* ``matrix``        the (alpha, beta) block of the induced regression pattern,
* ``active_path``   active-path search in the partial ancestor graph,
* ``d_separation``  d-connecting path search in the parent graph,
* ``moral``         separation by C in the moral graph of the ancestral set,
* ``covariance``    the (alpha, beta) block of the induced covariance graph given C,
* ``concentration`` the (alpha, beta) block of the induced concentration graph of V\\M.

The path routes decide existence by reachability over ``(previous, current)``
node pairs, which is polynomial.  When a path exists, the lexicographically
smallest simple path is returned as a witness.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Sequence

from .graph import IndexPartition, ParentGraph, Query
from .induced import (
    ConsistencyError,
    PartialAncestorGraph,
    concentration_graph_without_M,
    covariance_graph_given_C,
    induced_components,
    moral_graph,
    partial_ancestor_graph,
)

__all__ = [
    "ROUTES",
    "InternalInconsistencyError",
    "Witness",
    "SearchResult",
    "Verdict",
    "VConfig",
    "classify",
    "matrix_criterion",
    "covariance_criterion",
    "concentration_criterion",
    "active_path_exists",
    "d_separated",
    "moral_separated",
    "check_all",
]

ROUTES = ("matrix", "active_path", "d_separation", "moral", "covariance", "concentration")


class InternalInconsistencyError(ConsistencyError):
    """Routes that are equivalent in theory returned different answers."""

    def __init__(self, G: ParentGraph, query: Query, per_route: dict[str, bool]):
        self.graph = G
        self.query = query
        self.per_route = dict(per_route)
        table = ", ".join(f"{k}={v}" for k, v in per_route.items())
        super().__init__(f"routes disagree on {query} for arrows {G.arrows()}: {table}")


class VConfig(str, Enum):
    TRANSITION = "transition"
    SOURCE = "source"
    COLLISION = "collision"


def classify(into_prev: bool, into_next: bool) -> str:
    """Kind of an inner node given whether each of its two edges points into it."""
    if into_prev and into_next:
        return VConfig.COLLISION
    if not into_prev and not into_next:
        return VConfig.SOURCE
    return VConfig.TRANSITION


@dataclass(frozen=True)
class Witness:
    """A path, as node labels, with a printable rendering of edge directions."""

    nodes: tuple[int, ...]
    text: str

    def __str__(self) -> str:
        return self.text


class SearchResult(NamedTuple):
    holds: bool
    witness: Witness | None


@dataclass
class Verdict:
    query: Query
    implied: bool
    per_route: dict[str, bool] = field(default_factory=dict)
    witness: Witness | None = None


# -- generic path search -------------------------------------------------

Neighbors = Callable[[int], Sequence[int]]
Allowed = Callable[[int, int, int], bool]


def _live_states(starts, targets, neighbors: Neighbors, allowed: Allowed) -> set[tuple[int, int]]:
    """Edge states ``(u, v)`` from which some target can be reached.

    A state means "arrived at ``v`` from ``u``".  Walks are allowed to repeat
    nodes here; simple paths are recovered by :func:`_lex_path`.
    """
    todo = deque((s, w) for s in starts for w in neighbors(s))
    seen = set(todo)
    back: dict[tuple[int, int], list[tuple[int, int]]] = {}
    done = []
    while todo:
        u, v = state = todo.popleft()
        if v in targets:
            done.append(state)
            continue
        for w in neighbors(v):
            if w == u or not allowed(u, v, w):
                continue
            nxt = (v, w)
            back.setdefault(nxt, []).append(state)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    live = set(done)
    todo = deque(done)
    while todo:
        for prev in back.get(todo.popleft(), ()):
            if prev not in live:
                live.add(prev)
                todo.append(prev)
    return live


def _lex_path(starts, targets, neighbors: Neighbors, allowed: Allowed, live) -> tuple[int, ...] | None:
    """Lexicographically smallest simple path from ``starts`` to ``targets``."""

    def extend(path: list[int], on_path: set[int]):
        u, v = path[-2], path[-1]
        if v in targets:
            return tuple(path)
        for w in neighbors(v):
            if w in on_path or (v, w) not in live or not allowed(u, v, w):
                continue
            path.append(w)
            on_path.add(w)
            found = extend(path, on_path)
            if found:
                return found
            path.pop()
            on_path.discard(w)
        return None

    for s in sorted(starts):
        for w in neighbors(s):
            if (s, w) in live:
                found = extend([s, w], {s, w})
                if found:
                    return found
    return None


def _search(starts, targets, neighbors, allowed, want_witness: bool):
    starts, targets = sorted(starts), frozenset(targets)
    live = _live_states(starts, targets, neighbors, allowed)
    exists = any((s, w) in live for s in starts for w in neighbors(s))
    if not exists or not want_witness:
        return exists, None
    path = _lex_path(starts, targets, neighbors, allowed, live)
    if path is None:
        raise ConsistencyError("a connecting walk exists but no simple path was found")
    return True, path


def _render_directed(path: Sequence[int], has_arrow: Callable[[int, int], bool]) -> str:
    parts = [str(path[0])]
    for u, v in zip(path, path[1:]):
        parts.append("←" if has_arrow(u, v) else "→")
        parts.append(str(v))
    return " ".join(parts)


def _render_undirected(path: Sequence[int]) -> str:
    return " – ".join(map(str, path))


def _check(G: ParentGraph, query: Query) -> Query:
    return query.validate(G.d)


# -- path routes ---------------------------------------------------------


def _pag_rules(pag: PartialAncestorGraph):
    nodes = pag.partition.order
    parents = {v: frozenset(pag.parents(v)) for v in nodes}
    nbrs = {v: sorted(parents[v] | frozenset(pag.children(v))) for v in nodes}
    a = pag.a

    def allowed(u: int, v: int, w: int) -> bool:
        kind = classify(u in parents[v], w in parents[v])
        if kind == VConfig.COLLISION:
            return v not in a
        if kind == VConfig.SOURCE:
            return v in a
        return False

    return nbrs.__getitem__, allowed, parents


def active_path_exists(pag: PartialAncestorGraph, query: Query, witness: bool = True) -> SearchResult:
    """Is there an active path between alpha and beta in the partial ancestor graph?

    An active path is an edge, or an alternating path whose inner source
    nodes lie in ``a`` and whose inner collision nodes lie in ``b``.  The
    graph should be built with ``a = V \\ (beta | cond)``.
    """
    _check(pag.base, query)
    neighbors, allowed, parents = _pag_rules(pag)
    found, path = _search(query.alpha, query.beta, neighbors, allowed, witness)
    w = None
    if path:
        w = Witness(path, _render_directed(path, lambda u, v: v in parents[u]))
    return SearchResult(found, w)


def _dsep_rules(G: ParentGraph, cond: frozenset[int]):
    # a collider is open when it is in C or has a descendant in C
    opened = cond | G.ancestors(cond)
    nbrs = {v: sorted(G.parents(v) | G.children(v)) for v in G.nodes}

    def allowed(u: int, v: int, w: int) -> bool:
        par = G.parents(v)
        if classify(u in par, w in par) == VConfig.COLLISION:
            return v in opened
        return v not in cond

    return nbrs.__getitem__, allowed


def d_separated(G: ParentGraph, query: Query, witness: bool = True) -> SearchResult:
    """d-separation of alpha and beta by cond; the witness is a d-connecting path."""
    _check(G, query)
    neighbors, allowed = _dsep_rules(G, query.cond)
    found, path = _search(query.alpha, query.beta, neighbors, allowed, witness)
    w = Witness(path, _render_directed(path, G.has_arrow)) if path else None
    return SearchResult(not found, w)


def moral_separated(G: ParentGraph, query: Query, witness: bool = True) -> SearchResult:
    """Separation of alpha from beta by cond in the moral graph of the ancestral set."""
    _check(G, query)
    moral = moral_graph(G, query.alpha | query.beta | query.cond)
    nbrs = {}
    for i, v in enumerate(moral.row_labels):
        row = moral.matrix.rows[i]
        nbrs[v] = [w for k, w in enumerate(moral.col_labels) if (row >> k) & 1 and w != v]
    cond = query.cond

    def allowed(u: int, v: int, w: int) -> bool:
        return v not in cond

    found, path = _search(query.alpha, query.beta, nbrs.__getitem__, allowed, witness)
    w = Witness(path, _render_undirected(path)) if path else None
    return SearchResult(not found, w)


# -- matrix routes -------------------------------------------------------


def matrix_criterion(G: ParentGraph, query: Query) -> bool:
    """True iff the (alpha, beta) block of the induced regression pattern is zero.

    The pattern is that of the coefficients of ``Y_b`` in the regression of
    ``Y_a`` on ``Y_b``, with ``b = beta | cond`` and ``a`` the rest.
    """
    _check(G, query)
    p = IndexPartition.split(G.d, query.marginal(G.d) | query.alpha)
    P = induced_components(G, p).P_a_given_b
    return P.block(query.alpha, query.beta).is_zero()


def covariance_criterion(G: ParentGraph, query: Query) -> bool:
    """True iff the induced covariance graph given cond has no alpha-beta edge."""
    _check(G, query)
    S = covariance_graph_given_C(G, query.cond)
    return S.block(query.alpha, query.beta).is_zero()


def concentration_criterion(G: ParentGraph, query: Query) -> bool:
    """True iff the induced concentration graph of V\\M has no alpha-beta edge."""
    _check(G, query)
    S = concentration_graph_without_M(G, query)
    return S.block(query.alpha, query.beta).is_zero()


def _coupled_edge(G: ParentGraph, query: Query) -> tuple[int, int] | None:
    for i in sorted(query.alpha):
        for j in sorted(query.beta):
            if G.coupled(i, j):
                return i, j
    return None


def check_all(G: ParentGraph, query: Query, witness: bool = True) -> Verdict:
    """Decide ``query`` by every route and insist that they agree.

    A query with an arrow between alpha and beta is answered "not implied"
    at once, with that arrow as witness.

    Raises
    ------
    InternalInconsistencyError
        If any two routes disagree.  This indicates a bug.
    """
    _check(G, query)
    edge = _coupled_edge(G, query)
    if edge is not None:
        i, j = edge
        w = Witness((i, j), _render_directed((i, j), G.has_arrow))
        return Verdict(query, False, {"coupled": False}, w)

    a = query.marginal(G.d) | query.alpha
    pag = partial_ancestor_graph(G, a)
    per_route = {
        "matrix": matrix_criterion(G, query),
        "active_path": not active_path_exists(pag, query, witness=False).holds,
        "d_separation": d_separated(G, query, witness=False).holds,
        "moral": moral_separated(G, query, witness=False).holds,
        "covariance": covariance_criterion(G, query),
        "concentration": concentration_criterion(G, query),
    }
    values = set(per_route.values())
    if len(values) != 1:
        raise InternalInconsistencyError(G, query, per_route)
    implied = values.pop()
    w = None
    if not implied and witness:
        w = d_separated(G, query, witness=True).witness
    return Verdict(query, implied, per_route, w)

