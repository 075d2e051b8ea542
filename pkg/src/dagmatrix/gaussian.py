"""Gaussian triangular systems over a parent graph.

A system ``A Y = eps`` with ``A`` unit upper triangular and ``cov(eps)``
diagonal generates a Gaussian distribution over the graph.  This module
samples such systems and computes covariances, conditional covariances and
least-squares regression coefficients, so that structural zeros predicted
from edge matrices can be compared with numerically vanishing coefficients.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .graph import ParentGraph, Query

__all__ = [
    "ZERO_TOL",
    "DEPENDENCE_TOL",
    "MAX_ROUNDS",
    "TriangularSystem",
    "GaussianMoments",
    "CoefficientRanges",
    "sample_system",
    "moments",
    "regression_coeffs",
    "conditional_covariance",
    "partial_coeffs",
    "coefficient_partition",
    "cochran_recursion_check",
    "OracleStatus",
    "OracleVerdict",
    "GaussianOracle",
    "verify_query",
    "SemigraphoidReport",
    "linear_semigraphoid_checks",
]

log = logging.getLogger(__name__)

ZERO_TOL = 1e-8
DEPENDENCE_TOL = 1e-6
MAX_ROUNDS = 5


def _idx(nodes: Iterable[int]) -> list[int]:
    return [v - 1 for v in sorted(set(nodes))]


@dataclass(frozen=True)
class TriangularSystem:
    """Parameters ``(A, Delta)`` of ``A Y = eps`` with ``cov(eps) = diag(Delta)``.

    ``A[i, j] = -beta_{i|j.par_i\\j}`` for an arrow ``i <- j`` and zero for a
    missing arrow.  ``Delta`` holds the residual variances.
    """

    A: np.ndarray
    Delta: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        D = np.array(self.Delta, dtype=float).reshape(-1)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != D.size:
            raise ValueError("A must be d x d and Delta must have d entries")
        if not np.allclose(np.diag(A), 1.0) or np.any(np.tril(A, -1) != 0):
            raise ValueError("A must be upper triangular with a unit diagonal")
        if np.any(D <= 0) or not np.all(np.isfinite(A)) or not np.all(np.isfinite(D)):
            raise ValueError("Delta must be finite and positive")
        A.setflags(write=False)
        D.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "Delta", D)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    def conforms_to(self, G: ParentGraph, min_coef: float = 0.0) -> bool:
        """Zeros of ``A`` respect the graph and present arrows are at least ``min_coef``."""
        if G.d != self.d:
            return False
        pattern = G.edge_matrix.to_array().astype(bool)
        if np.any(self.A[~pattern] != 0):
            return False
        off = pattern & ~np.eye(self.d, dtype=bool)
        return bool(np.all(np.abs(self.A[off]) >= min_coef)) and bool(np.all(self.A[off] != 0))


@dataclass(frozen=True)
class GaussianMoments:
    Sigma: np.ndarray
    Conc: np.ndarray

    @property
    def d(self) -> int:
        return self.Sigma.shape[0]


@dataclass(frozen=True)
class CoefficientRanges:
    """Bounds for sampled parameters: ``|A_ij|`` in ``[min_coef, max_coef]``."""

    min_coef: float = 0.3
    max_coef: float = 1.0
    min_var: float = 0.5
    max_var: float = 2.0

    def __post_init__(self):
        if not 0 < self.min_coef <= self.max_coef:
            raise ValueError("need 0 < min_coef <= max_coef")
        if not 0 < self.min_var <= self.max_var:
            raise ValueError("need 0 < min_var <= max_var")


def sample_system(
    G: ParentGraph,
    seed: int | np.random.SeedSequence | np.random.Generator,
    ranges: CoefficientRanges = CoefficientRanges(),
) -> TriangularSystem:
    """Draw a triangular system whose zero pattern is exactly that of ``G``.

    Coefficients of present arrows have magnitude uniform on
    ``[min_coef, max_coef]`` and a random sign; residual variances are
    uniform on ``[min_var, max_var]``.  The draw is a deterministic function
    of ``seed`` (numpy PCG64).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = G.d
    A = np.eye(d)
    arrows = G.arrows()
    if arrows:
        mags = rng.uniform(ranges.min_coef, ranges.max_coef, size=len(arrows))
        signs = rng.choice((-1.0, 1.0), size=len(arrows))
        for (i, j), m, s in zip(arrows, mags, signs):
            A[i - 1, j - 1] = m * s
    Delta = rng.uniform(ranges.min_var, ranges.max_var, size=d)
    return TriangularSystem(A, Delta)


def moments(sys: TriangularSystem) -> GaussianMoments:
    """Covariance ``A^-1 Delta A^-T`` and concentration ``A^T Delta^-1 A``."""
    d = sys.d
    # A is unit triangular, so the solve is exact up to rounding
    A_inv = np.linalg.solve(sys.A, np.eye(d))
    Sigma = A_inv @ np.diag(sys.Delta) @ A_inv.T
    Conc = sys.A.T @ np.diag(1.0 / sys.Delta) @ sys.A
    Sigma = (Sigma + Sigma.T) / 2
    Conc = (Conc + Conc.T) / 2
    return GaussianMoments(Sigma, Conc)


def _block(S: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    return S[np.ix_(rows, cols)]


def conditional_covariance(m: GaussianMoments, a, b, c=()) -> np.ndarray:
    """``Sigma_{ab|c} = Sigma_ab - Sigma_ac Sigma_cc^-1 Sigma_cb``."""
    a, b, c = _idx(a), _idx(b), _idx(c)
    S = m.Sigma
    out = _block(S, a, b)
    if c:
        out = out - _block(S, a, c) @ np.linalg.solve(_block(S, c, c), _block(S, c, b))
    return out


def partial_coeffs(m: GaussianMoments, a, b, given=()) -> np.ndarray:
    """Coefficients of ``Y_b`` when ``Y_a`` is regressed on ``Y_b`` and ``Y_given``.

    This is ``Sigma_{ab|given} Sigma_{bb|given}^-1``; with ``given`` empty it is
    the plain regression matrix ``Sigma_ab Sigma_bb^-1``.
    """
    if not list(b):
        return np.zeros((len(set(a)), 0))
    S_ab = conditional_covariance(m, a, b, given)
    S_bb = conditional_covariance(m, b, b, given)
    # X = S_ab S_bb^-1, solved through the symmetric S_bb
    return np.linalg.solve(S_bb, S_ab.T).T


def regression_coeffs(m: GaussianMoments, a, b) -> np.ndarray:
    """Least-squares coefficient matrix of ``Y_a`` on ``Y_b``."""
    a, b = set(a), set(b)
    if a & b:
        raise ValueError("a and b must be disjoint")
    return partial_coeffs(m, a, b)


def coefficient_partition(m: GaussianMoments, a, b, c) -> tuple[np.ndarray, np.ndarray]:
    """Split the coefficients of ``Y_a`` on ``(Y_b, Y_c)`` into the b and c columns."""
    return partial_coeffs(m, a, b, c), partial_coeffs(m, a, c, b)


def cochran_recursion_check(m: GaussianMoments, a, b, c, d) -> float:
    """Max-norm residual of the recursion for adding ``d`` to the regressors.

    Compares the coefficient of ``b`` given ``c`` and ``d`` with the
    coefficient given ``c`` alone, corrected by the path through ``d``.
    """
    cd = set(c) | set(d)
    bc = set(b) | set(c)
    lhs = partial_coeffs(m, a, b, cd)
    rhs = partial_coeffs(m, a, b, c) - partial_coeffs(m, a, d, bc) @ partial_coeffs(m, d, b, c)
    return float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0


# -- oracle --------------------------------------------------------------


class OracleStatus(str, Enum):
    INDEPENDENT = "independence-confirmed"
    DEPENDENT = "dependence-confirmed"
    INCONCLUSIVE = "inconclusive"


@dataclass
class OracleVerdict:
    query: Query
    status: OracleStatus
    max_abs: list[float] = field(default_factory=list)
    rounds: int = 1

    def agrees_with(self, implied: bool) -> bool:
        if implied:
            return self.status is OracleStatus.INDEPENDENT
        return self.status is OracleStatus.DEPENDENT


class GaussianOracle:
    """Numeric independence checks for one graph, with cached samples.

    Sample ``k`` of round ``r`` is drawn from its own child of
    ``SeedSequence(seed)``, so samples never share generator state and the
    whole oracle is a pure function of ``(graph, seed)``.
    """

    def __init__(
        self,
        G: ParentGraph,
        n_samples: int = 5,
        seed: int = 0,
        ranges: CoefficientRanges = CoefficientRanges(),
        max_rounds: int = MAX_ROUNDS,
    ):
        if n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        self.G = G
        self.n_samples = n_samples
        self.ranges = ranges
        self.max_rounds = max_rounds
        self._seeds = np.random.SeedSequence(seed).spawn(max_rounds)
        self._rounds: dict[int, list[GaussianMoments]] = {}

    def samples(self, round_: int) -> list[GaussianMoments]:
        if round_ not in self._rounds:
            children = self._seeds[round_].spawn(self.n_samples)
            self._rounds[round_] = [
                moments(sample_system(self.G, s, self.ranges)) for s in children
            ]
        return self._rounds[round_]

    def verify(self, query: Query) -> OracleVerdict:
        query.validate(self.G.d)
        maxes: list[float] = []
        for r in range(self.max_rounds):
            round_max = [
                float(np.max(np.abs(partial_coeffs(m, query.alpha, query.beta, query.cond))))
                for m in self.samples(r)
            ]
            maxes = round_max
            if all(x < ZERO_TOL for x in round_max):
                return OracleVerdict(query, OracleStatus.INDEPENDENT, maxes, r + 1)
            if any(x > DEPENDENCE_TOL for x in round_max):
                return OracleVerdict(query, OracleStatus.DEPENDENT, maxes, r + 1)
            log.debug("inconclusive round %d for %s: %s", r + 1, query, round_max)
        log.warning("oracle inconclusive after %d rounds for %s", self.max_rounds, query)
        return OracleVerdict(query, OracleStatus.INCONCLUSIVE, maxes, self.max_rounds)


def verify_query(G: ParentGraph, query: Query, n_samples: int = 5, seed: int = 0) -> OracleVerdict:
    """Decide ``query`` numerically from ``n_samples`` random Gaussian systems.

    Independence is confirmed when every sample has ``max |Pi| < 1e-8``;
    dependence when some sample has ``max |Pi| > 1e-6``.  Anything in between
    triggers a fresh round, up to ``MAX_ROUNDS``.
    """
    return GaussianOracle(G, n_samples, seed).verify(query)


# -- combination properties of linear independencies ----------------------


@dataclass
class PropertyCheck:
    name: str
    hypothesis: bool
    conclusion: bool

    @property
    def vacuous(self) -> bool:
        return not self.hypothesis

    @property
    def ok(self) -> bool:
        return self.conclusion or not self.hypothesis


@dataclass
class SemigraphoidReport:
    checks: list[PropertyCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def vacuous(self) -> list[str]:
        return [c.name for c in self.checks if c.vacuous]

    def __str__(self) -> str:
        return "\n".join(
            f"{c.name:<14} hypothesis={int(c.hypothesis)} conclusion={int(c.conclusion)}"
            f" {'ok' if c.ok else 'VIOLATED'}"
            for c in self.checks
        )


def linear_semigraphoid_checks(
    m: GaussianMoments, a, b, c, d=(), hyp_tol: float = ZERO_TOL, concl_tol: float = 1e-7
) -> SemigraphoidReport:
    """Check how vanishing regression coefficients combine, for sets ``a, b, c, d``.

    Each property reads "if these coefficient matrices vanish then that one
    vanishes"; a property whose hypothesis fails is reported as vacuous.
    """
    a, b, c, d = (frozenset(s) for s in (a, b, c, d))
    sets = [a, b, c, d]
    for x in range(4):
        for y in range(x + 1, 4):
            if sets[x] & sets[y]:
                raise ValueError("a, b, c, d must be pairwise disjoint")

    def zero(x, y, given, tol):
        P = partial_coeffs(m, x, y, given)
        return P.size == 0 or float(np.max(np.abs(P))) < tol

    def h(x, y, given):
        return zero(x, y, given, hyp_tol)

    def k(x, y, given):
        return zero(x, y, given, concl_tol)

    checks = [
        PropertyCheck("symmetry", h(a, b, c), k(b, a, c)),
        PropertyCheck("decomposition", h(a, b | c, d), k(a, b, d)),
        PropertyCheck("weak union", h(a, b | c, d), k(a, b, c | d)),
        PropertyCheck("contraction", h(a, b, c) and h(a, d, b | c), k(a, b | d, c)),
        PropertyCheck("intersection", h(a, b, c | d) and h(a, c, b | d), k(a, b | c, d)),
        PropertyCheck("composition", h(a, c, d) and h(b, c, d), k(a | b, c, d)),
    ]
    return SemigraphoidReport(checks)

