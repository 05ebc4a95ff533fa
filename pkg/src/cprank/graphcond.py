"""Zero-pattern conditions: cycle bound, triangle-free test, diagonal dominance.

The nonzero pattern of a symmetric matrix defines a graph; three classical
results turn its shape into cp-rank information.  On a cycle of length at
least 4, complete positivity forces the off-diagonal sum below the
diagonal sum and the cp-rank up to the order.  On a triangle-free
pattern, a DN matrix is completely positive exactly when its comparison
matrix is PSD, with cp-rank ``max(rank, edge count)``.  And a diagonally
dominant nonnegative symmetric matrix always factors explicitly, one row
per off-diagonal entry plus one per strictly dominant row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    MatrixLike,
    Tolerances,
    as_symmetric,
    classify_dn,
    comparison_matrix,
    psd_rank,
)
from .srfactor import CpCertificate, make_certificate

__all__ = [
    "MatrixGraph",
    "graph_of",
    "GraphShape",
    "classify_graph",
    "CycleCheck",
    "cycle_necessary",
    "TriangleFreeResult",
    "triangle_free_criterion",
    "kaykobad_factor",
    "PASSES",
    "FAILS",
    "NOT_APPLICABLE",
    "CP",
    "NOT_CP",
]

PASSES = "PASSES"
FAILS = "FAILS"
NOT_APPLICABLE = "NOT_APPLICABLE"
CP = "CP"
NOT_CP = "NOT_CP"


@dataclass(frozen=True)
class MatrixGraph:
    """Undirected graph on the row indices with an edge wherever the
    off-diagonal entry is numerically nonzero."""

    n: int
    edges: frozenset[tuple[int, int]]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if i in e)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=int)
        for i, j in self.edges:
            adj[i, j] = adj[j, i] = 1
        return adj


def graph_of(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> MatrixGraph:
    """Zero-pattern graph with threshold ``eps_nonneg`` relative to the
    largest entry magnitude."""
    S = as_symmetric(A, tol)
    a = S.a
    scale = float(np.abs(a).max())
    edges = set()
    if scale > 0.0:
        for i in range(S.n):
            for j in range(i + 1, S.n):
                if abs(a[i, j]) > tol.eps_nonneg * scale:
                    edges.add((i, j))
    return MatrixGraph(n=S.n, edges=frozenset(edges))


@dataclass(frozen=True)
class GraphShape:
    is_cycle: bool
    is_triangle_free: bool
    is_tree: bool
    is_connected: bool


def classify_graph(G: MatrixGraph) -> GraphShape:
    """Standard predicates: one BFS for connectivity, degrees for the cycle
    test, the cubed adjacency trace for triangles, edge count for trees."""
    adj = G.adjacency()
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in np.flatnonzero(adj[i]):
                if int(j) not in seen:
                    seen.add(int(j))
                    nxt.append(int(j))
        frontier = nxt
    connected = len(seen) == G.n
    degrees = adj.sum(axis=1)
    is_cycle = connected and G.n >= 3 and bool(np.all(degrees == 2))
    triangle_free = int(np.trace(adj @ adj @ adj)) == 0
    is_tree = connected and G.edge_count == G.n - 1
    return GraphShape(
        is_cycle=is_cycle,
        is_triangle_free=triangle_free,
        is_tree=is_tree,
        is_connected=connected,
    )


@dataclass(frozen=True)
class CycleCheck:
    """Necessary condition on cycle patterns.

    ``status`` is ``NOT_APPLICABLE`` unless the graph is a cycle on at
    least 4 vertices.  ``FAILS`` means the matrix cannot be completely
    positive; ``PASSES`` additionally pins cp-rank >= n for any completely
    positive matrix with this pattern.
    """

    status: str
    cprk_lower_bound: int | None
    off_diag_sum: float
    diag_sum: float


def cycle_necessary(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> CycleCheck:
    """Cycle test: total off-diagonal sum against the trace.

    The comparison carries a small relative slack so that exact-equality
    instances are stable, and scaling the matrix by any positive factor
    never changes the outcome.
    """
    S = as_symmetric(A, tol)
    a = S.a
    off = float(a.sum() - np.trace(a))
    diag = float(np.trace(a))
    shape = classify_graph(graph_of(S, tol))
    if not shape.is_cycle or S.n < 4:
        return CycleCheck(
            status=NOT_APPLICABLE, cprk_lower_bound=None, off_diag_sum=off, diag_sum=diag
        )
    slack = 1e-12 * max(1.0, abs(off), abs(diag))
    if off > diag + slack:
        return CycleCheck(status=FAILS, cprk_lower_bound=None, off_diag_sum=off, diag_sum=diag)
    return CycleCheck(status=PASSES, cprk_lower_bound=S.n, off_diag_sum=off, diag_sum=diag)


@dataclass(frozen=True)
class TriangleFreeResult:
    """Complete decision on triangle-free patterns.

    Applicable to DN matrices whose graph has no triangle: ``CP`` comes
    with the exact cp-rank ``max(rank, edge count)``, ``NOT_CP`` is
    definitive.
    """

    status: str
    cp_rank: int | None = None


def triangle_free_criterion(
    A: MatrixLike, tol: Tolerances = DEFAULT_TOL
) -> TriangleFreeResult:
    """Comparison-matrix test on triangle-free DN matrices."""
    S = as_symmetric(A, tol)
    verdict = classify_dn(S, tol)
    if not verdict.is_dn:
        return TriangleFreeResult(status=NOT_APPLICABLE)
    G = graph_of(S, tol)
    if not classify_graph(G).is_triangle_free:
        return TriangleFreeResult(status=NOT_APPLICABLE)
    M = comparison_matrix(S, tol)
    if not psd_rank(M, tol).is_psd:
        return TriangleFreeResult(status=NOT_CP)
    return TriangleFreeResult(status=CP, cp_rank=max(verdict.rank, G.edge_count))


def kaykobad_factor(
    A: MatrixLike, tol: Tolerances = DEFAULT_TOL
) -> CpCertificate | None:
    """Explicit factorization of a diagonally dominant nonnegative matrix.

    Returns ``None`` when some row is not diagonally dominant.  Otherwise
    the certificate has one row ``sqrt(a_ij) (e_i + e_j)`` per nonzero
    above-diagonal entry and one row ``sqrt(a_ii - sum_j a_ij) e_i`` per
    strictly dominant row, reconstructing the matrix exactly in exact
    arithmetic.  Dominance within slack counts as equality, so borderline
    rows never produce a slack row.
    """
    S = as_symmetric(A, tol)
    a = S.a
    if float(a.min()) < -tol.eps_nonneg:
        return None
    n = S.n
    off_sums = a.sum(axis=1) - np.diag(a)
    diag = np.diag(a)
    slack = tol.eps_nonneg * np.maximum(1.0, np.maximum(diag, off_sums))
    margins = diag - off_sums
    if np.any(margins < -slack):
        return None
    scale = float(np.abs(a).max())
    rows: list[np.ndarray] = []
    for i in range(n):
        for j in range(i + 1, n):
            if a[i, j] > tol.eps_nonneg * max(1.0, scale):
                row = np.zeros(n)
                row[i] = row[j] = np.sqrt(a[i, j])
                rows.append(row)
    for i in range(n):
        if margins[i] > slack[i]:
            row = np.zeros(n)
            row[i] = np.sqrt(margins[i])
            rows.append(row)
    C = np.vstack(rows) if rows else np.zeros((0, n))
    return make_certificate(S, C, "kaykobad", tol)
