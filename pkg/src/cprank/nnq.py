"""Nonnegative-equivalence detection and the resulting factorization.

A full-row-rank factor ``B`` is nonnegative-equivalent (nnq) when some
invertible column submatrix ``B1`` satisfies ``B1^{-1} B >= 0``.  The
property belongs to the factored matrix, not the factor: any two rank
factorizations agree on it, and the coordinate matrix ``P = B1^{-1} B``
can equally be computed from Gram data as ``A[s,s]^{-1} A[s,:]``.  For
rank at most 4 a witness yields a completely positive factorization with
cp-rank equal to the rank.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ComputationFailureError, UnsupportedRankError
from .matcore import DEFAULT_TOL, MatrixLike, Tolerances, as_symmetric, psd_rank, sym_eigen
from .rotate import random_orthogonal, small_orthant_rotation
from .srfactor import CpCertificate, SrFactor, make_certificate, sr_factor

__all__ = [
    "FOUND",
    "NONE",
    "NONE_BUDGET",
    "NnqWitness",
    "NnqSearchResult",
    "find_nnq_witness",
    "is_nnq_gram",
    "nnq_factor",
    "nnq_invariance_check",
]

FOUND = "FOUND"
NONE = "NONE"
NONE_BUDGET = "NONE_BUDGET"

# a basis candidate counts as invertible when |det| exceeds this factor
# times the product of its column norms (Hadamard scale)
EPS_DET_FACTOR = 1e-10


@dataclass(frozen=True)
class NnqWitness:
    """Evidence that a factor is nonnegative-equivalent.

    ``indices`` is the sorted tuple of basis column indices (0-based here;
    reports render them 1-based), ``B1`` the basis submatrix, ``detval``
    its determinant, and ``P`` the nonnegative coordinate matrix with
    ``P[:, indices]`` equal to the identity.
    """

    indices: tuple[int, ...]
    detval: float
    P: np.ndarray
    B1: np.ndarray


@dataclass(frozen=True)
class NnqSearchResult:
    """Outcome of a witness scan: ``FOUND`` with a witness, ``NONE`` after
    an exhaustive scan, or ``NONE_BUDGET`` when the subset budget ran out
    before the scan finished."""

    status: str
    witness: NnqWitness | None = None

    @property
    def found(self) -> bool:
        return self.status == FOUND


def _subset_order(n: int, r: int, max_subsets: int | None, priority: np.ndarray):
    """Candidate index tuples and whether the stream is exhaustive.

    Within budget the scan is plain lexicographic, so the first hit is the
    lexicographically smallest witness.  Over budget, columns are retried
    in order of descending norm and the stream is truncated.
    """
    total = math.comb(n, r)
    if max_subsets is None or total <= max_subsets:
        return itertools.combinations(range(n), r), True
    order = sorted(range(n), key=lambda j: (-priority[j], j))
    stream = (
        tuple(sorted(combo))
        for combo in itertools.islice(itertools.combinations(order, r), max_subsets)
    )
    return stream, False


def _scan(
    M: np.ndarray,
    r: int,
    gram: bool,
    tol: Tolerances,
    max_subsets: int | None,
    collect_all: bool = False,
) -> tuple[NnqSearchResult, list[tuple[int, ...]]]:
    n = M.shape[1]
    if r == 0:
        witness = NnqWitness(indices=(), detval=1.0, P=np.zeros((0, n)), B1=np.zeros((0, 0)))
        return NnqSearchResult(status=FOUND, witness=witness), [()]
    priority = np.linalg.norm(M, axis=0)
    stream, exhaustive = _subset_order(n, r, max_subsets, priority)
    hits: list[tuple[int, ...]] = []
    first: NnqWitness | None = None
    for sigma in stream:
        idx = list(sigma)
        basis = M[np.ix_(idx, idx)] if gram else M[:, idx]
        det = float(np.linalg.det(basis))
        col_scale = float(np.prod(np.linalg.norm(basis, axis=0)))
        if abs(det) <= EPS_DET_FACTOR * col_scale:
            continue
        rows = M[idx, :] if gram else M
        P = np.linalg.solve(basis, rows)
        if float(P.min()) >= -tol.eps_nonneg:
            if first is None:
                first = NnqWitness(indices=tuple(sigma), detval=det, P=P, B1=basis)
            hits.append(tuple(sigma))
            if not collect_all:
                return NnqSearchResult(status=FOUND, witness=first), hits
    if first is not None:
        return NnqSearchResult(status=FOUND, witness=first), hits
    return NnqSearchResult(status=NONE if exhaustive else NONE_BUDGET), hits


def find_nnq_witness(
    B: SrFactor | np.ndarray,
    tol: Tolerances = DEFAULT_TOL,
    max_subsets: int | None = 500_000,
) -> NnqSearchResult:
    """Scan the column subsets of a full-row-rank factor for an nnq basis.

    Subsets are visited lexicographically and the first basis whose
    coordinate matrix is entrywise nonnegative wins, which makes the
    witness deterministic.
    """
    Bm = B.B if isinstance(B, SrFactor) else np.asarray(B, dtype=float)
    result, _ = _scan(Bm, Bm.shape[0], gram=False, tol=tol, max_subsets=max_subsets)
    return result


def is_nnq_gram(
    A: MatrixLike,
    tol: Tolerances = DEFAULT_TOL,
    max_subsets: int | None = 500_000,
) -> NnqSearchResult:
    """Detect nonnegative equivalence straight from Gram data.

    For a PSD matrix of rank ``r`` the scan solves
    ``A[s,s]^{-1} A[s,:] >= 0`` over ``r``-subsets ``s``, which agrees
    with :func:`find_nnq_witness` applied to any rank factorization of
    ``A``; here ``B1`` in the witness is the principal submatrix
    ``A[s,s]``.
    """
    S = as_symmetric(A, tol)
    r = psd_rank(S, tol).rank
    result, _ = _scan(S.a, r, gram=True, tol=tol, max_subsets=max_subsets)
    return result


def nnq_factor(
    A: MatrixLike,
    witness: NnqWitness,
    tol: Tolerances = DEFAULT_TOL,
    seed: int = 0,
    restarts: int = 200,
    maxiter: int = 2000,
) -> CpCertificate:
    """Build a cp-rank-equals-rank certificate from an nnq witness.

    The basis block ``A[s,s]`` is factored as ``N^T N`` with ``N``
    nonnegative (guaranteed to exist for rank at most 4) and the
    certificate is ``C = N P``.  A QR fast path inside the rotation search
    handles the common case where the triangular factor is already
    nonnegative.
    """
    S = as_symmetric(A, tol)
    sigma = list(witness.indices)
    r = len(sigma)
    if r > 4:
        raise UnsupportedRankError(
            f"nnq factorization is guaranteed only up to rank 4, got rank {r}"
        )
    if r == 0:
        return make_certificate(S, np.zeros((0, S.n)), "nnq", tol)
    # rebuild the coordinate matrix from one rank-r spectral factor so that
    # basis block, P and certificate are mutually consistent even when the
    # input carries rank noise at the working tolerances
    eig = sym_eigen(S, tol)
    w = np.maximum(eig.eigenvalues[:r], 0.0)
    B = np.sqrt(w)[:, None] * eig.eigenvectors[:, :r].T
    B1 = B[:, sigma]
    col_scale = float(np.prod(np.linalg.norm(B1, axis=0)))
    if abs(float(np.linalg.det(B1))) <= EPS_DET_FACTOR * col_scale:
        raise ComputationFailureError(
            "witness basis is numerically singular in the rank-r factor"
        )
    P = np.linalg.solve(B1, B)
    Q = small_orthant_rotation(B1, budget=restarts, seed=seed, tol=tol, maxiter=maxiter)
    if Q is None:
        raise ComputationFailureError(
            "rotation search exhausted its budget on the basis block; "
            "a solution exists, raise the restart budget"
        )
    C = (Q @ B1) @ P
    return make_certificate(S, C, "nnq", tol)


def nnq_invariance_check(
    A: MatrixLike,
    tol: Tolerances = DEFAULT_TOL,
    max_subsets: int | None = 500_000,
    seed: int = 0,
) -> bool:
    """Confirm that nnq detection does not depend on the factor chosen.

    Runs the witness scan on the spectral rank factor and on a randomly
    rotated copy of it and compares both the search status and the full
    family of qualifying index tuples.
    """
    S = as_symmetric(A, tol)
    B = sr_factor(S, tol)
    rng = np.random.default_rng(seed)
    mixed = random_orthogonal(B.r, rng) @ B.B
    res1, fam1 = _scan(B.B, B.r, gram=False, tol=tol, max_subsets=max_subsets, collect_all=True)
    res2, fam2 = _scan(mixed, B.r, gram=False, tol=tol, max_subsets=max_subsets, collect_all=True)
    return res1.status == res2.status and fam1 == fam2
