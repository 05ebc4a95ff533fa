"""Rotating Gram vectors into the nonnegative orthant.

The geometric core of the package: membership in the circular cone around
the all-ones direction, Householder alignment onto that direction, the
row-sum sufficient condition with its constructive factorization, the
rank-2 bisector construction, and a seeded multi-start search for an
orthogonal matrix that makes a small vector family nonnegative.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import InvalidInputError, PreconditionError
from .matcore import (
    DEFAULT_TOL,
    MatrixLike,
    Tolerances,
    as_symmetric,
    classify_dn,
    psd_rank,
)
from .srfactor import CpCertificate, make_certificate, sr_factor

__all__ = [
    "e_cone_threshold",
    "EConeQuery",
    "in_e_cone",
    "boundary_witness",
    "RotationPlan",
    "householder_align",
    "RowSumData",
    "rowsum_condition",
    "rowsum_factor",
    "rank2_factor",
    "small_orthant_rotation",
    "orthant_rotation_search",
    "random_orthogonal",
]


def random_orthogonal(k: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix of order ``k``."""
    if k == 0:
        return np.zeros((0, 0))
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs[None, :]


def e_cone_threshold(r: int) -> float:
    """Cosine bound ``sqrt((r-1)/r)``: vectors at least this aligned with the
    all-ones direction are entrywise nonnegative."""
    if r < 1:
        raise InvalidInputError(f"dimension must be positive, got {r}")
    return math.sqrt((r - 1) / r)


@dataclass(frozen=True)
class EConeQuery:
    """A vector together with the cone data of its dimension."""

    z: np.ndarray
    r: int
    threshold: float

    @classmethod
    def of(cls, z: Sequence[float] | np.ndarray) -> "EConeQuery":
        z = np.asarray(z, dtype=float).reshape(-1)
        r = z.shape[0]
        return cls(z=z, r=r, threshold=e_cone_threshold(r))


def in_e_cone(z: EConeQuery | Sequence[float] | np.ndarray) -> bool:
    """Whether ``<z, e> >= sqrt((r-1)/r) ||z|| ||e||`` holds (tiny slack).

    A ``True`` answer implies the vector is entrywise nonnegative.
    """
    q = z if isinstance(z, EConeQuery) else EConeQuery.of(z)
    norm = float(np.linalg.norm(q.z))
    if norm == 0.0:
        raise InvalidInputError("the zero vector has no direction")
    scale = norm * math.sqrt(q.r)
    return bool(float(q.z.sum()) >= q.threshold * scale - 1e-14 * scale)


def boundary_witness(r: int, c: float) -> np.ndarray:
    """A vector with one negative entry whose cosine with the all-ones
    direction still exceeds ``c``.

    Exists for every ``c`` strictly below the ``sqrt((r-1)/r)`` bound,
    showing that bound cannot be lowered.  The witness has the shape
    ``(-eps*sqrt(r-1), sqrt(1-eps^2), ..., sqrt(1-eps^2))`` with ``eps``
    located by bisection on the strict inequality.
    """
    if r < 2:
        raise InvalidInputError(f"need dimension at least 2, got {r}")
    threshold = e_cone_threshold(r)
    if not (0.0 <= c < threshold):
        raise InvalidInputError(f"cosine target must lie in [0, {threshold!r}), got {c!r}")

    def margin(eps: float) -> float:
        return -eps + math.sqrt(r - 1) * math.sqrt(1.0 - eps * eps) - c * math.sqrt(r)

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if margin(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    eps = 0.5 * lo if lo > 0.0 else 0.25 * hi
    z = np.full(r, math.sqrt(1.0 - eps * eps))
    z[0] = -eps * math.sqrt(r - 1)
    return z


@dataclass(frozen=True)
class RotationPlan:
    """An orthogonal matrix aligning a pivot vector with the all-ones
    direction; ``v`` is the Householder vector (empty for the identity)."""

    Q: np.ndarray
    v: np.ndarray
    x: np.ndarray


def householder_align(x: Sequence[float] | np.ndarray) -> RotationPlan:
    """Reflection mapping ``x`` to ``(||x||/sqrt(r)) e``.

    Uses ``Q = I - (2/v^T v) v v^T`` with ``v = x - (||x||/sqrt(r)) e``;
    the identity is returned when ``x`` already points along ``e``.
    Cosines against the pivot are preserved, so vectors close to ``x``
    land close to ``e``.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    r = x.shape[0]
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        raise InvalidInputError("cannot align the zero vector")
    target = norm / math.sqrt(r) * np.ones(r)
    v = x - target
    if float(np.linalg.norm(v)) <= 1e-14 * norm:
        return RotationPlan(Q=np.eye(r), v=np.zeros(0), x=x)
    Q = np.eye(r) - (2.0 / float(v @ v)) * np.outer(v, v)
    return RotationPlan(Q=Q, v=v, x=x)


@dataclass(frozen=True)
class RowSumData:
    row_sums: np.ndarray
    total: float
    diag: np.ndarray


def rowsum_condition(
    A: MatrixLike, r: int | None = None, tol: Tolerances = DEFAULT_TOL
) -> tuple[bool, RowSumData]:
    """Row-sum sufficient condition ``r R_i^2 >= (r-1) a_ii (R_1+...+R_n)``.

    When it holds for a PSD matrix of rank ``r``, the matrix is completely
    positive with cp-rank equal to ``r`` and :func:`rowsum_factor` builds
    the certificate.  ``r`` defaults to the numerical rank; the inequality
    is checked with a small relative slack so that exact-equality cases do
    not flip under roundoff.
    """
    S = as_symmetric(A, tol)
    if r is None:
        r = psd_rank(S, tol).rank
    R = S.a.sum(axis=1)
    total = float(R.sum())
    diag = np.diag(S.a).copy()
    data = RowSumData(row_sums=R, total=total, diag=diag)
    if r <= 0:
        return True, data
    lhs = r * R * R
    rhs = (r - 1) * diag * total
    slack = 1e-12 * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return bool(np.all(lhs >= rhs - slack)), data


def rowsum_factor(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> CpCertificate:
    """Constructive factorization under the row-sum condition.

    Aligns the sum of the Gram vectors with the all-ones direction; the
    condition guarantees every Gram vector then lies in the nonnegative
    orthant, so ``Q B`` is the certificate with exactly ``rank`` rows.
    """
    S = as_symmetric(A, tol)
    r = psd_rank(S, tol).rank
    ok, _ = rowsum_condition(S, r, tol)
    if not ok:
        raise PreconditionError("row-sum condition does not hold for this matrix")
    B = sr_factor(S, tol).B
    if r == 0:
        return make_certificate(S, B, "rowsum", tol)
    x = B @ np.ones(S.n)
    if float(np.linalg.norm(x)) == 0.0:
        raise PreconditionError("degenerate row sums: Gram vector sum vanished")
    plan = householder_align(x)
    return make_certificate(S, plan.Q @ B, "rowsum", tol)


def rank2_factor(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> CpCertificate:
    """Certificate for a doubly nonnegative matrix of rank 2.

    The rank-2 Gram vectors have pairwise nonnegative inner products, so
    their polar angles span at most a quarter turn; rotating the bisector
    of the extreme pair onto the first-quadrant diagonal places the whole
    fan inside the first quadrant.
    """
    S = as_symmetric(A, tol)
    verdict = classify_dn(S, tol)
    if not verdict.is_dn or verdict.rank != 2:
        raise PreconditionError(
            f"rank-2 construction needs a DN matrix of rank 2, got {verdict.status}"
            + (f"({verdict.rank})" if verdict.is_dn else "")
        )
    B = sr_factor(S, tol).B
    norms = np.linalg.norm(B, axis=0)
    scale = float(norms.max())
    nonzero = norms > tol.eps_nonneg * max(1.0, scale)
    theta = np.arctan2(B[1, nonzero], B[0, nonzero])
    order = np.sort(theta)
    # the fan may straddle the atan2 branch cut: cut at the largest angular gap
    gaps = np.diff(order, append=order[0] + 2.0 * math.pi)
    start = order[(int(np.argmax(gaps)) + 1) % order.size]
    theta = np.where(theta < start - 1e-15, theta + 2.0 * math.pi, theta)
    spread = float(theta.max() - theta.min())
    if spread > math.pi / 2.0 + 1e-7:
        raise PreconditionError(
            f"Gram vectors span {spread:.6f} rad, more than a quarter turn"
        )
    phi = math.pi / 4.0 - 0.5 * (float(theta.min()) + float(theta.max()))
    c, s = math.cos(phi), math.sin(phi)
    rot = np.array([[c, -s], [s, c]])
    C = rot @ B
    C[:, ~nonzero] = 0.0
    return make_certificate(S, C, "rank2_bisector", tol)


# ---------------------------------------------------------------------------
# orthant rotation search


def _givens_pairs(k: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(k), 2))


def _rotation_from_angles(theta: np.ndarray, pairs: list[tuple[int, int]], k: int) -> np.ndarray:
    Q = np.eye(k)
    for (i, j), t in zip(pairs, theta):
        c, s = math.cos(t), math.sin(t)
        row_i = c * Q[i] - s * Q[j]
        row_j = s * Q[i] + c * Q[j]
        Q[i], Q[j] = row_i, row_j
    return Q


def _qr_rotation(B: np.ndarray) -> np.ndarray:
    """Orthogonal ``Q`` mapping ``B`` to an upper-triangular matrix with a
    sign-normalized diagonal."""
    q, rmat = np.linalg.qr(B, mode="complete")
    d = min(B.shape)
    signs = np.ones(B.shape[0])
    lead = np.sign(np.diag(rmat[:d, :d]))
    signs[:d] = np.where(lead == 0, 1.0, lead)
    return signs[:, None] * q.T


def orthant_rotation_search(
    B: np.ndarray,
    restarts: int = 200,
    maxiter: int = 2000,
    seed: int = 0,
    eps: float = 1e-11,
) -> np.ndarray | None:
    """Search for an orthogonal ``Q`` with ``Q B >= -eps`` entrywise.

    Deterministic given the seed.  Three cheap attempts run first: the
    identity, the QR rotation of ``B``, and the Householder alignment of
    the column centroid.  After that, multi-start Nelder-Mead minimizes
    the squared negativity of ``Q(theta) B`` over Givens angles; the
    result of the lowest-numbered successful restart is returned, or
    ``None`` once the restart budget is exhausted.

    No existence claim is made here; callers restrict the input so that a
    solution is known to exist, or treat ``None`` as inconclusive.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2:
        raise InvalidInputError(f"expected a 2-d array of column vectors, got shape {B.shape}")
    d, m = B.shape
    if d == 0 or m == 0:
        return np.eye(d)
    norms = np.linalg.norm(B, axis=0)
    unit = np.where(norms > 0.0, norms, 1.0)
    Bn = B / unit
    threshold = eps / max(1.0, float(norms.max()))

    if d == 1:
        if float(Bn.min()) >= -threshold:
            return np.eye(1)
        if float(Bn.max()) <= threshold:
            return -np.eye(1)
        return None

    if float(Bn.min()) >= -threshold:
        return np.eye(d)
    Q = _qr_rotation(Bn)
    if float((Q @ Bn).min()) >= -threshold:
        return Q
    centroid = Bn[:, norms > 0.0].sum(axis=1)
    if float(np.linalg.norm(centroid)) > 0.0:
        Q = householder_align(centroid).Q
        if float((Q @ Bn).min()) >= -threshold:
            return Q

    pairs = _givens_pairs(d)
    rng = np.random.default_rng(seed)

    def objective(theta: np.ndarray) -> float:
        neg = np.minimum(_rotation_from_angles(theta, pairs, d) @ Bn, 0.0)
        return float(np.sum(neg * neg))

    for restart in range(restarts):
        x0 = np.zeros(len(pairs)) if restart == 0 else rng.uniform(-math.pi, math.pi, len(pairs))
        found: dict[str, np.ndarray] = {}

        def stop_when_solved(xk: np.ndarray) -> None:
            if objective(xk) == 0.0:
                found["x"] = xk
                raise StopIteration

        try:
            result = minimize(
                objective,
                x0,
                method="Nelder-Mead",
                callback=stop_when_solved,
                options={"maxiter": maxiter, "fatol": 1e-24, "xatol": 1e-14},
            )
            best = result.x
        except StopIteration:
            best = found["x"]
        Q = _rotation_from_angles(best, pairs, d)
        if float((Q @ Bn).min()) >= -threshold:
            return Q
    return None


def small_orthant_rotation(
    vectors: np.ndarray | Sequence[Sequence[float]],
    budget: int = 200,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    maxiter: int = 2000,
) -> np.ndarray | None:
    """Rotate ``k`` vectors in dimension ``k <= 4`` into the nonnegative orthant.

    The input is a square array whose columns are the vectors; they must
    have pairwise nonnegative inner products.  For these sizes a solution
    always exists, so ``None`` signals an exhausted search budget rather
    than a disproof.
    """
    B = np.asarray(vectors, dtype=float)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise InvalidInputError(
            f"expected k vectors of dimension k as a square column array, got shape {B.shape}"
        )
    k = B.shape[0]
    if k > 4:
        raise PreconditionError(
            f"guaranteed rotation is limited to dimension 4, got {k}; "
            "use orthant_rotation_search for heuristic attempts"
        )
    gram = B.T @ B
    norms = np.sqrt(np.maximum(np.diag(gram), 0.0))
    pair_scale = np.maximum(np.outer(norms, norms), 1e-300)
    if float((gram / pair_scale).min()) < -tol.eps_nonneg:
        raise InvalidInputError("vectors have a negative pairwise inner product")
    return orthant_rotation_search(
        B, restarts=budget, maxiter=maxiter, seed=seed, eps=tol.eps_nonneg
    )
