"""Dense symmetric-matrix kernel.

Everything downstream works on symmetric matrices with a tolerance-driven
notion of nonnegativity, positive semidefiniteness and rank.  This module
owns those decisions: eigendecomposition, PSD/rank classification, the
doubly-nonnegative (DN) verdict, diagonal scaling, and the comparison
matrix ``2 diag(A) - A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import InvalidInputError, PreconditionError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SymmetricMatrix",
    "as_symmetric",
    "EigenDecomposition",
    "sym_eigen",
    "PsdRank",
    "psd_rank",
    "DnVerdict",
    "classify_dn",
    "comparison_matrix",
    "unit_diagonal_scaling",
    "zero_diagonal_indices",
    "NOT_NONNEGATIVE",
    "NOT_PSD",
    "DN",
]

NOT_NONNEGATIVE = "NOT_NONNEGATIVE"
NOT_PSD = "NOT_PSD"
DN = "DN"


@dataclass(frozen=True)
class Tolerances:
    """Numerical slack used by every decision in the package.

    Attributes
    ----------
    eps_sym : float
        Relative asymmetry allowed on input matrices before they are
        rejected instead of symmetrized.
    eps_psd : float
        Eigenvalue slack relative to ``max(1, |lambda_max|)`` when deciding
        positive semidefiniteness.
    eps_rank : float
        Eigenvalue threshold on the same scale used to count the rank.
    eps_nonneg : float
        Absolute slack for entrywise-nonnegativity checks and certificate
        clamping.
    eps_residual : float
        Relative Frobenius residual allowed for factorization certificates.
    """

    eps_sym: float = 1e-8
    eps_psd: float = 1e-9
    eps_rank: float = 1e-9
    eps_nonneg: float = 1e-9
    eps_residual: float = 1e-8

    def __post_init__(self) -> None:
        for name in ("eps_sym", "eps_psd", "eps_rank", "eps_nonneg", "eps_residual"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise InvalidInputError(f"{name} must lie strictly between 0 and 1, got {value!r}")


DEFAULT_TOL = Tolerances()

MatrixLike = Union["SymmetricMatrix", np.ndarray, Sequence[Sequence[float]]]


class SymmetricMatrix:
    """An immutable dense symmetric matrix.

    Construction symmetrizes the input as ``(A + A^T) / 2`` provided the
    relative asymmetry does not exceed ``tol.eps_sym``; larger asymmetry is
    rejected.  The stored array is read-only so values can be shared freely.
    """

    __slots__ = ("_a",)

    def __init__(self, entries: MatrixLike, tol: Tolerances = DEFAULT_TOL):
        a = np.array(getattr(entries, "a", entries), dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise InvalidInputError("matrix order must be at least 1")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("matrix entries must be finite")
        scale = float(np.abs(a).max())
        defect = float(np.abs(a - a.T).max())
        if defect > tol.eps_sym * max(1.0, scale):
            raise InvalidInputError(
                f"matrix is not symmetric: asymmetry {defect:.3e} exceeds "
                f"{tol.eps_sym:.1e} * {max(1.0, scale):.3e}"
            )
        a = (a + a.T) / 2.0
        a.flags.writeable = False
        object.__setattr__(self, "_a", a)

    @property
    def a(self) -> np.ndarray:
        """Read-only ndarray view of the entries."""
        return self._a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def symmetry_defect(self) -> float:
        # exact by construction; kept for report plumbing
        return 0.0

    def __repr__(self) -> str:
        return f"SymmetricMatrix(n={self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymmetricMatrix) and np.array_equal(self._a, other._a)

    def __hash__(self) -> int:
        return hash((self.n, self._a.tobytes()))


def as_symmetric(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> SymmetricMatrix:
    """Coerce an array-like to :class:`SymmetricMatrix` (no copy semantics implied)."""
    if isinstance(A, SymmetricMatrix):
        return A
    return SymmetricMatrix(A, tol)


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition ``A = V diag(w) V^T`` with eigenvalues sorted
    in non-increasing order and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sym_eigen(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix.

    Eigenvalues are returned in non-increasing order.  Each eigenvector
    column is flipped so that its largest-magnitude entry is positive,
    which makes the result deterministic for a fixed input.
    """
    S = as_symmetric(A, tol)
    w, V = np.linalg.eigh(S.a)
    order = np.argsort(w, kind="stable")[::-1]
    w = w[order]
    V = V[:, order]
    for k in range(V.shape[1]):
        j = int(np.argmax(np.abs(V[:, k])))
        if V[j, k] < 0.0:
            V[:, k] = -V[:, k]
    w.flags.writeable = False
    V.flags.writeable = False
    return EigenDecomposition(eigenvalues=w, eigenvectors=V)


class PsdRank(NamedTuple):
    is_psd: bool
    rank: int


def psd_rank(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> PsdRank:
    """Decide positive semidefiniteness and count the numerical rank.

    ``is_psd`` holds iff the smallest eigenvalue is at least
    ``-eps_psd * max(1, |lambda_max|)``; the rank is the number of
    eigenvalues whose magnitude exceeds ``eps_rank`` on the same scale.
    """
    eig = sym_eigen(A, tol)
    w = eig.eigenvalues
    scale = max(1.0, float(np.abs(w).max()))
    is_psd = bool(w[-1] >= -tol.eps_psd * scale)
    rank = int(np.count_nonzero(np.abs(w) > tol.eps_rank * scale))
    return PsdRank(is_psd=is_psd, rank=rank)


@dataclass(frozen=True)
class DnVerdict:
    """Outcome of the doubly-nonnegative test.

    ``status`` is one of ``NOT_NONNEGATIVE``, ``NOT_PSD`` or ``DN``; the
    rank is present only for DN matrices.
    """

    status: str
    rank: int | None = None

    @property
    def is_dn(self) -> bool:
        return self.status == DN


def classify_dn(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> DnVerdict:
    """Classify a symmetric matrix as DN (with rank) or tell why it is not.

    Nonnegativity is checked first with absolute slack ``eps_nonneg``, then
    positive semidefiniteness via :func:`psd_rank`.
    """
    S = as_symmetric(A, tol)
    if float(S.a.min()) < -tol.eps_nonneg:
        return DnVerdict(status=NOT_NONNEGATIVE)
    is_psd, rank = psd_rank(S, tol)
    if not is_psd:
        return DnVerdict(status=NOT_PSD)
    return DnVerdict(status=DN, rank=rank)


def comparison_matrix(
    A: MatrixLike, tol: Tolerances = DEFAULT_TOL, validate: bool = True
) -> SymmetricMatrix:
    """Return ``2 diag(A) - A``: the diagonal is kept, off-diagonals are negated.

    With ``validate`` (the default) the input must be entrywise nonnegative
    up to ``eps_nonneg``.  Passing ``validate=False`` allows applying the
    map to matrices with negative off-diagonals, e.g. to invert it.
    """
    S = as_symmetric(A, tol)
    if validate and float(S.a.min()) < -tol.eps_nonneg:
        raise InvalidInputError(
            f"comparison matrix requires a nonnegative input, min entry {S.a.min():.3e}"
        )
    M = 2.0 * np.diag(np.diag(S.a)) - S.a
    return SymmetricMatrix(M, tol)


def unit_diagonal_scaling(
    A: MatrixLike, tol: Tolerances = DEFAULT_TOL
) -> tuple[SymmetricMatrix, np.ndarray]:
    """Congruence-scale to unit diagonal: ``D^{-1/2} A D^{-1/2}``.

    Returns the scaled matrix and the original diagonal ``d``, so that the
    input is recoverable as ``D^{1/2} Ascaled D^{1/2}``.  Every diagonal
    entry must be strictly positive; rows with zero diagonal have to be
    deflated by the caller first (see :func:`zero_diagonal_indices`).
    """
    S = as_symmetric(A, tol)
    d = np.diag(S.a).copy()
    if float(d.min()) <= 0.0:
        raise PreconditionError(
            f"unit diagonal scaling needs a strictly positive diagonal, min {d.min():.3e}"
        )
    inv_sqrt = 1.0 / np.sqrt(d)
    scaled = inv_sqrt[:, None] * S.a * inv_sqrt[None, :]
    # pin the diagonal to exact ones; roundoff otherwise leaves 1 +/- ulp
    np.fill_diagonal(scaled, 1.0)
    d.flags.writeable = False
    return SymmetricMatrix(scaled, tol), d


def zero_diagonal_indices(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Indices of rows whose diagonal entry is numerically zero.

    For a PSD matrix such rows are entirely zero, so factorizers can drop
    them and reinsert zero columns into certificates afterwards.
    """
    S = as_symmetric(A, tol)
    d = np.diag(S.a)
    scale = max(1.0, float(np.abs(S.a).max()))
    return np.flatnonzero(np.abs(d) <= tol.eps_nonneg * scale)
