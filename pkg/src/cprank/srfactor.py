"""Symmetric rank factorization ``A = B^T B`` and certificate handling.

An SR factor has exactly ``rank(A)`` rows; any two SR factors of the same
matrix are connected by an orthogonal matrix, which is what makes every
rotation-based construction in this package basis-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, PreconditionError
from .matcore import DEFAULT_TOL, MatrixLike, Tolerances, as_symmetric, psd_rank, sym_eigen

__all__ = [
    "SrFactor",
    "sr_factor",
    "connecting_orthogonal",
    "CpCertificate",
    "make_certificate",
    "VerificationReport",
    "verify_certificate",
]


@dataclass(frozen=True)
class SrFactor:
    """A full-row-rank matrix ``B`` of shape ``(r, n)`` with ``B^T B = A``.

    Column ``i`` of ``B`` is the Gram vector of row/column ``i`` of the
    factored matrix.
    """

    B: np.ndarray

    def __post_init__(self) -> None:
        B = np.asarray(self.B, dtype=float)
        if B.ndim != 2:
            raise InvalidInputError(f"SR factor must be a 2-d array, got shape {B.shape}")
        B = B.copy()
        B.flags.writeable = False
        object.__setattr__(self, "B", B)

    @property
    def r(self) -> int:
        return self.B.shape[0]

    @property
    def n(self) -> int:
        return self.B.shape[1]

    def gram(self) -> np.ndarray:
        return self.B.T @ self.B


def sr_factor(A: MatrixLike, tol: Tolerances = DEFAULT_TOL) -> SrFactor:
    """Symmetric rank factorization from the spectral decomposition.

    Builds ``B = diag(sqrt(lambda_k)) V_r^T`` from the leading ``r``
    eigenpairs, where ``r`` is the numerical rank.  Plain Cholesky would
    fail on singular input, and since all SR factors are orthogonally
    equivalent the eigenvector construction loses nothing.  The
    eigenvector sign convention makes the result deterministic.
    """
    S = as_symmetric(A, tol)
    is_psd, r = psd_rank(S, tol)
    if not is_psd:
        raise PreconditionError("SR factorization requires a positive semidefinite matrix")
    if r == 0:
        return SrFactor(B=np.zeros((0, S.n)))
    eig = sym_eigen(S, tol)
    w = np.maximum(eig.eigenvalues[:r], 0.0)
    V = eig.eigenvectors[:, :r]
    return SrFactor(B=np.sqrt(w)[:, None] * V.T)


def connecting_orthogonal(
    B: SrFactor | np.ndarray,
    C: SrFactor | np.ndarray,
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """Orthogonal ``Q`` linking two rank factorizations of one matrix.

    For full-row-rank factors with equal Gram matrices the construction
    ``Q = (B B^T)^{-1} B C^T`` returns the orthogonal matrix satisfying
    ``B = Q C``.  Note the orientation: ``Q`` maps the second factor onto
    the first.

    Raises
    ------
    InvalidInputError
        If the shapes differ or the Gram matrices disagree beyond
        ``eps_residual`` relative to their scale.
    """
    Bm = B.B if isinstance(B, SrFactor) else np.asarray(B, dtype=float)
    Cm = C.B if isinstance(C, SrFactor) else np.asarray(C, dtype=float)
    if Bm.shape != Cm.shape:
        raise InvalidInputError(f"factor shapes differ: {Bm.shape} vs {Cm.shape}")
    gram_b = Bm.T @ Bm
    gram_c = Cm.T @ Cm
    scale = max(float(np.linalg.norm(gram_b)), float(np.linalg.norm(gram_c)), 1e-300)
    mismatch = float(np.linalg.norm(gram_b - gram_c))
    if mismatch > tol.eps_residual * scale:
        raise InvalidInputError(
            f"factors have different Gram matrices: relative mismatch {mismatch / scale:.3e}"
        )
    BBt = Bm @ Bm.T
    return np.linalg.solve(BBt, Bm @ Cm.T)


@dataclass(frozen=True)
class CpCertificate:
    """An entrywise-nonnegative factor ``C`` with ``C^T C = A``.

    ``min_entry`` is the smallest entry before clamping; entries in
    ``[-eps_nonneg, 0)`` are clamped to zero on construction and both the
    pre- and post-clamp relative residuals are recorded.
    """

    C: np.ndarray
    residual: float
    min_entry: float
    method_tag: str
    residual_preclamp: float = field(default=float("nan"))

    def __post_init__(self) -> None:
        C = np.asarray(self.C, dtype=float).copy()
        C.flags.writeable = False
        object.__setattr__(self, "C", C)

    @property
    def rows(self) -> int:
        return self.C.shape[0]

    @property
    def n(self) -> int:
        return self.C.shape[1]


def _relative_residual(A: np.ndarray, C: np.ndarray) -> float:
    denom = float(np.linalg.norm(A))
    num = float(np.linalg.norm(C.T @ C - A))
    if denom == 0.0:
        return 0.0 if num == 0.0 else float("inf")
    return num / denom


def make_certificate(
    A: MatrixLike,
    C: np.ndarray,
    method_tag: str,
    tol: Tolerances = DEFAULT_TOL,
) -> CpCertificate:
    """Package a raw factor as a certificate: record the minimum entry,
    clamp small negatives to zero and re-measure the residual."""
    S = as_symmetric(A, tol)
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[1] != S.n:
        raise InvalidInputError(f"factor shape {C.shape} does not match order {S.n}")
    min_entry = float(C.min()) if C.size else 0.0
    residual_preclamp = _relative_residual(S.a, C)
    clamped = np.where((C < 0.0) & (C >= -tol.eps_nonneg), 0.0, C)
    return CpCertificate(
        C=clamped,
        residual=_relative_residual(S.a, clamped),
        min_entry=min_entry,
        method_tag=method_tag,
        residual_preclamp=residual_preclamp,
    )


@dataclass(frozen=True)
class VerificationReport:
    residual: float
    min_entry: float
    rows: int
    passed: bool


def verify_certificate(
    A: MatrixLike, cert: CpCertificate, tol: Tolerances = DEFAULT_TOL
) -> VerificationReport:
    """Check a certificate against its matrix.

    Passes iff the factor is entrywise nonnegative within ``eps_nonneg``,
    the relative residual of ``C^T C - A`` is within ``eps_residual``, and
    the row count is at least the numerical rank of ``A``.
    """
    S = as_symmetric(A, tol)
    C = cert.C
    if C.shape[1] != S.n:
        raise InvalidInputError(f"certificate has {C.shape[1]} columns for order {S.n}")
    residual = _relative_residual(S.a, C)
    min_entry = float(C.min()) if C.size else 0.0
    rank = psd_rank(S, tol).rank
    passed = (
        min_entry >= -tol.eps_nonneg
        and residual <= tol.eps_residual
        and C.shape[0] >= rank
    )
    return VerificationReport(
        residual=residual, min_entry=min_entry, rows=C.shape[0], passed=bool(passed)
    )
