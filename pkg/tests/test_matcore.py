import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cprank import (
    InvalidInputError,
    PreconditionError,
    SymmetricMatrix,
    Tolerances,
    classify_dn,
    comparison_matrix,
    psd_rank,
    sym_eigen,
    unit_diagonal_scaling,
    zero_diagonal_indices,
)
from cprank.fixtures import example_matrix
from conftest import random_symmetric


class TestSymmetricMatrix:
    def test_symmetrizes_small_asymmetry(self):
        S = SymmetricMatrix([[1.0, 2.0 + 1e-12], [2.0, 3.0]])
        assert S.a[0, 1] == S.a[1, 0]

    def test_rejects_large_asymmetry(self):
        with pytest.raises(InvalidInputError):
            SymmetricMatrix([[1.0, 2.0], [0.5, 3.0]])

    def test_rejects_non_square(self):
        with pytest.raises(InvalidInputError):
            SymmetricMatrix(np.ones((2, 3)))

    def test_entries_read_only(self):
        S = SymmetricMatrix(np.eye(2))
        with pytest.raises(ValueError):
            S.a[0, 0] = 5.0

    def test_tolerance_validation(self):
        with pytest.raises(InvalidInputError):
            Tolerances(eps_psd=0.0)
        with pytest.raises(InvalidInputError):
            Tolerances(eps_rank=1.5)


class TestSymEigen:
    def test_identity(self):
        eig = sym_eigen(np.eye(3))
        assert np.allclose(eig.eigenvalues, [1, 1, 1])

    def test_cycle_matrix_spectrum(self):
        # circulant 2I + P + P^3: eigenvalues 2 + 2cos(pi k / 2), k = 0..3
        expected = sorted((2.0 + 2.0 * np.cos(np.pi * k / 2.0) for k in range(4)), reverse=True)
        eig = sym_eigen(example_matrix("EX1_2"))
        assert np.allclose(eig.eigenvalues, expected, atol=1e-12)

    def test_diagonal(self):
        eig = sym_eigen(np.diag([100.0, 1.0]))
        assert np.allclose(eig.eigenvalues, [100.0, 1.0])

    def test_deterministic(self):
        rng = np.random.default_rng(0)
        A = random_symmetric(rng, 7)
        e1, e2 = sym_eigen(A), sym_eigen(A)
        assert np.array_equal(e1.eigenvalues, e2.eigenvalues)
        assert np.array_equal(e1.eigenvectors, e2.eigenvectors)

    def test_invariants_random(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            n = int(rng.integers(1, 13))
            A = random_symmetric(rng, n)
            eig = sym_eigen(A)
            V, w = eig.eigenvectors, eig.eigenvalues
            assert np.abs(V.T @ V - np.eye(n)).max() <= 1e-12
            recon = V @ np.diag(w) @ V.T
            assert np.linalg.norm(recon - A) <= 1e-10 * max(np.linalg.norm(A), 1e-300)
            assert np.all(np.diff(w) <= 1e-12)


class TestPsdRank:
    def test_cycle_matrix(self):
        assert psd_rank(example_matrix("EX1_2")) == (True, 3)

    def test_all_ones(self):
        assert psd_rank(np.ones((3, 3))) == (True, 1)

    def test_indefinite(self):
        assert psd_rank(np.array([[1.0, -2.0], [-2.0, 1.0]])) == (False, 2)


class TestClassifyDn:
    def test_rowsum_example_is_dn_rank3(self):
        v = classify_dn(example_matrix("EX2_7"))
        assert v.is_dn and v.rank == 3

    def test_negative_entry(self):
        assert classify_dn(np.array([[1.0, -1.0], [-1.0, 1.0]])).status == "NOT_NONNEGATIVE"

    def test_not_psd(self):
        assert classify_dn(np.array([[0.0, 1.0], [1.0, 0.0]])).status == "NOT_PSD"

    def test_principal_submatrices_stay_dn(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            n = int(rng.integers(2, 8))
            r = int(rng.integers(1, n + 1))
            G = rng.uniform(0.0, 1.0, size=(r, n))
            A = G.T @ G
            v = classify_dn(A)
            assert v.is_dn
            keep = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
            sub = classify_dn(A[np.ix_(keep, keep)])
            assert sub.is_dn and sub.rank <= v.rank


class TestComparisonMatrix:
    def test_diagonal_fixed_point(self):
        D = np.diag([3.0, 5.0])
        assert np.array_equal(comparison_matrix(D).a, D)

    def test_small_example(self):
        M = comparison_matrix(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.array_equal(M.a, np.array([[2.0, -1.0], [-1.0, 2.0]]))

    def test_k23_comparison_is_psd(self):
        M = comparison_matrix(example_matrix("EX3_3"))
        assert psd_rank(M).is_psd

    def test_rejects_negative_entries(self):
        with pytest.raises(InvalidInputError):
            comparison_matrix(np.array([[1.0, -0.5], [-0.5, 1.0]]))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0))
    def test_involution_on_offdiagonal_signs(self, n, seed):
        rng = np.random.default_rng(seed)
        A = np.abs(random_symmetric(rng, n))
        M = comparison_matrix(A)
        back = comparison_matrix(M, validate=False)
        assert np.allclose(back.a, A, atol=1e-14)


class TestUnitDiagonalScaling:
    def test_identity(self):
        scaled, d = unit_diagonal_scaling(np.eye(3))
        assert np.array_equal(scaled.a, np.eye(3))
        assert np.array_equal(d, np.ones(3))

    def test_direct_formula(self):
        scaled, d = unit_diagonal_scaling(np.array([[4.0, 2.0], [2.0, 9.0]]))
        assert np.allclose(scaled.a, [[1.0, 1.0 / 3.0], [1.0 / 3.0, 1.0]])
        assert np.array_equal(d, [4.0, 9.0])

    def test_recoverable(self):
        A = example_matrix("EX2_7").a
        scaled, d = unit_diagonal_scaling(A)
        back = np.sqrt(d)[:, None] * scaled.a * np.sqrt(d)[None, :]
        assert np.allclose(back, A, rtol=0, atol=1e-12 * np.abs(A).max())

    def test_preserves_dn_and_rank(self):
        A = example_matrix("EX2_8")
        scaled, _ = unit_diagonal_scaling(A)
        before, after = classify_dn(A), classify_dn(scaled)
        assert before.status == after.status and before.rank == after.rank == 3

    def test_preserves_rank_and_pattern_random(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            n = int(rng.integers(2, 8))
            G = rng.uniform(0.1, 1.0, size=(n, n))
            A = G.T @ G + np.diag(rng.uniform(0.5, 2.0, size=n))
            scaled, _ = unit_diagonal_scaling(A)
            assert psd_rank(scaled).rank == psd_rank(A).rank
            assert np.array_equal(np.abs(scaled.a) > 1e-14, np.abs(A) > 1e-14)

    def test_zero_diagonal_rejected(self):
        with pytest.raises(PreconditionError):
            unit_diagonal_scaling(np.diag([1.0, 0.0]))

    def test_zero_diagonal_indices(self):
        A = np.zeros((3, 3))
        A[0, 0] = 2.0
        assert list(zero_diagonal_indices(A)) == [1, 2]
