import itertools

import numpy as np
import pytest

from cprank import (
    Tolerances,
    UnsupportedRankError,
    find_nnq_witness,
    is_nnq_gram,
    nnq_factor,
    nnq_invariance_check,
    sr_factor,
    verify_certificate,
)
from cprank.fixtures import example_factor, example_matrix
from cprank.nnq import NONE, NONE_BUDGET

# the printed source matrix carries 4-decimal rounding, so its smallest
# eigenvalues are only zero to about 1e-4 of the largest one
ROUNDED_TOL = Tolerances(eps_psd=1e-4, eps_rank=1e-4, eps_nonneg=1e-6, eps_residual=1e-4)


def rank3_model(A, tol):
    """Rank-3 spectral reconstruction of a numerically noisy input."""
    B = sr_factor(A, tol)
    return B.gram(), B


class TestFindWitness:
    def test_identity(self):
        res = find_nnq_witness(np.eye(3))
        assert res.found and res.witness.indices == (0, 1, 2)
        assert np.allclose(res.witness.P, np.eye(3))

    def test_rounded_example_witness(self):
        B = sr_factor(example_matrix("EX3_9"), ROUNDED_TOL)
        res = find_nnq_witness(B, ROUNDED_TOL)
        assert res.found and res.witness.indices == (0, 1, 2)
        # published coordinate values are reproduced only loosely because
        # the source matrix itself is rounded
        printed = example_factor("EX3_9_P_FACTOR")
        assert np.abs(res.witness.P - printed).max() <= 0.15

    def test_non_nnq_example(self):
        B = sr_factor(example_matrix("EX3_7"))
        assert find_nnq_witness(B).status == NONE

    def test_budget_status_is_distinct(self):
        B = sr_factor(example_matrix("EX3_7"))
        assert find_nnq_witness(B, max_subsets=1).status == NONE_BUDGET

    def test_lexicographic_first_and_deterministic(self):
        B = np.hstack([np.eye(3), np.eye(3)])  # many qualifying bases
        r1 = find_nnq_witness(B)
        r2 = find_nnq_witness(B)
        assert r1.witness.indices == r2.witness.indices == (0, 1, 2)


class TestIsNnqGram:
    def test_rounded_example(self):
        res = is_nnq_gram(example_matrix("EX3_9"), ROUNDED_TOL)
        assert res.found and res.witness.indices == (0, 1, 2)
        printed = example_factor("EX3_9_P_GRAM")
        assert np.abs(res.witness.P - printed).max() <= 0.15

    def test_non_nnq_example(self):
        assert is_nnq_gram(example_matrix("EX3_7")).status == NONE

    def test_diagonal(self):
        res = is_nnq_gram(np.diag([3.0, 5.0]))
        assert res.found and res.witness.indices == (0, 1)

    def test_agrees_with_factor_route(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            r = int(rng.integers(1, 5))
            n = int(rng.integers(r, 8))
            G = rng.uniform(0.0, 1.0, size=(r, n))
            A = G.T @ G
            gram_res = is_nnq_gram(A)
            factor_res = find_nnq_witness(sr_factor(A))
            assert gram_res.status == factor_res.status
            if gram_res.found:
                assert gram_res.witness.indices == factor_res.witness.indices


class TestPInvarianceQuantified:
    def test_every_invertible_subset_agrees_across_factors(self):
        from cprank import random_orthogonal

        rng = np.random.default_rng(30)
        for _ in range(200):
            r = int(rng.integers(1, 5))
            n = int(rng.integers(r, 9))
            G = rng.standard_normal((r, n))
            A = G.T @ G
            B1 = sr_factor(A).B
            B2 = random_orthogonal(r, rng) @ B1
            for sigma in itertools.combinations(range(n), r):
                sub = B1[:, list(sigma)]
                if abs(np.linalg.det(sub)) < 1e-6:
                    continue
                P1 = np.linalg.solve(sub, B1)
                P2 = np.linalg.solve(B2[:, list(sigma)], B2)
                scale = max(1.0, np.abs(P1).max())
                assert np.abs(P1 - P2).max() <= 1e-8 * scale


class TestNnqFactor:
    def test_rounded_example_certificate(self):
        A = example_matrix("EX3_9")
        res = is_nnq_gram(A, ROUNDED_TOL)
        cert = nnq_factor(A, res.witness, ROUNDED_TOL)
        assert cert.rows == 3
        # against the rank-3 model the factorization is essentially exact;
        # against the rounded input it is limited by the truncation floor
        model, _ = rank3_model(A, ROUNDED_TOL)
        assert np.linalg.norm(cert.C.T @ cert.C - model) <= 1e-6 * np.linalg.norm(model)
        assert cert.residual <= 1e-4
        assert verify_certificate(A, cert, ROUNDED_TOL).passed

    def test_diagonal(self):
        A = np.diag([1.0, 4.0, 9.0])
        res = is_nnq_gram(A)
        cert = nnq_factor(A, res.witness)
        rows = sorted(cert.C.tolist())
        assert np.allclose(rows, sorted(np.diag([1.0, 2.0, 3.0]).tolist()), atol=1e-9)

    def test_constructed_nnq_instance(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            N = rng.uniform(0.1, 1.0, size=(3, 3))
            P = np.hstack([np.eye(3), rng.uniform(0.0, 1.0, size=(3, 4))])
            A = P.T @ (N.T @ N) @ P
            res = is_nnq_gram(A)
            assert res.found
            cert = nnq_factor(A, res.witness, seed=7)
            assert cert.rows == 3
            assert verify_certificate(A, cert).passed

    def test_unsupported_rank(self):
        rng = np.random.default_rng(1)
        G = rng.uniform(0.1, 1.0, size=(5, 7))
        A = G.T @ G
        res = is_nnq_gram(A)
        if res.found:
            with pytest.raises(UnsupportedRankError):
                nnq_factor(A, res.witness)


class TestInvarianceCheck:
    def test_rounded_example(self):
        assert nnq_invariance_check(example_matrix("EX3_9"), ROUNDED_TOL)

    def test_non_nnq_example(self):
        assert nnq_invariance_check(example_matrix("EX3_7"))

    def test_identity(self):
        assert nnq_invariance_check(np.eye(4))

    def test_random_instances(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            r = int(rng.integers(1, 5))
            n = int(rng.integers(r, 8))
            G = rng.uniform(0.0, 1.0, size=(r, n))
            assert nnq_invariance_check(G.T @ G, seed=int(rng.integers(1 << 31)))
