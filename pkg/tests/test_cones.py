import math

import numpy as np
import pytest

from cprank import (
    InvalidInputError,
    PreconditionError,
    Tolerances,
    decide_rank3_three_rays,
    extreme_columns,
    extreme_rays,
    few_rays_factor,
    nnls,
    sr_factor,
    verify_certificate,
)
from cprank.cones import IN_CP_N3, NOT_APPLICABLE
from cprank.fixtures import example_matrix, soules_cp
from conftest import hull_extreme_indices

ROUNDED_TOL = Tolerances(eps_psd=1e-4, eps_rank=1e-4, eps_nonneg=1e-6, eps_residual=1e-4)


class TestNnls:
    def test_target_is_first_generator(self):
        coeffs, resid = nnls([1.0, 0.0], np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert np.allclose(coeffs, [1.0, 0.0]) and resid <= 1e-12

    def test_opposed_target(self):
        g = np.array([2.0, 0.0])
        coeffs, resid = nnls(-g, g.reshape(-1, 1))
        assert coeffs[0] == 0.0
        assert abs(resid - np.linalg.norm(g)) <= 1e-12

    def test_nonunique_combination_still_exact(self):
        gens = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
        coeffs, resid = nnls([1.0, 1.0], gens)
        assert resid <= 1e-12
        assert coeffs.min() >= 0.0
        assert np.allclose(gens @ coeffs, [1.0, 1.0])

    def test_requires_generators(self):
        with pytest.raises(InvalidInputError):
            nnls([1.0], np.zeros((1, 0)))

    def test_global_minimum_against_face_enumeration(self):
        # the optimum of the convex problem sits on a face, so enumerating
        # support sets gives an exact, independent oracle at small sizes
        import itertools

        def brute(G, b):
            best = np.linalg.norm(b)
            for size in range(1, G.shape[1] + 1):
                for S in itertools.combinations(range(G.shape[1]), size):
                    xs, *_ = np.linalg.lstsq(G[:, S], b, rcond=None)
                    if xs.min(initial=1.0) >= -1e-12:
                        r = np.linalg.norm(G[:, list(S)] @ np.maximum(xs, 0) - b)
                        best = min(best, r)
            return best

        rng = np.random.default_rng(77)
        for _ in range(150):
            m = int(rng.integers(2, 7))
            k = int(rng.integers(1, 7))
            rk = int(rng.integers(1, min(m, 4) + 1))
            G = rng.standard_normal((m, rk)) @ rng.standard_normal((rk, k))
            b = rng.standard_normal(m)
            if rng.random() < 0.3:
                b = G @ np.abs(rng.standard_normal(k))
            coeffs, resid = nnls(b, G)
            assert coeffs.min() >= 0.0
            assert resid <= brute(G, b) + 1e-8


class TestExtremeRays:
    def test_identity(self):
        report = extreme_rays(np.eye(3))
        assert report.m == 3 and report.extreme_indices == (0, 1, 2)

    def test_rounded_example_has_three_rays(self):
        report = extreme_rays(example_matrix("EX3_9"), ROUNDED_TOL)
        assert report.m == 3
        assert report.extreme_indices == (0, 1, 2)
        assert report.residual <= 1e-8

    def test_soules_instance_rank3(self):
        A = soules_cp(np.ones(6), [5.0, 2.0, 1.0, 0.0, 0.0, 0.0])
        report = extreme_rays(A)
        assert report.m == 3

    def test_soules_ray_count_equals_rank(self):
        # Soules-structured instances realize the minimal ray count: their
        # Gram vectors collapse onto exactly rank many rays
        from cprank.fixtures import SOULES, random_dn

        for seed in range(12):
            r = 2 + seed % 3  # ranks 2, 3, 4
            n = 5 + seed % 3
            A = random_dn(n, r, seed=seed, style=SOULES)
            assert extreme_rays(A).m == r

    def test_ray_count_can_exceed_rank_even_for_certified_instances(self):
        # cp-rank equal to rank does NOT force the ray count down to the
        # rank: this 4x4 matrix has a verified 3-row factorization, yet all
        # four of its columns are extreme by a wide margin
        from cprank import rowsum_factor, verify_certificate

        A = example_matrix("EX2_7")
        cert = rowsum_factor(A)
        assert cert.rows == 3 and verify_certificate(A, cert).passed
        report = extreme_rays(A)
        assert report.m == 4
        B = sr_factor(A).B
        for j in range(4):
            others = [k for k in range(4) if k != j]
            _, resid = nnls(B[:, j], B[:, others])
            assert resid >= 0.1 * np.linalg.norm(B[:, j])

    def test_duplicate_columns_collapse(self):
        V = np.array([[1.0, 0.0, 2.0], [0.0, 1.0, 0.0]])  # third = 2x first
        report = extreme_columns(V.T @ V)
        assert report.m == 2
        assert report.extreme_indices == (0, 1)
        assert report.W[0, 2] > 0  # duplicate reconstructed from its ray

    def test_zero_matrix(self):
        report = extreme_rays(np.zeros((3, 3)))
        assert report.m == 0

    def test_requires_dn(self):
        with pytest.raises(PreconditionError):
            extreme_rays(np.array([[1.0, -1.0], [-1.0, 1.0]]))

    def test_reconstruction_invariants(self):
        rng = np.random.default_rng(14)
        for _ in range(30):
            n = int(rng.integers(3, 8))
            G = rng.uniform(0.0, 1.0, size=(3, n))
            A = G.T @ G
            report = extreme_rays(A)
            assert report.m >= 3  # extreme rays span the rank-3 column space
            assert report.residual <= 1e-7
            assert report.W.min() >= -1e-9

    def test_ray_count_matches_factor_columns(self):
        rng = np.random.default_rng(15)
        for _ in range(50):
            n = int(rng.integers(3, 9))
            r = int(rng.integers(1, 5))
            G = rng.uniform(0.0, 1.0, size=(r, n))
            A = G.T @ G
            B = sr_factor(A)
            from_gram = extreme_columns(B.gram())
            from_factor = extreme_columns(B.B)
            assert from_gram.extreme_indices == from_factor.extreme_indices

    def test_matches_cross_section_hull_oracle(self):
        rng = np.random.default_rng(16)
        for _ in range(40):
            n = int(rng.integers(4, 9))
            G = rng.uniform(0.05, 1.0, size=(3, n))
            A = G.T @ G
            report = extreme_rays(A)
            oracle = hull_extreme_indices(sr_factor(A).B)
            assert list(report.extreme_indices) == oracle


class TestFewRaysFactor:
    def test_diagonal(self):
        A = np.diag([1.0, 2.0, 3.0])
        report = extreme_rays(A)
        cert = few_rays_factor(A, report)
        assert cert.rows == 3
        assert verify_certificate(A, cert).passed

    def test_rounded_example(self):
        A = example_matrix("EX3_9")
        model = sr_factor(A, ROUNDED_TOL).gram()
        report = extreme_rays(model)
        cert = few_rays_factor(model, report)
        assert cert.rows == 3
        assert cert.residual <= 1e-6
        assert verify_certificate(model, cert).passed

    def test_rank2_fan_with_two_rays(self):
        angles = np.linspace(0.1, 0.1 + math.pi / 2 - 0.2, 5)
        V = np.vstack([np.cos(angles), np.sin(angles)])
        A = V.T @ V
        report = extreme_rays(A)
        assert report.m == 2
        assert report.extreme_indices == (0, 4)  # the fan edges
        cert = few_rays_factor(A, report)
        assert cert.rows == 2
        assert verify_certificate(A, cert).passed

    def test_too_many_rays_rejected(self):
        A = np.eye(5)
        report = extreme_rays(A)
        with pytest.raises(PreconditionError):
            few_rays_factor(A, report)


class TestRank3RayDecision:
    def test_rounded_example_is_member(self):
        A = sr_factor(example_matrix("EX3_9"), ROUNDED_TOL).gram()
        decision = decide_rank3_three_rays(A)
        assert decision.status == IN_CP_N3
        assert decision.m == 3
        assert decision.certificate is not None
        assert verify_certificate(A, decision.certificate).passed

    def test_non_nnq_example_not_applicable(self):
        decision = decide_rank3_three_rays(example_matrix("EX3_7"))
        assert decision.status == NOT_APPLICABLE
        assert decision.m == 4  # four extreme rays break the hypothesis

    def test_rowsum_example_not_applicable(self):
        decision = decide_rank3_three_rays(example_matrix("EX2_7"))
        assert decision.status == NOT_APPLICABLE
        assert decision.m == 4
        if decision.certificate is not None:
            assert verify_certificate(example_matrix("EX2_7"), decision.certificate).passed

    def test_wrong_rank_not_applicable(self):
        assert decide_rank3_three_rays(np.eye(4)).status == NOT_APPLICABLE
