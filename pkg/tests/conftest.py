"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np


def random_symmetric(rng: np.random.Generator, n: int, scale: float = 2.0) -> np.ndarray:
    M = rng.standard_normal((n, n)) * scale
    return (M + M.T) / 2.0


def dn_rank2_instance(rng: np.random.Generator, n: int) -> np.ndarray:
    """Gram matrix of n plane vectors confined to one quarter turn, so all
    pairwise inner products are nonnegative and the rank is 2."""
    base = rng.uniform(0.0, 2.0 * math.pi)
    angles = base + rng.uniform(0.0, math.pi / 2.0, size=n)
    radii = rng.uniform(0.3, 3.0, size=n)
    V = np.vstack([radii * np.cos(angles), radii * np.sin(angles)])
    return V.T @ V


def cone_sampled_vectors(rng: np.random.Generator, r: int, n: int,
                         radii=None) -> np.ndarray:
    """n vectors inside the nonnegativity cone around the all-ones axis of
    R^r, then randomly rotated; their Gram matrix is DN by construction and
    a rotation into the orthant is guaranteed to exist."""
    threshold = math.sqrt((r - 1) / r)
    axis = np.ones(r) / math.sqrt(r)
    if radii is None:
        radii = rng.uniform(0.5, 2.0, size=n)
    Z = np.empty((r, n))
    for i in range(n):
        cos = rng.uniform(threshold, 1.0)
        y = rng.standard_normal(r)
        y -= (y @ axis) * axis
        norm = np.linalg.norm(y)
        y = y / norm if norm > 0 else np.zeros(r)
        Z[:, i] = radii[i] * (cos * axis + math.sqrt(1.0 - cos * cos) * y)
    M = rng.standard_normal((r, r))
    q, rr = np.linalg.qr(M)
    q = q * np.sign(np.diag(rr))
    return q @ Z


def hull_extreme_indices(B: np.ndarray) -> list[int]:
    """Independent extreme-ray oracle for a pointed rank-3 cone.

    Projects the generators onto the cross-section plane orthogonal to
    their sum direction and runs a Graham scan with strict turns, so
    points interior to hull edges (nonnegative combinations of the
    endpoints) do not count as vertices.
    """
    B = np.asarray(B, dtype=float)
    n = B.shape[1]
    c = B.sum(axis=1)
    c = c / np.linalg.norm(c)
    dots = c @ B
    assert np.all(dots > 0), "cross-section direction must see every generator"
    P = B / dots  # points on the plane <c, p> = 1
    u = np.array([1.0, 0.0, 0.0]) - c[0] * c
    if np.linalg.norm(u) < 1e-8:
        u = np.array([0.0, 1.0, 0.0]) - c[1] * c
    u = u / np.linalg.norm(u)
    v = np.cross(c, u)
    pts = np.vstack([u @ P, v @ P]).T  # (n, 2)

    order = sorted(range(n), key=lambda i: (pts[i, 0], pts[i, 1]))
    span = max(1.0, float(np.abs(pts).max()))
    eps = 1e-9 * span * span

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (
            pts[a, 1] - pts[o, 1]
        ) * (pts[b, 0] - pts[o, 0])

    def half(indices):
        chain: list[int] = []
        for i in indices:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], i) <= eps:
                chain.pop()
            chain.append(i)
        return chain[:-1]

    lower = half(order)
    upper = half(order[::-1])
    return sorted(set(lower + upper))
