"""Low-rank and small-order cases are fully constructive.

Rank 2: Gram vectors with pairwise nonnegative inner products span at
most a quarter turn, so rotating their bisector onto the diagonal of the
first quadrant certifies every DN matrix of rank 2.  Full rank up to 4:
a seeded rotation search (with QR and centroid fast paths) finds an
orthogonal matrix making the factor nonnegative; a solution always
exists at these sizes.
"""

import numpy as np

from cprank import rank2_factor, small_orthant_rotation, sr_factor, verify_certificate
from cprank.fixtures import GRAM_NONNEG, random_dn

A = random_dn(8, 2, seed=4, style=GRAM_NONNEG)
cert = rank2_factor(A)
print(f"rank-2 instance (order 8): certificate rows = {cert.rows}, "
      f"residual {cert.residual:.2e}, verified = {verify_certificate(A, cert).passed}")

# a full-rank 3x3 whose raw triangular factor has a negative entry
M = np.array([[1.0, 0.1, 0.1], [0.1, 1.0, 0.0], [0.1, 0.0, 1.0]])
B = np.linalg.cholesky(M).T
print(f"\nraw Cholesky factor min entry: {B.min():.4f}  (negative)")
Q = small_orthant_rotation(B, seed=0)
rotated = Q @ B
print(f"after rotation: min entry {rotated.min():.2e}, "
      f"orthogonality defect {np.abs(Q.T @ Q - np.eye(3)).max():.1e}")
print(np.round(rotated, 4))

fails = 0
for seed in range(200):
    A = random_dn(4, 4, seed=seed, style=GRAM_NONNEG)
    B = sr_factor(A).B
    if small_orthant_rotation(B, seed=seed) is None:
        fails += 1
print(f"\n200 random full-rank 4x4 instances: {fails} rotation failures")
