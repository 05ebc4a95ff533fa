"""The geometry behind the row-sum certificate.

Any vector whose cosine with the all-ones direction reaches
sqrt((r-1)/r) is entrywise nonnegative, and that constant is sharp.
Aligning a well-placed pivot vector with the all-ones direction by a
Householder reflection therefore drags every Gram vector into the
nonnegative orthant at once; the row-sum condition checks exactly that
the pivot (the sum of all Gram vectors) works.
"""

import numpy as np

from cprank import (
    boundary_witness,
    e_cone_threshold,
    householder_align,
    in_e_cone,
    rowsum_condition,
    rowsum_factor,
)
from cprank.fixtures import example_matrix

r = 3
print(f"dimension {r}: cosine threshold = sqrt({r - 1}/{r}) = {e_cone_threshold(r):.6f}")

z = np.array([0.9, 0.8, 1.1])
print(f"z = {z} in the cone? {in_e_cone(z)}  (min entry {z.min()})")

w = boundary_witness(r, 0.99 * e_cone_threshold(r))
cos = w.sum() / (np.linalg.norm(w) * np.sqrt(r))
print(f"\njust below the threshold (cosine {cos:.6f}) a negative entry sneaks in:")
print(f"witness = {np.round(w, 6)}")

x = np.array([0.0, 0.0, 5.0])
plan = householder_align(x)
print(f"\nHouseholder alignment of {x}: Qx = {np.round(plan.Q @ x, 6)}")

A = example_matrix("EX2_8")
ok, data = rowsum_condition(A)
print(f"\n5x5 example: row sums {data.row_sums}, total {data.total}")
print(f"row-sum condition holds? {ok}")
cert = rowsum_factor(A)
print(f"certificate has {cert.rows} rows = rank, residual {cert.residual:.2e}")
print(np.round(cert.C, 4))
