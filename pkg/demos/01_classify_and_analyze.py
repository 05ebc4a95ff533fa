"""Classify a matrix and run the full decision cascade.

A symmetric nonnegative matrix is doubly nonnegative (DN) when it is also
positive semidefinite; it is completely positive (CP) when it is the Gram
matrix of nonnegative vectors.  The analyzer tries to certify complete
positivity with as many rows as the rank, and falls back to exact bounds
or honest indecision.
"""

import numpy as np

from cprank import AnalysisConfig, analyze, classify_dn
from cprank.fixtures import example_matrix
from cprank.pipeline import write_report

A = example_matrix("EX2_7")
print("matrix:")
print(A.a)

verdict = classify_dn(A)
print(f"\nDN classification: {verdict.status}, rank {verdict.rank}")

report = analyze(A, AnalysisConfig(seed=0))
print(f"\nverdict: {report.verdict}")
print(f"cp-rank bounds: [{report.cp_rank_lower}, {report.cp_rank_upper}]")
print(f"certificate: {report.certificate.rows} rows via {report.certificate.method_tag}, "
      f"residual {report.certificate.residual:.2e}")
print("\nfactor rows (C with C^T C = A):")
print(np.round(report.certificate.C, 4))

print("\nfull text report:")
print(write_report(report, "text").decode())
