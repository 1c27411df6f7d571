"""
Evaluating at t = -1
====================

For even n the substitution t -> -t swaps the two sign lifts, so the value
at -1 of one lift equals the value at 1 of the other.  The series at -1
also approaches the volume.
"""

from twv import Pipeline, SeriesConfig, SignAssignment, figure8
from twv.volume import corrected_ratio, estimator_from_log, minus_one_series

data = figure8()
pipe = Pipeline(data)
plus, minus = SignAssignment.parse("+"), SignAssignment.parse("-")

for n in (4, 10, 20):
    a = corrected_ratio(pipe, n, plus, -1)
    b = corrected_ratio(pipe, n, minus, 1)
    print(f"n={n}: log|A+(-1)| = {a.log_modulus:.12f}   log|A-(1)| = {b.log_modulus:.12f}")
    print(f"      estimator {estimator_from_log(n, a.log_modulus):.6f}")

print(minus_one_series(SeriesConfig(ns=list(range(10, 31, 4))), data).render())
