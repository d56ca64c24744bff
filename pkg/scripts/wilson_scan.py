"""S_2(x)/(x log x) and log-polynomial fits for the two-squares table.

Writes plot-ready CSV to stdout. Usage: python scripts/wilson_scan.py [x_max]
"""

import sys

from distenergy import analysis, repcount

x_max = int(sys.argv[1]) if len(sys.argv) > 1 else 10**7
T = repcount.sieve_sum_of_squares(2, x_max)
print("x,S2_over_xlogx")
for x, r in analysis.wilson_ratio(T, analysis.geometric_points(1000, x_max, 25)):
    print(f"{x},{r:.15g}")

lo = max(1000, x_max // 100)
print("\nk,smoothing,degree,residual,lower_residual,improvement")
for k in (2, 3, 4):
    for j in (0, 1, 2, 3):
        det = analysis.degree_detection(T, k, lo, x_max, 40, j)
        print(f"{k},{j},{det.degree},{det.fit.residual:.6g},{det.lower.residual:.6g},{det.improvement:.4g}")
