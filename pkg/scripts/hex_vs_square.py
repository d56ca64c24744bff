"""E_{D,2}(N)/(N log N) over N for the norm-form lattices, hexagonal first.

Usage: python scripts/hex_vs_square.py [N_max]
"""

import math
import sys

from distenergy import lattice

N_max = int(sys.argv[1]) if len(sys.argv) > 1 else 10**6
Ds = [-3, -1, -7, -15, -11, -5, -2, -10]
print("N," + ",".join(f"D{D}" for D in Ds) + ",hexagonal_max")
N = 1000
while N <= N_max:
    rk = lattice.compare_lattices(Ds, 2, N)
    norm = N * math.log(N)
    vals = ",".join(f"{rk.energy(D) / norm:.6f}" for D in Ds)
    print(f"{N},{vals},{rk.flags['hexagonal strictly maximal']}")
    N *= 10
