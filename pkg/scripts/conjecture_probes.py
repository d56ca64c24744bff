"""Probes for the open energy conjectures; nothing here is asserted.

- dimension 3: E_2 / N^(10/3) for grids against random sets of similar size
- planar moments: Z_{Q,k}(s) - Z_{hex,k}(s) at covolume one for k = 1, 2, 3
"""

from distenergy import analysis, geometry, lattice, zeta

sets = [(f"grid{s}", geometry.make_square_grid(3, s)) for s in (5, 8, 12)]
sets += [(f"random{n}", geometry.random_point_set(n, 3, 1, 40, seed=0)) for n in (125, 512)]
print("label,N,E_2,ratio")
for r in analysis.conjecture44_report(sets, 3):
    print(f"{r.label},{r.N},{r.energy},{r.ratio:.6g}")

forms = [lattice.BinaryForm(*abc) for abc in [(1, 0, 1), (1, 1, 2), (1, 0, 2), (2, 1, 3), (1, 0, 3)]]
print("\nform,k,s,value,hexagonal,difference")
for k, ss in ((1, [0.8, 1.5, 2, 3]), (2, [2, 3]), (3, [2.5, 3])):
    for r in zeta.conjecture_probe(forms, k, ss, x_max=10**6):
        print("{},{},{},{:.10g},{:.10g},{:+.4g}".format("/".join(map(str, r.form.abc)), k, r.s, r.value, r.hexagonal, r.difference))
