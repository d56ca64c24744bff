"""Normalised grid energies in dimensions 2-4 and the log-power comparison."""

from distenergy import analysis

for k, m, sides in [(2, 2, [128, 256, 512, 1024]), (3, 2, [128, 256, 512, 1024]),
                    (2, 3, [16, 32, 64, 128]), (2, 4, [8, 16, 32]), (3, 3, [16, 32, 64])]:
    sr = analysis.grid_energy_ratio_scan(k, m, sides)
    tag = " (exploratory)" if sr.exploratory else ""
    print(f"m={m} k={k} E_k / {sr.normalizer}{tag}: " + ", ".join(f"N={n}: {r:.5g}" for n, r in sr.points) + f"  spread {sr.spread:.4f}")

op = analysis.optimality_product(3, [16, 32, 64, 128])
print(f"m=3 d*E_2/N^4: spread {op.spread:.4f}")
print("k,predicted_degree,required_exponent,measured_slope")
for r in analysis.log_power_report([2, 3, 4], [64, 1024]):
    print(f"{r.k},{r.predicted},{r.required},{r.measured:.3f}")
