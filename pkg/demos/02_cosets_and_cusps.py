"""Coset representatives of Gamma_0(N) in SL2(Z) and the cusps of Gamma_0(4)."""
from theta_lab.modular import coset_reps, cusp_data_gamma0_4, index_gamma0

for N in (4, 12, 20, 28):
    print(f"[SL2(Z):Gamma_0({N})] = {index_gamma0(N)}")

table = coset_reps(4)
for label, rep in zip(table.labels, table.reps):
    print(label, (rep.a, rep.b, rep.c, rep.d))

for cusp in cusp_data_gamma0_4():
    print(cusp)
