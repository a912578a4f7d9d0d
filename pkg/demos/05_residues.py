"""Residues at s = 1: circle averages, Eisenstein residues and the norm they imply."""
from theta_lab.eisenstein import (eisenstein_residue_formula, eisenstein_residue_numeric,
                                  norm_from_residue, residue_at_1)
from theta_lab.numerics import zeta

print("Res zeta(2s-1) at s=1:", residue_at_1(lambda s: zeta(2 * s - 1)))
for N in (1, 4):
    est = eisenstein_residue_numeric(1.1j, N)
    print(f"N={N}: numeric {est.value:.5f} +- {est.error_bound:.1e}   formula {eisenstein_residue_formula(N):.5f}")
for p in (3, 5, 7):
    print(f"p={p}: norm from residue (c=4) = {norm_from_residue(p, 4.0):.12f}")
