"""Evaluate theta everywhere in the upper half-plane and watch the weight-1/2 law hold.

Near the real axis the direct series needs thousands of terms, so evaluation
first reduces the argument with the classical theta triple and tracks the
automorphy factor. The invariant F(z) = sqrt(Im z) |theta(z)|^2 is then checked
on random Gamma_0(4) images and under the Fricke involution.
"""
import numpy as np

from theta_lab.theta import f_invariant, reduce_theta_argument, theta_full
from theta_lab.checks import random_gamma0
from theta_lab.modular import fricke

print("theta(i)     =", theta_full(1j))
print("theta(i/4)   =", theta_full(0.25j))
z = 0.3 + 1e-3j
print("theta(0.3+0.001i) =", theta_full(z))
trace = reduce_theta_argument(2 * z)
print("  reduced to w =", trace.reduced_argument, "tag", trace.permutation_tag)

rng = np.random.default_rng(7)
for _ in range(5):
    g = random_gamma0(rng, 4)
    z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.2, 2.0))
    print(f"F(gz)/F(z) - 1 = {f_invariant(g(z)) / f_invariant(z) - 1:+.2e}   for c={g.c}, d={g.d}")

w = fricke(4)
z = 0.17 + 0.4j
print("Fricke: F(-1/4z)/F(z) - 1 =", f_invariant(w(z)) / f_invariant(z) - 1)
