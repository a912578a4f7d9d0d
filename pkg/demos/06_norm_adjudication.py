"""Compute the Petersson norm of theta on Gamma_0(4) by tiling and compare routes."""
import math

from theta_lab.petersson import index_scaling_check, norm_direct, fricke_pointwise_check
from theta_lab.quadrature import QuadratureSpec

rep = norm_direct(QuadratureSpec(Y=100.0))
for label, v in zip(rep.tile_labels, rep.tile_values):
    print(label, v)
print("total =", rep.total, " ratio to pi =", rep.ratio_to_pi, " error ~", rep.error_estimate)
print("2 pi  =", 2 * math.pi)
print("Fricke pointwise check at p=3:", fricke_pointwise_check(3, 0.2 + 0.7j))
print("index scaling Gamma_0(12)/Gamma_0(4):", index_scaling_check(3))
