"""Numerical verification of the Petersson norm of the Jacobi theta function."""
from .eisenstein import (ClosedFormParams, EisensteinParams, ResidueEstimate,
                         eisenstein_residue_formula, eisenstein_residue_numeric,
                         eisenstein_truncated, ip_closed, ip_direct,
                         norm_from_residue, residue_at_1)
from .modular import (CosetTable, CuspInfo, MoebiusMap, UniModMatrix,
                      coset_reps, cusp_data_gamma0_4, in_gamma0, index_gamma0,
                      moebius_apply, standard_domain_reduce)
from .numerics import LaurentData, compensated_sum, gamma, zeta, zeta_shifted_laurent
from .petersson import (NormReport, fricke_pointwise_check, index_scaling_check,
                        norm_direct, tail_correction, tile_integral)
from .quadrature import QuadratureSpec
from .theta import (f_invariant, fit_fourier_constant, theta_direct, theta_full,
                    x_average)

__version__ = "0.1.0"
