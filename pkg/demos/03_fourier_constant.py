"""Measure the constant c in the horizontal average of |theta|^2.

The average over a period is 1 + c * sum exp(-4 pi n^2 y). A least-squares fit
on a few heights pins c to an integer.
"""
from theta_lab.theta import fit_fourier_constant, fourier_model, x_average

fit = fit_fourier_constant(full=True)
print("fitted c =", fit.c, " residual =", fit.residual)
for y in (0.05, 0.2, 0.5):
    print(f"y={y}: quadrature {x_average(y):.15f}   model c=4 {1 + 4 * fourier_model(y):.15f}")
