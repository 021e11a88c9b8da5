"""Heat flow with a Prabhakar time derivative, from the classical limit outward.

With alpha = rho = 1 and gamma = omega = 0 the solution is the familiar
spreading Gaussian. Fractional parameters slow the spreading; the series
solution is checked against a Fourier-mode Volterra stepper.
"""

from __future__ import annotations

import math

import numpy as np

from sawi_prabhakar import Grid, HilferSpec, KernelSpec
from sawi_prabhakar.analytic_solutions import HeatSpec, InitialProfile, solve_heat
from sawi_prabhakar.reference_solver import spectral_pde_oracle

g = InitialProfile.gaussian(1.0)
x = np.linspace(-3, 3, 7)

classical = HeatSpec(HilferSpec(KernelSpec(1.0, 1.0, 0.0, 0.0), 1.0), diffusivity=1.0)
for t in (0.25, 0.5):
    peak = solve_heat(classical, g, 0.0, t).real
    print(f"classical peak at t = {t}: {peak:.12f} (exact {1 / math.sqrt(1 + 2 * t):.12f})")

fractional = HeatSpec(HilferSpec(KernelSpec(0.9, 0.5, 0.3, -0.1), 1.0), diffusivity=1.0)
t = 1.0
series = solve_heat(fractional, g, x, t).real
oracle = spectral_pde_oracle(fractional, g, x, t, Grid.covering(t, 1 / 512)).real
print(f"\nfractional profile at t = {t}")
print("     x     series      oracle")
for xi, a, b in zip(x, series, oracle):
    print(f"  {xi:5.1f}  {a:.8f}  {b:.8f}")
print(f"max gap {np.abs(series - oracle).max():.2e}")
