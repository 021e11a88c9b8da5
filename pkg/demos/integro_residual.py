"""An integro-differential problem with a weighted initial value, checked by residual.

The equation D psi = lambda I^delta psi + exp(-t) uses the Hilfer-Prabhakar
derivative with nu = 0.5, so the solution is weakly singular at t = 0. No
time stepper handles that datum, so the candidate is judged by applying the
discretized operators to it and measuring what is left over.
"""

from __future__ import annotations

import numpy as np

from sawi_prabhakar import Grid, HilferSpec, KernelSpec, Samples
from sawi_prabhakar.analytic_solutions import IntegroSpec, solve_integro_grid
from sawi_prabhakar.reference_solver import integro_oracle, residual_check

hspec = HilferSpec(KernelSpec(0.7, 0.4, 0.2, -0.1), 0.5)
grid = Grid(1 / 512, 1025)
forcing = Samples.from_function(grid, lambda t: np.exp(-t))
rhs = dict(forcing=forcing, integral_coef=0.5, integral_order=0.3)

candidate = solve_integro_grid(IntegroSpec(hspec, 0.5, 0.3, 1.0, forcing))
print(f"solution behaves like {candidate.values[0].real:.4f} t^{candidate.origin_power:.2f} near the origin")
for j in (64, 256, 1024):
    print(f"  psi({grid.t[j]:.3f}) = {candidate.values[j].real:.10f}")

report = residual_check("hilfer_prabhakar", hspec, candidate, 0.0, **rhs)
print(f"\ncandidate residual: {report}")

# calibration: the same operators applied to a stepped solution of the regularized problem
oracle = integro_oracle(hspec, 0.5, 0.3, forcing, psi0=1.0)
calibration = residual_check("reg_hilfer_prabhakar", hspec, oracle, 0.0, **rhs)
print(f"oracle residual:    {calibration}")
