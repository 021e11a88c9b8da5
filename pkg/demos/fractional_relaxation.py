"""Pointwise relaxation: closed-form series against an independent time stepper.

The series solution sum_n c^n t^(rho n) E^(gamma n)_(alpha, rho n + 1)(-omega t^alpha)
with c = -lambda (1 - x) is compared with a first-order product-integration
solver of the equivalent Volterra equation. Halving dt halves the gap.
"""

from __future__ import annotations

import numpy as np

from sawi_prabhakar import Grid, HilferSpec, KernelSpec
from sawi_prabhakar.analytic_solutions import PointwiseSpec, solve_pointwise
from sawi_prabhakar.reference_solver import ScalarVolterraProblem, volterra_scalar_solve

hspec = HilferSpec(KernelSpec(0.8, 0.6, 0.4, 0.2), 1.0)
problem = PointwiseSpec(hspec, lambda_coef=1.0, x=0.3)
print(f"rate c = {problem.rate:.3f}, kernel {hspec.kernel}")

for t in (0.25, 1.0, 2.0):
    print(f"  series psi({t}) = {solve_pointwise(problem, t).real:.12f}")

previous = None
for dt in (1 / 128, 1 / 256, 1 / 512, 1 / 1024):
    grid = Grid.covering(2.0, dt)
    # the series uses the negated kernel base, so the stepper does too
    oracle = volterra_scalar_solve(ScalarVolterraProblem(problem.rate, HilferSpec(problem.kernel, 1.0)), grid)
    series = solve_pointwise(problem, grid.t)
    gap = np.abs(oracle.values - series).max()
    ratio = "" if previous is None else f"  ratio {previous / gap:.2f}"
    print(f"  dt = 1/{round(1 / dt):4d}  max gap = {gap:.2e}{ratio}")
    previous = gap
