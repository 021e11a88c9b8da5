"""A short tour of the three-parameter Mittag-Leffler evaluator.

Run with ``python3 demos/mittag_leffler_tour.py``.
"""

from __future__ import annotations

import math

import numpy as np

from sawi_prabhakar import ml1, ml2, ml3

print("E_{1,1}(z) is the exponential:")
for z in (-2.0, 0.5, 3.0):
    r = ml2(1.0, 1.0, z)
    print(f"  z = {z:5.2f}  E = {r.value.real:.15f}  exp = {math.exp(z):.15f}  est_error = {r.est_error:.1e}")

print("\nHalf order gives a scaled complementary error function, E_{1/2}(-x) = exp(x^2) erfc(x):")
for x in (0.5, 1.0, 2.0):
    print(f"  x = {x:3.1f}  E = {ml1(0.5, -x).value.real:.15f}  closed form = {math.exp(x * x) * math.erfc(x):.15f}")

print("\ngamma = 0 collapses the series to its first term 1/Gamma(rho):")
print(f"  E^0_(0.7, 1.3)(-4) = {ml3(0.7, 1.3, 0.0, -4.0).value.real:.15f}   1/Gamma(1.3) = {1 / math.gamma(1.3):.15f}")

print("\nVectorized evaluation over a grid of arguments, with per-point error bounds:")
z = np.linspace(-5, 5, 5)
r = ml3(0.8, 0.6, 0.5, z)
for zi, v, e in zip(z, r.value, r.est_error):
    print(f"  z = {zi:5.2f}  E^0.5_(0.8, 0.6)(z) = {v.real: .12e}  bound = {e:.1e}")
print(f"  terms used: {r.terms_used}")
