"""Prabhakar fractional calculus through the Sawi transform.

Submodules
----------
ml_kernels
    Three-parameter Mittag-Leffler function and the Prabhakar kernel.
sawi_transform
    Numerical Sawi transform, its inverse and operator images.
sawi_algebra
    Exact atom algebra for Mittag-Leffler type images.
prabhakar_ops
    Grid discretizations of Prabhakar integrals and derivatives.
analytic_solutions
    Series solutions of the fractional Cauchy problems.
reference_solver
    Volterra time-stepping oracle and residual checks.
cli
    Command-line front end.
"""

from __future__ import annotations

from .errors import *  # noqa: F401,F403
from .ml_kernels import EvalResult, ml1, ml2, ml3, prabhakar_kernel
from .prabhakar_ops import (
    Grid,
    Samples,
    hilfer_prabhakar_num,
    prabhakar_derivative_num,
    prabhakar_integral_num,
    reg_hilfer_prabhakar_num,
    reg_prabhakar_derivative_num,
)
from .sawi_algebra import SawiAtom, geometric_expand, invert_atom
from .sawi_transform import inverse_sawi_numeric, sawi_forward_numeric, sawi_ml_image
from .specs import HilferSpec, KernelSpec

__version__ = "0.1.0"
