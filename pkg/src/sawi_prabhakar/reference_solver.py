"""Independent numerical oracle for the regularized problems, and residual checks.

Applying the Prabhakar integral with kernel ``(alpha, rho, gamma, omega)`` to
the regularized Hilfer-Prabhakar equation ``D psi = c psi`` gives the Volterra
equation

    psi(t) = psi(0) + c int_0^t e^gamma_{alpha,rho,omega}(t - tau) psi(tau) dtau,

which is stepped implicitly with piecewise-constant product integration.
That rule differs on purpose from the piecewise-linear rule of
:mod:`sawi_prabhakar.prabhakar_ops`, so the oracle and the operators do not
share their truncation errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .analytic_solutions import AdvDispSpec, HeatSpec, InitialProfile, ModeQuadrature
from .errors import InvalidOrder, SingularStep
from .ml_kernels import kernel_primitive
from .prabhakar_ops import Grid, Samples, hilfer_prabhakar_num, prabhakar_integral_num, reg_hilfer_prabhakar_num
from .specs import HilferSpec, KernelSpec

__all__ = [
    "ResidualReport",
    "ScalarVolterraProblem",
    "integro_oracle",
    "residual_check",
    "spectral_pde_oracle",
    "volterra_modes",
    "volterra_scalar_solve",
]

STEP_TOL = 1e-14


@dataclass(frozen=True)
class ScalarVolterraProblem:
    """``D psi = c psi`` with ``psi(0) = psi0`` for the regularized derivative."""

    c: complex
    hspec: HilferSpec
    psi0: complex = 1.0


@dataclass(frozen=True)
class ResidualReport:
    max_abs_residual: float
    node_of_max: int
    interior_range: tuple[int, int]
    residual: np.ndarray

    def __str__(self) -> str:
        lo, hi = self.interior_range
        return f"max |residual| = {self.max_abs_residual:.3e} at node {self.node_of_max} (nodes {lo}..{hi - 1})"


def _panel_weights(kernel: KernelSpec, grid: Grid) -> np.ndarray:
    """``W[m] = K1(m dt) - K1((m-1) dt)`` for ``m = 1 .. n-1``; ``W[0] = 0``."""
    K1 = np.asarray(kernel_primitive(kernel, grid.dt * np.arange(grid.n), 1), dtype=complex)
    W = np.zeros(grid.n, dtype=complex)
    W[1:] = np.diff(K1)
    return W


def _rectangle_integral(values: np.ndarray, kernel: KernelSpec, grid: Grid) -> np.ndarray:
    """Right-endpoint product integration, the oracle's rule for known integrands."""
    W = _panel_weights(kernel, grid)
    shifted = np.zeros(grid.n, dtype=complex)
    shifted[:-1] = values[1:]
    out = np.zeros(grid.n, dtype=complex)
    out[1:] = np.convolve(W[1:], shifted)[: grid.n - 1]
    return out


def volterra_modes(c, kernel: KernelSpec, psi0, grid: Grid, source: np.ndarray | None = None) -> np.ndarray:
    """Solve ``psi = psi0 + source + c I psi`` for many multipliers at once.

    Returns an array of shape ``(len(c), grid.n)``. Each row is stepped
    sequentially; rows are independent. ``source`` is a known function on
    the grid (shape ``(grid.n,)``), zero by default.
    """
    if kernel.rho <= 0:
        raise InvalidOrder(f"rho must be positive, got {kernel.rho!r}")
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    psi0 = np.broadcast_to(np.asarray(psi0, dtype=complex), c.shape)
    src = np.zeros(grid.n, dtype=complex) if source is None else np.asarray(source, dtype=complex)
    W = _panel_weights(kernel, grid)
    step = 1.0 - c * W[1]
    if np.any(np.abs(step) < STEP_TOL):
        raise SingularStep("1 - c w0 vanishes; refine the grid")
    psi = np.zeros((c.size, grid.n), dtype=complex)
    psi[:, 0] = psi0 + src[0]
    for j in range(1, grid.n):
        # panel [t_{i-1}, t_i] carries psi_i; the newest panel is implicit
        history = psi[:, 1:j] @ W[j:1:-1] if j > 1 else 0.0
        psi[:, j] = (psi0 + src[j] + c * history) / step
    return psi


def volterra_scalar_solve(prob: ScalarVolterraProblem, grid: Grid) -> Samples:
    """First-order implicit product-integration solution of one scalar problem."""
    values = volterra_modes(prob.c, prob.hspec.kernel, prob.psi0, grid)[0]
    return Samples(grid, values)


def integro_oracle(hspec: HilferSpec, lambda_coef: complex, delta: float, forcing: Samples,
                   psi0: complex = 0.0) -> Samples:
    """Regularized integro-differential problem ``D psi = lambda I^delta psi + y``, ``psi(0) = psi0``.

    Integrating once more turns it into ``psi = psi0 + I y + lambda I' psi``
    where ``I'`` has kernel ``(alpha, 2 rho, gamma + delta, omega)``.
    """
    grid = forcing.grid
    kernel = hspec.kernel
    source = _rectangle_integral(forcing.values, kernel, grid)
    doubled = kernel.with_(rho=2 * kernel.rho, gamma=kernel.gamma + delta)
    return Samples(grid, volterra_modes(lambda_coef, doubled, psi0, grid, source)[0])


def spectral_pde_oracle(problem: AdvDispSpec | HeatSpec, g: InitialProfile, x_grid, t: float, grid: Grid,
                        mq: ModeQuadrature | None = None) -> np.ndarray:
    """Fourier-mode Volterra solution of a regularized PDE problem at time ``t``.

    ``t`` must be a node of ``grid``. Modes use the trapezoid rule ``mq``
    (default: ``k_max = 8/sigma`` with 512 intervals).
    """
    if not problem.regularized:
        raise ValueError("the oracle covers regularized problems only")
    mq = mq or ModeQuadrature.for_profile(g, nodes=512)
    j = grid.index_of(t)
    k, w = mq.points()
    sub = Grid(grid.dt, max(j + 1, 2))
    modes = volterra_modes(problem.symbol(k), problem.hspec.kernel, 1.0, sub)[:, j]
    x_arr = np.asarray(x_grid, dtype=float)
    phase = np.exp(-1j * np.multiply.outer(x_arr.reshape(-1), k))
    return (phase @ (w * g.fourier_image(k) * modes)).reshape(x_arr.shape)


def residual_check(kind: Literal["hilfer_prabhakar", "reg_hilfer_prabhakar"], hspec: HilferSpec,
                   candidate: Samples, c: complex = 0.0, forcing: Samples | None = None,
                   integral_coef: complex = 0.0, integral_order: float | None = None,
                   interior_fraction: float = 0.05) -> ResidualReport:
    """Residual ``D psi - c psi - integral_coef I^delta psi - y`` on interior nodes.

    Parameters
    ----------
    kind
        Which derivative the equation uses.
    hspec
        Derivative parameters; the integral term, if any, uses the same
        ``(alpha, rho, omega)`` with ``gamma = integral_order`` (``delta``).
    candidate
        Proposed solution samples; may be singular at ``t = 0`` for the
        Hilfer-Prabhakar kind.
    c, forcing, integral_coef, integral_order
        Right-hand side ``c psi + integral_coef I^delta psi + y``.
    interior_fraction
        Leading share of nodes excluded from the maximum.
    """
    if not 0 <= interior_fraction <= 0.2:
        raise ValueError("interior_fraction must lie in [0, 0.2] so at least 80% of nodes are checked")
    grid = candidate.grid
    if kind == "hilfer_prabhakar":
        lhs = hilfer_prabhakar_num(candidate, hspec).values
    elif kind == "reg_hilfer_prabhakar":
        lhs = reg_hilfer_prabhakar_num(candidate, hspec).values
    else:
        raise ValueError(f"unknown derivative kind {kind!r}")
    rhs = c * candidate.values
    if forcing is not None:
        if forcing.grid != grid:
            raise ValueError("forcing and candidate grids differ")
        rhs = rhs + forcing.values
    if integral_coef != 0:
        if integral_order is None:
            raise ValueError("integral_order is required with integral_coef")
        integral = prabhakar_integral_num(candidate, hspec.kernel.with_(gamma=integral_order))
        rhs = rhs + integral_coef * integral.values
    res = lhs - rhs
    lo = max(1, int(math.ceil(interior_fraction * grid.n)))
    interior = np.abs(res[lo:])
    j = int(np.argmax(interior))
    return ResidualReport(float(interior[j]), lo + j, (lo, grid.n), res)
