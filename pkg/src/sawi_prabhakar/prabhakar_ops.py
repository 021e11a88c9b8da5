"""Prabhakar integral and derivatives on uniform time grids.

Integrals use product integration: the density is interpolated piecewise
linearly and integrated exactly against the kernel, whose first and second
primitives are Mittag-Leffler functions with ``rho`` raised by one and two.
Derivatives use second-order central differences applied after the
integral. In the regularized forms ``I f'`` is computed as ``d/dt I (f - f(0))``,
and in the others the constant ``f(0)`` is split off and its exact image
``t**-rho E^-gamma_{alpha,1-rho}(omega t**alpha)`` added back, so no
difference quotient ever meets the algebraic singularity at the origin.

A :class:`Samples` object may carry an algebraic singularity at the origin,
``f(t) = t**origin_power * phi(t)`` with ``phi`` continuous. On the first
128 panels integrals of such samples interpolate ``phi`` and integrate
``kernel * t**origin_power`` exactly, through a series of incomplete Beta
functions; further out ``f`` itself is smooth enough for the regular rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import betainc, gamma as gamma_fn, rgamma

from .errors import GridTooCoarse, InvalidOrder
from .ml_kernels import kernel_primitive, ml3
from .specs import HilferSpec, KernelSpec

__all__ = [
    "Grid",
    "Samples",
    "hilfer_prabhakar_num",
    "prabhakar_derivative_num",
    "prabhakar_integral_num",
    "reg_hilfer_prabhakar_num",
    "reg_prabhakar_derivative_num",
    "toeplitz_weights",
]

ZERO_ORDER_TOL = 1e-12
SINGULAR_PANELS = 128


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``t_j = j dt``, ``j = 0 .. n-1``."""

    dt: float
    n: int

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.n < 2:
            raise GridTooCoarse(f"a grid needs at least two nodes, got {self.n}")

    @classmethod
    def covering(cls, t_end: float, dt: float) -> Grid:
        """Smallest grid with step ``dt`` whose last node is at or beyond ``t_end``."""
        return cls(dt, int(math.ceil(t_end / dt - 1e-9)) + 1)

    @property
    def t(self) -> np.ndarray:
        return self.dt * np.arange(self.n)

    @property
    def t_end(self) -> float:
        return self.dt * (self.n - 1)

    def index_of(self, t: float) -> int:
        j = int(round(t / self.dt))
        if not 0 <= j < self.n or abs(j * self.dt - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"t={t} is not a node of {self}")
        return j


@dataclass(frozen=True, eq=False)
class Samples:
    """Function values on a :class:`Grid`.

    ``values[j]`` is ``f(t_j)`` for ``j >= 1``. With ``origin_power == 0``
    ``values[0]`` is ``f(0)``; otherwise ``f(t) = t**origin_power * phi(t)``
    near zero and ``values[0]`` holds ``phi(0)``.
    """

    grid: Grid
    values: np.ndarray
    origin_power: float = 0.0

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {vals.shape}")
        if self.origin_power <= -1.0:
            raise ValueError("origin_power must exceed -1 for an integrable function")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, f: Callable, origin_power: float = 0.0,
                      origin_coefficient: complex | None = None) -> Samples:
        """Sample ``f`` on ``grid``.

        For a singular ``f`` pass ``origin_power`` and the limit
        ``origin_coefficient = lim t**(-origin_power) f(t)``.
        """
        t = grid.t
        vals = np.empty(grid.n, dtype=complex)
        vals[1:] = np.asarray(f(t[1:]), dtype=complex)
        if origin_power == 0.0:
            vals[0] = complex(np.asarray(f(t[:1]), dtype=complex)[0])
        else:
            if origin_coefficient is None:
                raise ValueError("singular samples need origin_coefficient")
            vals[0] = origin_coefficient
        return cls(grid, vals, origin_power)

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    @property
    def phi(self) -> np.ndarray:
        """Regular factor ``t**(-origin_power) f(t)`` at the nodes."""
        if self.origin_power == 0.0:
            return self.values
        out = self.values.copy()
        out[1:] = self.values[1:] / self.t[1:] ** self.origin_power
        return out

    def as_function(self, outside: complex = 0.0) -> Callable[[np.ndarray], np.ndarray]:
        """Interpolant of the samples; ``outside`` is returned beyond the last node."""
        t_nodes, phi, sigma = self.t, self.phi, self.origin_power

        def f(t):
            t = np.asarray(t, dtype=float)
            out = np.interp(t, t_nodes, phi.real) + 1j * np.interp(t, t_nodes, phi.imag)
            if sigma != 0.0:
                with np.errstate(divide="ignore"):
                    out = out * np.where(t > 0, t, np.inf) ** sigma
            return np.where(t <= t_nodes[-1], out, outside)

        return f

    def __add__(self, other: Samples) -> Samples:
        if self.grid != other.grid or self.origin_power != other.origin_power:
            raise ValueError("samples live on different grids or singular classes")
        return Samples(self.grid, self.values + other.values, self.origin_power)

    def __sub__(self, other: Samples) -> Samples:
        return self + other.scaled(-1.0)

    def scaled(self, c: complex) -> Samples:
        return Samples(self.grid, c * self.values, self.origin_power)


def toeplitz_weights(spec: KernelSpec, grid: Grid, extra: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """First and second kernel primitives at ``m dt``, ``m = 0 .. n-1+extra``."""
    u = grid.dt * np.arange(grid.n + extra)
    K1 = np.asarray(kernel_primitive(spec, u, 1), dtype=complex)
    K2 = np.asarray(kernel_primitive(spec, u, 2), dtype=complex)
    return K1, K2


def _is_zero_order(beta: float) -> bool:
    return abs(beta) < ZERO_ORDER_TOL


def _toeplitz_sums(values: np.ndarray, spec: KernelSpec, grid: Grid, first_panel: int = 0) -> np.ndarray:
    """Piecewise-linear product integration over panels ``first_panel .. j-1``."""
    n, dt = grid.n, grid.dt
    K1, K2 = toeplitz_weights(spec, grid, extra=1)
    dK2 = np.diff(K2) / dt  # dK2[m-1] = (K2(m dt) - K2((m-1) dt)) / dt
    # panel with lag m: weight A on the older node, B on the newer one
    A = np.zeros(n, dtype=complex)
    A[1:] = K1[1:n] - dK2[: n - 1]
    C = dK2[:n] - K1[:n]  # C[q] = B_{q+1}
    older = values.astype(complex)
    older[:first_panel] = 0.0
    newer = values.astype(complex)
    newer[: first_panel + 1] = 0.0
    return np.convolve(A, older)[:n] + np.convolve(C, newer)[:n]


def _integral_regular(f: Samples, spec: KernelSpec) -> np.ndarray:
    return _toeplitz_sums(f.values, spec, f.grid)


def _weighted_series_terms(spec: KernelSpec, q: float, t_max: float, tol: float = 1e-17):
    """Coefficients ``(gamma)_k/k! omega^k Gamma(q)/Gamma(alpha k + rho + q)`` while significant."""
    a, b, g, w = spec.alpha, spec.rho, spec.gamma, complex(spec.omega)
    terms = []
    ratio, peak, small = 1.0, 0.0, 0
    for k in range(400):
        p = a * k + b
        coef = ratio * w**k * gamma_fn(q) * rgamma(p + q)
        size = abs(coef) * t_max ** (p + q - 1)
        terms.append((p, coef))
        peak = max(peak, size)
        small = small + 1 if size <= tol * peak else 0
        if small >= 3 or (ratio == 0.0 and k > 0):
            break
        ratio *= (g + k) / (k + 1)
    return terms


def _integral_weighted(f: Samples, spec: KernelSpec) -> np.ndarray:
    """Singular-weight panels near the origin, regular Toeplitz panels beyond."""
    grid, n, dt = f.grid, f.grid.n, f.grid.dt
    sigma = f.origin_power
    m = min(SINGULAR_PANELS, n - 1)
    t = grid.t
    tj = t[1:, None]
    x = np.clip(t[None, : m + 1] / tj, 0.0, 1.0)  # rows j = 1..n-1, cols i = 0..m
    mask = np.arange(m)[None, :] < np.arange(1, n)[:, None]  # panel i exists for i < j
    moments = []
    for order in (0, 1):
        q = sigma + 1.0 + order
        acc = np.zeros((n - 1, m), dtype=complex)
        for p, coef in _weighted_series_terms(spec, q, t[-1]):
            d_inc = np.diff(betainc(q, p, x), axis=1)
            acc += coef * tj ** (p + q - 1.0) * d_inc
        moments.append(np.where(mask, acc, 0.0))
    M0, M1 = moments
    slope = (M1 - t[None, :m] * M0) / dt
    phi = f.phi
    out = np.zeros(n, dtype=complex)
    out[1:] = (M0 - slope) @ phi[:m] + slope @ phi[1 : m + 1]
    if m < n - 1:
        out += _toeplitz_sums(f.values, spec, grid, first_panel=m)
    return out


def prabhakar_integral_num(f: Samples, spec: KernelSpec) -> Samples:
    """Product-integration Prabhakar integral ``int_0^t e^gamma_{alpha,rho,omega}(t - tau) f(tau) dtau``.

    A zero ``rho`` is the identity map. Singular input samples are integrated
    with exact singular weights; the result is singular again only when
    ``rho + origin_power < 0``, and its node-zero entry then holds the leading
    coefficient (or, for ``rho + origin_power == 0``, the right limit).
    """
    beta = spec.rho
    if _is_zero_order(beta):
        return f
    if beta < 0:
        raise InvalidOrder(f"Prabhakar integral needs rho >= 0, got {beta!r}")
    sigma = f.origin_power
    if sigma == 0.0:
        return Samples(f.grid, _integral_regular(f, spec))
    vals = _integral_weighted(f, spec)
    phi0 = f.values[0]
    total = beta + sigma
    if abs(total) < ZERO_ORDER_TOL:
        vals[0] = phi0 * gamma_fn(sigma + 1.0)
        return Samples(f.grid, vals)
    if total > 0:
        vals[0] = 0.0
        return Samples(f.grid, vals)
    vals[0] = phi0 * gamma_fn(sigma + 1.0) * rgamma(total + 1.0)
    return Samples(f.grid, vals, total)


def _node_derivative(values: np.ndarray, dt: float, k: int) -> np.ndarray:
    out = np.asarray(values, dtype=complex)
    for _ in range(k):
        out = np.gradient(out, dt, edge_order=2)
    return out


def _require_regular(f: Samples, what: str) -> None:
    if f.origin_power != 0.0:
        raise ValueError(f"{what} needs samples that are finite at t = 0")


def _integral_of_derivative(f: Samples, spec: KernelSpec) -> Samples:
    """Prabhakar integral of ``f'``, evaluated as ``d/dt`` of the integral of ``f - f(0)``."""
    _require_regular(f, "differentiation under the integral")
    shifted = Samples(f.grid, f.values - f.values[0])
    inner = prabhakar_integral_num(shifted, spec)
    return Samples(f.grid, _node_derivative(inner.values, f.grid.dt, 1))


def _with_constant(regular: Samples, f0: complex, spec: KernelSpec) -> Samples:
    """Add ``f0 t**-rho E^-gamma_{alpha,1-rho}(omega t**alpha)``, the derivative of the constant ``f0``."""
    if f0 == 0:
        return regular
    t = regular.grid.t[1:]
    a, rho = spec.alpha, spec.rho
    vals = np.array(regular.values, dtype=complex)
    vals[1:] += f0 * t**-rho * ml3(a, 1 - rho, -spec.gamma, spec.omega * t**a).value
    vals[0] = f0 * rgamma(1 - rho)
    return Samples(regular.grid, vals, -rho)


def _check_integer_order(spec: KernelSpec, k: int) -> None:
    if spec.rho <= 0:
        raise InvalidOrder(f"derivative order rho must be positive, got {spec.rho!r}")
    if k != math.ceil(spec.rho - ZERO_ORDER_TOL):
        raise InvalidOrder(f"k must equal ceil(rho) = {math.ceil(spec.rho)}, got {k}")


def prabhakar_derivative_num(f: Samples, spec: KernelSpec, k: int) -> Samples:
    """``d^k/dt^k`` of the Prabhakar integral with kernel ``(alpha, k - rho, -gamma, omega)``.

    The output is singular at the origin (``origin_power = -rho``) when
    ``f(0) != 0`` and ``rho`` is not an integer.
    """
    _check_integer_order(spec, k)
    if f.grid.n < k + 2:
        raise GridTooCoarse(f"need at least {k + 2} nodes for a order-{k} stencil")
    inner_spec = spec.with_(rho=k - spec.rho, gamma=-spec.gamma)
    if f.origin_power != 0.0 or _is_zero_order(inner_spec.rho):
        inner = prabhakar_integral_num(f, inner_spec)
        _require_regular(inner, "the outer derivative")
        return Samples(f.grid, _node_derivative(inner.values, f.grid.dt, k))
    f0 = f.values[0]
    inner = prabhakar_integral_num(Samples(f.grid, f.values - f0), inner_spec)
    return _with_constant(Samples(f.grid, _node_derivative(inner.values, f.grid.dt, k)), f0, spec)


def reg_prabhakar_derivative_num(f: Samples, spec: KernelSpec, k: int) -> Samples:
    """Prabhakar integral with kernel ``(alpha, k - rho, -gamma, omega)`` of ``f^(k)``.

    Derivatives below order ``k`` (``k >= 2``) are central differences.
    """
    _check_integer_order(spec, k)
    if f.grid.n < k + 2:
        raise GridTooCoarse(f"need at least {k + 2} nodes for a order-{k} stencil")
    _require_regular(f, "the regularized derivative")
    beta = k - spec.rho
    if _is_zero_order(beta):
        return Samples(f.grid, _node_derivative(f.values, f.grid.dt, k))
    g = Samples(f.grid, _node_derivative(f.values, f.grid.dt, k - 1))
    return _integral_of_derivative(g, spec.with_(rho=beta, gamma=-spec.gamma))


def hilfer_prabhakar_num(f: Samples, hspec: HilferSpec) -> Samples:
    """Hilfer-Prabhakar derivative: outer integral of the derivative of an inner integral.

    Inner kernel ``(alpha, (1-nu)(1-rho), -gamma(1-nu), omega)``, outer kernel
    ``(alpha, nu(1-rho), -gamma nu, omega)``. The inner integral ``h`` usually
    has a singular derivative at zero (``h - h(0+) ~ t**rho``), so the outer
    stage is evaluated as ``d/dt`` of the outer integral of ``h - h(0+)``,
    which equals the outer integral of ``h'`` and keeps second-order accuracy
    away from the origin. For finite samples the constant ``f(0)`` is handled
    exactly; the output is then singular like ``t**-rho`` unless ``nu = 1``.
    """
    a, rho, g, w, nu = hspec.alpha, hspec.rho, hspec.gamma, hspec.omega, hspec.nu
    if f.grid.n < 3:
        raise GridTooCoarse("need at least three nodes")
    inner_spec = KernelSpec(a, (1 - nu) * (1 - rho), -g * (1 - nu), w)
    outer_spec = KernelSpec(a, nu * (1 - rho), -g * nu, w)
    f0 = 0.0
    if f.origin_power == 0.0 and not _is_zero_order(inner_spec.rho):
        f0 = f.values[0]
        f = Samples(f.grid, f.values - f0)
    inner = prabhakar_integral_num(f, inner_spec)
    _require_regular(inner, "the Hilfer-Prabhakar derivative")
    if _is_zero_order(outer_spec.rho):
        out = Samples(f.grid, _node_derivative(inner.values, f.grid.dt, 1))
    else:
        shifted = Samples(f.grid, inner.values - inner.values[0])
        outer = prabhakar_integral_num(shifted, outer_spec)
        out = Samples(f.grid, _node_derivative(outer.values, f.grid.dt, 1))
    return _with_constant(out, f0, hspec.kernel)


def reg_hilfer_prabhakar_num(f: Samples, hspec: HilferSpec) -> Samples:
    """Regularized Hilfer-Prabhakar derivative; independent of ``nu``."""
    _require_regular(f, "the regularized Hilfer-Prabhakar derivative")
    spec = KernelSpec(hspec.alpha, 1 - hspec.rho, -hspec.gamma, hspec.omega)
    if _is_zero_order(spec.rho):
        return Samples(f.grid, _node_derivative(f.values, f.grid.dt, 1))
    return _integral_of_derivative(f, spec)
