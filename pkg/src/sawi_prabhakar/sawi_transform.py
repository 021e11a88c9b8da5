"""Sawi transform: numerical forward transform, closed-form images, numerical inverse.

The Sawi transform of ``psi`` is

    T(s) = (1/s^2) int_0^inf psi(t) exp(-t/s) dt = (1/s) int_0^inf exp(-x) psi(s x) dx,

so it is tied to the Laplace transform by ``T(s) = L[psi](1/s) / s^2``. The
numerical inverse uses that bridge and a fixed-Talbot contour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.special import roots_genlaguerre, roots_laguerre

from .errors import ArityMismatch, ContourFailure, InvalidOrder, OutOfRegion, QuadratureFailure
from .specs import HilferSpec, KernelSpec

__all__ = [
    "InitialData",
    "QuadratureSpec",
    "TalbotSpec",
    "TransformPoint",
    "inverse_sawi_numeric",
    "laguerre_nodes",
    "operator_image",
    "power_factor",
    "sawi_forward_numeric",
    "sawi_mth_derivative_image",
    "sawi_ml_image",
    "tabulate_sawi",
    "talbot_inverse_laplace",
]

OperatorKind = Literal["prabhakar", "reg_prabhakar", "hilfer_prabhakar", "reg_hilfer_prabhakar"]


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature rule for ``int_0^inf exp(-x) g(x) dx``.

    ``rule="laguerre"`` is plain (generalized, if ``weight_power != 0``)
    Gauss-Laguerre with ``nodes`` points. It converges only algebraically
    when ``g`` has a fractional power at the origin.

    ``rule="split"`` (default) applies a tanh-sinh rule with step
    ``head_step`` on ``[0, head_width]`` and ``nodes``-point Gauss-Laguerre on
    the shifted tail ``[head_width, inf)``. The double-exponential head absorbs
    algebraic endpoint singularities of any order above -1.
    """

    nodes: int = 64
    rule: Literal["laguerre", "split"] = "split"
    weight_power: float = 0.0
    head_width: float = 1.0
    head_step: float = 0.15
    head_range: tuple[float, float] = (-6.0, 3.5)

    def __post_init__(self) -> None:
        if self.rule not in ("laguerre", "split"):
            raise ValueError(f"unknown quadrature rule {self.rule!r}")
        if self.nodes < 1:
            raise QuadratureFailure(f"node count must be positive, got {self.nodes}")
        if self.rule == "split" and self.weight_power != 0.0:
            raise ValueError("weight_power is only meaningful for rule='laguerre'")
        if self.weight_power <= -1.0:
            raise QuadratureFailure("weight_power must exceed -1")


@dataclass(frozen=True)
class TalbotSpec:
    """Fixed-Talbot contour with ``nodes`` points and scale ``2 nodes / (5 t)``."""

    nodes: int = 32

    def __post_init__(self) -> None:
        if self.nodes < 2:
            raise ValueError("Talbot rule needs at least two nodes")


@dataclass(frozen=True)
class TransformPoint:
    s: float
    value: complex


@dataclass(frozen=True)
class InitialData:
    """Initial values entering the derivative and operator images.

    ``derivative_values[k]`` is the k-th initial value (plain derivatives, or
    the initial operator values for the Prabhakar-derivative image).
    ``weighted_value`` is the weighted initial datum of the Hilfer-type image.
    """

    derivative_values: tuple[complex, ...] = ()
    weighted_value: complex | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "derivative_values", tuple(self.derivative_values))


def _readonly(*arrays: np.ndarray) -> tuple[np.ndarray, ...]:
    for a in arrays:
        a.setflags(write=False)
    return arrays


@lru_cache(maxsize=64)
def laguerre_nodes(spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``x`` and weights ``w`` with ``sum w g(x) ~ int_0^inf exp(-x) g(x) dx``.

    For ``rule="laguerre"`` with ``weight_power = a`` the weights already
    include ``x**a``: the caller still passes the full integrand ``g``.
    Tables are cached and returned read-only.
    """
    try:
        if spec.rule == "laguerre":
            if spec.weight_power == 0.0:
                x, w = roots_laguerre(spec.nodes)
            else:
                x, w = roots_genlaguerre(spec.nodes, spec.weight_power)
                w = w / x**spec.weight_power
        else:
            a = spec.head_width
            lo, hi = spec.head_range
            tau = np.arange(lo, hi + 0.5 * spec.head_step, spec.head_step)
            u = 0.5 * np.pi * np.sinh(tau)
            x_head = a / (1.0 + np.exp(-2.0 * u))
            w_head = spec.head_step * 0.25 * np.pi * a * np.cosh(tau) / np.cosh(u) ** 2
            w_head = w_head * np.exp(-x_head)
            xl, wl = roots_laguerre(spec.nodes)
            x = np.concatenate([x_head, xl + a])
            w = np.concatenate([w_head, wl * math.exp(-a)])
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        raise QuadratureFailure(f"node generation failed for {spec}: {exc}") from exc
    keep = w > 0
    x, w = np.asarray(x[keep], dtype=float), np.asarray(w[keep], dtype=float)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))) or x.size == 0:
        raise QuadratureFailure(f"non-finite quadrature table for {spec}")
    return _readonly(x, w)


def _call_vectorized(f: Callable, arg: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(f(arg), dtype=complex)
    except (TypeError, ValueError):
        out = None
    if out is None or out.shape[:1] != arg.shape[:1]:
        out = np.array([complex(f(a)) for a in arg])
    return out


def sawi_forward_numeric(f: Callable, s: float, quad: QuadratureSpec = QuadratureSpec(),
                         interval: tuple[float, float] | None = None) -> complex:
    """Sawi transform ``(1/s) int_0^inf exp(-x) f(s x) dx`` by quadrature.

    ``f`` should accept an array of times; scalar-only callables are looped.
    ``interval`` is the caller-declared validity interval ``(lambda1, lambda2)``.
    """
    if not s > 0:
        raise ValueError(f"s must be positive, got {s!r}")
    if interval is not None and not interval[0] < s < interval[1]:
        raise OutOfRegion(f"s={s} outside declared interval {interval}")
    x, w = laguerre_nodes(quad)
    vals = _call_vectorized(f, s * x)
    if not np.all(np.isfinite(vals)):
        raise QuadratureFailure("integrand is not finite at some node")
    return complex(np.dot(w, vals) / s)


def tabulate_sawi(f: Callable, s_values: Sequence[float], quad: QuadratureSpec = QuadratureSpec(),
                  interval: tuple[float, float] | None = None) -> list[TransformPoint]:
    return [TransformPoint(float(s), sawi_forward_numeric(f, s, quad, interval)) for s in s_values]


def power_factor(omega: complex, alpha: float, s, exponent: float):
    """``(1 - omega s**alpha) ** exponent`` on the principal branch.

    With real ``omega`` and real ``s > 0`` the base must be positive and the
    real power is used; anything complex goes through the principal complex
    power.
    """
    s_arr = np.asarray(s)
    omega = complex(omega)
    if omega.imag == 0.0 and np.isrealobj(s_arr):
        base = 1.0 - omega.real * s_arr.astype(float) ** alpha
        if np.any(base <= 0):
            raise OutOfRegion("1 - omega s^alpha <= 0 on the real branch")
        return base**exponent
    base = 1.0 - omega * s_arr.astype(complex) ** alpha
    return base**exponent


def _region_check(omega: complex, alpha: float, s) -> None:
    if np.any(np.abs(omega * np.asarray(s, dtype=complex) ** alpha) >= 1.0):
        raise OutOfRegion("|omega s^alpha| >= 1")


def sawi_ml_image(spec: KernelSpec, s):
    """Closed-form Sawi image ``s**(rho-2) (1 - omega s**alpha)**(-gamma)`` of the kernel.

    Valid for ``|omega s**alpha| < 1``; ``s`` may be complex (used by the
    numerical inverse).
    """
    _region_check(spec.omega, spec.alpha, s)
    s_arr = np.asarray(s)
    if np.isrealobj(s_arr) and np.any(s_arr <= 0):
        raise ValueError("real s must be positive")
    sp = s_arr if not np.isrealobj(s_arr) else s_arr.astype(float)
    out = np.asarray(sp ** (spec.rho - 2.0) * power_factor(spec.omega, spec.alpha, s_arr, -spec.gamma),
                     dtype=complex)
    return complex(out) if out.ndim == 0 else out


def sawi_mth_derivative_image(T_at_s: complex, init: InitialData, m: int, s: float) -> complex:
    """Image of the m-th derivative: ``s**-m T - sum_k s**(k-m-1) psi^(k)(0)``."""
    vals = init.derivative_values
    if m < 1 or len(vals) != m:
        raise ArityMismatch(f"expected {m} initial values, got {len(vals)}")
    out = s ** (-m) * complex(T_at_s)
    for k, v in enumerate(vals):
        out -= s ** (k - m - 1) * complex(v)
    return complex(out)


def operator_image(kind: OperatorKind, T_at_s: complex, spec: HilferSpec | KernelSpec,
                   init: InitialData, m: int, s: float) -> complex:
    """Closed-form Sawi image of one of the four Prabhakar-type derivatives.

    Parameters
    ----------
    kind
        ``"prabhakar"``, ``"reg_prabhakar"``, ``"hilfer_prabhakar"`` or
        ``"reg_hilfer_prabhakar"``.
    T_at_s
        Sawi image of the function at ``s``.
    spec
        Kernel parameters. Hilfer kinds need a :class:`HilferSpec`; the
        Prabhakar kinds accept either.
    init
        ``prabhakar``: ``m`` initial operator values. ``reg_prabhakar``: ``m``
        initial derivatives. ``hilfer_prabhakar``: ``weighted_value``.
        ``reg_hilfer_prabhakar``: one value, ``psi(0+)``.
    m
        Integer order ``ceil(rho)`` (1 for the Hilfer kinds).
    """
    kernel = spec.kernel if isinstance(spec, HilferSpec) else spec
    a, rho, g, w = kernel.alpha, kernel.rho, kernel.gamma, kernel.omega
    _region_check(w, a, s)
    base = power_factor(w, a, s, 1.0)
    lead = s ** (-rho) * base**g * complex(T_at_s)
    vals = init.derivative_values

    if kind in ("prabhakar", "reg_prabhakar"):
        if m < 1 or len(vals) != m:
            raise ArityMismatch(f"{kind} needs {m} initial values, got {len(vals)}")
        out = lead
        for k, v in enumerate(vals):
            if kind == "prabhakar":
                out -= s ** (k - m - 1) * complex(v)
            else:
                out -= s ** (k - rho - 1) * base**g * complex(v)
        return complex(out)

    if not isinstance(spec, HilferSpec):
        raise InvalidOrder(f"{kind} needs a HilferSpec (nu is required)")
    nu = spec.nu
    if kind == "hilfer_prabhakar":
        if init.weighted_value is None:
            raise ArityMismatch("hilfer_prabhakar needs the weighted initial value")
        return complex(lead - s ** (nu * (1 - rho) - 2) * base ** (g * nu) * complex(init.weighted_value))
    if kind == "reg_hilfer_prabhakar":
        if len(vals) != 1:
            raise ArityMismatch(f"reg_hilfer_prabhakar needs psi(0+) only, got {len(vals)} values")
        return complex(lead - s ** (-rho - 1) * base**g * complex(vals[0]))
    raise ValueError(f"unknown operator kind {kind!r}")


@lru_cache(maxsize=16)
def _talbot_table(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(1, nodes)
    theta = np.pi * k / nodes
    cot = 1.0 / np.tan(theta)
    shape = theta * (cot + 1j)  # node position divided by r
    sigma = theta + (theta * cot - 1.0) * cot
    z = np.concatenate([[1.0 + 0j], shape, np.conj(shape)])
    d = np.concatenate([[1.0 + 0j], 1.0 + 1j * sigma, 1.0 - 1j * sigma])
    return _readonly(z, d)


def talbot_inverse_laplace(F: Callable, t: float, spec: TalbotSpec = TalbotSpec()):
    """Inverse Laplace transform of ``F`` at ``t > 0`` on the fixed-Talbot contour.

    ``F`` receives a 1-D complex array of contour points ``p`` and must return
    an array whose leading axis matches ``p``; trailing axes are carried
    through, so one call can invert a whole family of images.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    M = spec.nodes
    r = 2.0 * M / (5.0 * t)
    z, d = _talbot_table(M)
    p = r * z
    vals = np.asarray(F(p), dtype=complex)
    if vals.shape[:1] != p.shape:
        raise ContourFailure("image must return one value per contour node")
    if not np.all(np.isfinite(vals)):
        raise ContourFailure("image is not finite at some contour node")
    weights = np.exp(t * p) * d
    total = np.tensordot(weights, vals, axes=(0, 0))
    out = r / (2.0 * M) * total
    return complex(out) if np.ndim(out) == 0 else out


def inverse_sawi_numeric(image: Callable, t: float, contour: TalbotSpec = TalbotSpec()):
    """Recover ``psi(t)`` from its Sawi image.

    The Laplace image is ``L(p) = image(1/p) / p**2``; it is inverted on the
    fixed-Talbot contour. ``image`` must accept complex ``s``.
    """
    def laplace(p: np.ndarray) -> np.ndarray:
        vals = _call_vectorized(image, 1.0 / p)
        extra = (1,) * (vals.ndim - 1)
        return vals / p.reshape(p.shape + extra) ** 2

    return talbot_inverse_laplace(laplace, t, contour)
