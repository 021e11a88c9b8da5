"""Mittag-Leffler functions and the Prabhakar kernel by direct power series.

All evaluators accept scalar or array arguments and vectorize over the
argument ``z`` (or time ``t``). The series is summed with Kahan compensation
and stopped by a three-small-terms rule; arguments with ``|z| > 50`` are
rejected instead of being served by asymptotic expansions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.special import gammaln, rgamma

from .errors import InvalidOrder, NonConvergence, OutOfSupportedRange
from .specs import KernelSpec

__all__ = [
    "EvalResult",
    "MAX_ABS_Z",
    "MAX_TERMS",
    "kernel_antiderivative",
    "kernel_primitive",
    "ml1",
    "ml2",
    "ml3",
    "pochhammer",
    "prabhakar_kernel",
    "series_terms",
]

MAX_TERMS = 2000
MAX_ABS_Z = 50.0
DEFAULT_TOL = 1e-15
RATIO_CLAMP = 0.99
DIRECT_GAMMA_MAX = 170.0
EPS = np.finfo(float).eps
TINY = np.finfo(float).tiny
ROUNDOFF_FACTOR = 4 * EPS


@dataclass(frozen=True)
class EvalResult:
    """Series value with its truncation-tail estimate.

    For array input ``value`` and ``est_error`` are arrays of the input shape
    and ``terms_used`` is the largest count over all entries.
    """

    value: complex | np.ndarray
    est_error: float | np.ndarray
    terms_used: int


def pochhammer(gamma: float, k: int) -> float:
    """Rising factorial ``gamma (gamma+1) ... (gamma+k-1)``; ``1`` for ``k = 0``.

    Large products overflow to ``inf`` rather than raising.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    out = 1.0
    with np.errstate(over="ignore"):
        for j in range(k):
            out = float(np.float64(out) * (gamma + j))
    return out


def _is_pole(a: float) -> bool:
    return a <= 0 and a == math.floor(a)


def series_terms(alpha: float, rho: float, gamma: float, z) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(k, term_k)`` of ``sum (gamma)_k z^k / (Gamma(alpha k + rho) k!)``.

    ``z`` is a 1-D complex array; terms are arrays of the same shape. Terms whose
    Gamma argument sits on a pole are exactly zero. Large powers and large
    Gamma values are combined in log space so that neither overflows.
    """
    z = np.asarray(z, dtype=complex)
    absz = np.abs(z)
    nonzero = absz > 0
    with np.errstate(divide="ignore"):
        logabs = np.where(nonzero, np.log(np.where(nonzero, absz, 1.0)), -np.inf)
    # unit phase carried as a running product: exact for real arguments
    unit = np.where(z.imag == 0, np.sign(z.real) + 0j, np.exp(1j * np.angle(z)))
    phase = np.ones(z.shape, dtype=complex)
    power = np.ones(z.shape)
    ratio = 1.0  # (gamma)_k / k!
    k = 0
    while True:
        a = alpha * k + rho
        if k == 0:
            term = np.full(z.shape, ratio * rgamma(a), dtype=complex)
        elif a > 0:
            if a < DIRECT_GAMMA_MAX and np.all(power < 1e290):
                mag = power * rgamma(a)
            else:
                with np.errstate(under="ignore", over="ignore"):
                    mag = np.exp(k * logabs - gammaln(a))
            with np.errstate(over="ignore", invalid="ignore"):
                term = ratio * mag * phase
        else:
            term = ratio * rgamma(a) * z**k
        yield k, term
        ratio *= (gamma + k) / (k + 1)
        phase = phase * unit
        with np.errstate(over="ignore"):
            power = power * absz
        k += 1


def ml3(alpha: float, rho: float, gamma: float, z, tol: float = DEFAULT_TOL,
        max_terms: int = MAX_TERMS) -> EvalResult:
    """Three-parameter (Prabhakar) Mittag-Leffler function ``E^gamma_{alpha,rho}(z)``.

    Parameters
    ----------
    alpha, rho, gamma : float
        Real orders; ``alpha > 0``.
    z : complex or array_like
        Argument(s), ``|z| <= 50``.
    tol : float
        Relative stopping tolerance. Summation stops once three consecutive
        nonzero-eligible terms are below ``tol * max(|S|, eps sum |term_k|)``
        and the tail estimate is below the same bound. The bound is relative
        even for tiny sums, such as large ``rho``.

    Returns
    -------
    EvalResult
        ``est_error`` is a truncation bound (the last three term magnitudes
        divided by ``1 - r``, ``r`` the last term ratio clamped to ``0.99``)
        plus a rounding bound ``4 eps sum |term_k|``. The second dominates
        when the terms cancel, e.g. small ``alpha`` with negative ``z``.

    Raises
    ------
    InvalidOrder
        If ``alpha <= 0``.
    OutOfSupportedRange
        If any ``|z| > 50``.
    NonConvergence
        If the stopping rule has not fired within ``max_terms`` terms.
    """
    if not alpha > 0:
        raise InvalidOrder(f"alpha must be positive, got {alpha!r}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    z_in = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z_in)):
        raise OutOfSupportedRange("non-finite argument")
    if np.any(np.abs(z_in) > MAX_ABS_Z):
        raise OutOfSupportedRange(f"|z| exceeds {MAX_ABS_Z}: max |z| = {np.abs(z_in).max():g}")
    zf = z_in.reshape(-1)

    total = np.zeros(zf.shape, dtype=complex)
    comp = np.zeros(zf.shape, dtype=complex)
    run = np.zeros(zf.shape, dtype=int)
    last = np.zeros((3,) + zf.shape)
    prev_mag = np.zeros(zf.shape)
    done = np.zeros(zf.shape, dtype=bool)
    est = np.zeros(zf.shape)
    abs_sum = np.zeros(zf.shape)
    used = 0

    for k, term in series_terms(alpha, rho, gamma, zf):
        if k >= max_terms:
            break
        if not np.all(np.isfinite(term)):
            raise NonConvergence(
                f"E^{gamma}_{{{alpha},{rho}}} series terms overflow at k = {k} (max |z| = {np.abs(zf).max():g}); "
                "small alpha with large |z| is beyond the power series"
            )
        active = ~done
        # Kahan-compensated accumulation on the entries still summing
        y = np.where(active, term, 0.0) - comp
        t = total + y
        comp = np.where(active, (t - total) - y, comp)
        total = np.where(active, t, total)

        if _is_pole(alpha * k + rho):
            continue
        mag = np.abs(term)
        with np.errstate(over="ignore"):
            abs_sum = np.where(active, abs_sum + mag, abs_sum)
        # relative to the sum, floored at its rounding level so cancellation still stops
        floor = np.maximum(EPS * abs_sum, TINY)
        bound = tol * np.maximum(np.abs(total), floor)
        run = np.where(mag < bound, run + 1, 0)
        last = np.roll(last, -1, axis=0)
        last[-1] = mag
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(prev_mag > 0, mag / prev_mag, 0.0)
        r = np.minimum(r, RATIO_CLAMP)
        prev_mag = mag
        with np.errstate(over="ignore"):
            tail = last.sum(axis=0) / (1.0 - r)
        fire = active & (run >= 3) & (tail <= bound)
        est = np.where(fire, tail, est)
        done |= fire
        if fire.any():
            used = k + 1
        if done.all():
            break
    if not done.all():
        raise NonConvergence(
            f"E^{gamma}_{{{alpha},{rho}}} series did not converge in {max_terms} terms "
            f"(max |z| = {np.abs(zf).max():g})"
        )
    est = est + ROUNDOFF_FACTOR * abs_sum
    if z_in.ndim == 0:
        return EvalResult(complex(total[0]), float(est[0]), used)
    return EvalResult(total.reshape(z_in.shape), est.reshape(z_in.shape), used)


def ml2(alpha: float, rho: float, z, tol: float = DEFAULT_TOL) -> EvalResult:
    """Two-parameter Mittag-Leffler function ``E_{alpha,rho}(z)``."""
    return ml3(alpha, rho, 1.0, z, tol)


def ml1(alpha: float, z, tol: float = DEFAULT_TOL) -> EvalResult:
    """One-parameter Mittag-Leffler function ``E_alpha(z)``."""
    return ml3(alpha, 1.0, 1.0, z, tol)


def _as_time(t, allow_zero: bool) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if allow_zero:
        if np.any(t < 0):
            raise ValueError("t must be nonnegative")
    elif np.any(t <= 0):
        raise ValueError("t must be positive")
    return t


def _scalar_or_array(x: np.ndarray):
    return complex(x) if x.ndim == 0 else x


def prabhakar_kernel(spec: KernelSpec, t, tol: float = DEFAULT_TOL):
    """Pointwise kernel ``t**(rho-1) * E^gamma_{alpha,rho}(omega t**alpha)``, ``t > 0``.

    ``rho <= 0`` is rejected: such kernels only make sense under an integral.
    """
    if spec.rho <= 0:
        raise InvalidOrder(f"pointwise kernel needs rho > 0, got {spec.rho!r}")
    t = _as_time(t, allow_zero=False)
    e = ml3(spec.alpha, spec.rho, spec.gamma, spec.omega * t**spec.alpha, tol).value
    return _scalar_or_array(t ** (spec.rho - 1.0) * np.asarray(e))


def kernel_primitive(spec: KernelSpec, t, times: int = 1, tol: float = DEFAULT_TOL):
    """``times``-fold iterated integral of the kernel from 0 to ``t``.

    Term-wise integration raises ``rho`` by one per integration, so the result
    is ``t**(rho+times-1) * E^gamma_{alpha,rho+times}(omega t**alpha)``. Zero
    at ``t = 0``.
    """
    if spec.rho <= 0:
        raise InvalidOrder(f"kernel primitive needs rho > 0, got {spec.rho!r}")
    if times < 0:
        raise ValueError("times must be nonnegative")
    if times == 0:
        return prabhakar_kernel(spec, t, tol)
    t = _as_time(t, allow_zero=True)
    beta = spec.rho + times
    e = ml3(spec.alpha, beta, spec.gamma, spec.omega * t**spec.alpha, tol).value
    return _scalar_or_array(t ** (beta - 1.0) * np.asarray(e))


def kernel_antiderivative(spec: KernelSpec, t, tol: float = DEFAULT_TOL):
    """``integral_0^t e^gamma_{alpha,rho,omega}(tau) dtau = t**rho E^gamma_{alpha,rho+1}(omega t**alpha)``."""
    return kernel_primitive(spec, t, 1, tol)
