"""Closed-form series solutions of Prabhakar-type Cauchy problems.

Each solution comes from the same algebra: the image of the unknown is
``P / (A + c B)`` with atoms from :mod:`sawi_prabhakar.sawi_algebra`, which is
expanded geometrically in ``c`` and inverted term by term. Solutions are
therefore power series in the mode multiplier ``c``,

    psi_hat(t) = sum_n c**n * t**power_n * E^kappa_n_{alpha, beta_n}(omega t**alpha),

whose time factors do not depend on ``c``. For the PDE problems ``c`` is the
Fourier symbol of the spatial operator and the physical solution is the
inverse Fourier integral ``(1/2pi) int exp(-i k x) g_hat(k) psi_hat(k, t) dk``,
discretized by the trapezoid rule.

For large ``|c|`` the truncated series cannot be summed in double precision
(the terms grow far beyond the result before they decay). Such modes are
evaluated instead by a fixed-Talbot inversion of the same closed-form image.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.special import rgamma

from .errors import InvalidOrder, TruncationWarning
from .ml_kernels import ml3
from .prabhakar_ops import Grid, Samples, prabhakar_integral_num
from .sawi_algebra import AtomSeries, SawiAtom, TimeTerm, atom_eval, geometric_expand, invert_atom, scalar_atom
from .sawi_transform import TalbotSpec, inverse_sawi_numeric
from .specs import HilferSpec, KernelSpec

__all__ = [
    "AdvDispSpec",
    "HeatSpec",
    "InitialProfile",
    "IntegroSpec",
    "ModeQuadrature",
    "PointwiseSpec",
    "SolutionFamily",
    "adv_disp_family",
    "heat_family",
    "integro_families",
    "mode_response",
    "mode_samples",
    "pointwise_family",
    "solve_adv_disp",
    "solve_heat",
    "solve_integro",
    "solve_integro_grid",
    "solve_pointwise",
    "time_response",
]

DEFAULT_TERMS = 64
TAIL_WARN_REL = 1e-6
FALLBACK_TOL = 1e-10
FALLBACK_CONTOUR = TalbotSpec(nodes=48)
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class AdvDispSpec:
    """Advection-dispersion problem with symbol ``c(k) = i p k - theta |k|**lap_order``."""

    hspec: HilferSpec
    p: float
    theta: float
    lap_order: float
    regularized: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.lap_order <= 2.0:
            raise InvalidOrder(f"lap_order must lie in (0, 2], got {self.lap_order!r}")
        if self.theta < 0:
            raise InvalidOrder(f"theta must be nonnegative, got {self.theta!r}")

    def symbol(self, k):
        k = np.asarray(k, dtype=float)
        return 1j * self.p * k - self.theta * np.abs(k) ** self.lap_order


@dataclass(frozen=True)
class HeatSpec:
    """Diffusion problem with symbol ``c(k) = -diffusivity k**2``."""

    hspec: HilferSpec
    diffusivity: float
    regularized: bool = True

    def __post_init__(self) -> None:
        if not self.diffusivity > 0:
            raise InvalidOrder(f"diffusivity must be positive, got {self.diffusivity!r}")

    def symbol(self, k):
        k = np.asarray(k, dtype=float)
        return -self.diffusivity * k**2 + 0j


@dataclass(frozen=True)
class PointwiseSpec:
    """Relaxation ``D psi = -lambda (1 - x) psi`` with ``psi(0) = 1`` at a fixed ``x``.

    The derivative is taken with respect to the kernel ``omega -> -omega``,
    so the solution carries ``E(-omega t**alpha)``.
    """

    hspec: HilferSpec
    lambda_coef: float
    x: float

    def __post_init__(self) -> None:
        if abs(self.x) > 1:
            raise ValueError(f"|x| must not exceed 1, got {self.x!r}")
        if not self.lambda_coef > 0:
            raise ValueError(f"lambda_coef must be positive, got {self.lambda_coef!r}")

    @property
    def rate(self) -> float:
        return -self.lambda_coef * (1.0 - self.x)

    @property
    def kernel(self) -> KernelSpec:
        return self.hspec.kernel.with_(omega=-self.hspec.omega)


@dataclass(frozen=True)
class IntegroSpec:
    """``D psi = lambda I^delta psi + y`` with weighted initial value ``M_init``."""

    hspec: HilferSpec
    lambda_coef: complex
    delta: float
    M_init: complex
    forcing: Samples

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise InvalidOrder(f"delta must be nonnegative, got {self.delta!r}")


@dataclass(frozen=True)
class InitialProfile:
    """Initial data ``g`` with Fourier image ``g_hat(k) = int g(x) exp(i k x) dx``."""

    kind: Literal["gaussian", "point_mass"]
    sigma: float = 1.0

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> InitialProfile:
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        return cls("gaussian", sigma)

    @classmethod
    def point_mass(cls) -> InitialProfile:
        return cls("point_mass", 0.0)

    def fourier_image(self, k):
        k = np.asarray(k, dtype=float)
        if self.kind == "gaussian":
            s = self.sigma
            return s * math.sqrt(2 * math.pi) * np.exp(-0.5 * s * s * k * k) + 0j
        return np.ones_like(k, dtype=complex)

    def __call__(self, x):
        if self.kind != "gaussian":
            raise ValueError("a point mass has no pointwise values")
        x = np.asarray(x, dtype=float)
        return np.exp(-0.5 * x * x / self.sigma**2)


@dataclass(frozen=True)
class ModeQuadrature:
    """Trapezoid rule on ``[-k_max, k_max]`` with ``nodes`` intervals (``nodes + 1`` points)."""

    k_max: float
    nodes: int = 2048

    def __post_init__(self) -> None:
        if not self.k_max > 0:
            raise ValueError("k_max must be positive")
        if self.nodes < 64 or self.nodes % 2:
            raise ValueError(f"nodes must be even and at least 64, got {self.nodes}")

    @classmethod
    def for_profile(cls, g: InitialProfile, nodes: int = 2048) -> ModeQuadrature:
        if g.kind != "gaussian":
            raise ValueError("point-mass data needs an explicit k_max")
        return cls(8.0 / g.sigma, nodes)

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights, the weights including the ``1/(2 pi)`` factor."""
        k = np.linspace(-self.k_max, self.k_max, self.nodes + 1)
        w = np.full(k.shape, 2 * self.k_max / self.nodes)
        w[[0, -1]] *= 0.5
        return k, w / (2 * math.pi)


@dataclass(frozen=True)
class SolutionFamily:
    """Image ``P / (A + c B)`` and its expansion with unit multiplier.

    ``series.atoms[n]`` carries the ``c**n`` term without the factor ``c**n``.
    """

    P: SawiAtom
    A: SawiAtom
    B: SawiAtom
    series: AtomSeries
    terms: tuple[TimeTerm, ...] = field(default=())

    @classmethod
    def build(cls, P: SawiAtom, A: SawiAtom, B: SawiAtom, N: int, invert: bool = True) -> SolutionFamily:
        series = geometric_expand(P, A, B, N, s_probe=1.0, warn=False)
        terms = tuple(invert_atom(a) for a in series.atoms) if invert else ()
        return cls(P, A, B, series, terms)

    def image(self, c: np.ndarray):
        """Closed-form image as a function of ``s``, vectorized over the multipliers ``c``."""
        c = np.asarray(c, dtype=complex)

        def sawi_image(s):
            s = np.asarray(s, dtype=complex)[:, None]
            return atom_eval(self.P, s) / (atom_eval(self.A, s) + c[None, :] * atom_eval(self.B, s))

        return sawi_image


def _hilfer_atoms(hspec: HilferSpec, omega: complex | None = None):
    a, rho, g = hspec.alpha, hspec.rho, hspec.gamma
    w = hspec.omega if omega is None else omega
    A = SawiAtom(1, -rho, -g, a, w)
    return a, rho, g, w, A


def _regularized_family(hspec: HilferSpec, N: int, omega: complex | None = None) -> SolutionFamily:
    a, rho, g, w, A = _hilfer_atoms(hspec, omega)
    P = SawiAtom(1, -rho - 1, -g, a, w)
    return SolutionFamily.build(P, A, scalar_atom(-1, a, w), N)


def _weighted_family(hspec: HilferSpec, N: int) -> SolutionFamily:
    a, rho, g, w, A = _hilfer_atoms(hspec)
    nu = hspec.nu
    P = SawiAtom(1, nu * (1 - rho) - 2, -g * nu, a, w)
    return SolutionFamily.build(P, A, scalar_atom(-1, a, w), N)


def adv_disp_family(spec: AdvDispSpec, N: int = DEFAULT_TERMS) -> SolutionFamily:
    """Term family of the advection-dispersion solution (weighted datum unless regularized)."""
    return _regularized_family(spec.hspec, N) if spec.regularized else _weighted_family(spec.hspec, N)


def heat_family(spec: HeatSpec, N: int = DEFAULT_TERMS) -> SolutionFamily:
    """Term family of the diffusion solution (weighted datum unless regularized)."""
    return _regularized_family(spec.hspec, N) if spec.regularized else _weighted_family(spec.hspec, N)


def pointwise_family(spec: PointwiseSpec, N: int = DEFAULT_TERMS) -> SolutionFamily:
    """Term family of the pointwise relaxation problem, on the negated kernel base."""
    return _regularized_family(spec.hspec, N, omega=-spec.hspec.omega)


def integro_families(hspec: HilferSpec, delta: float, N: int = DEFAULT_TERMS) -> tuple[SolutionFamily, SolutionFamily]:
    """Families for the integro-differential problem.

    The first has ``P = 1``: its atoms ``s**mu (1 - omega s**alpha)**(-kappa)``
    are Prabhakar-integral multipliers acting on the forcing image. The second
    carries the weighted initial value and inverts to time terms.
    """
    a, rho, g, w, A = _hilfer_atoms(hspec)
    B = SawiAtom(-1, rho, delta, a, w)
    forcing = SolutionFamily.build(scalar_atom(1, a, w), A, B, N, invert=False)
    nu = hspec.nu
    weighted = SolutionFamily.build(SawiAtom(1, nu * (1 - rho) - 2, -g * nu, a, w), A, B, N)
    return forcing, weighted


def _term_table(terms: tuple[TimeTerm, ...], t) -> np.ndarray:
    """``t**power_n E_n(omega t**alpha)`` for every term; shape ``(len(terms),) + t.shape``."""
    t = np.asarray(t, dtype=float)
    rows = []
    for term in terms:
        a, b, g = (float(x) for x in term.ml)
        e = ml3(a, b, g, term.omega * t**a).value
        rows.append(term.coef * t ** float(term.power) * np.asarray(e))
    return np.array(rows, dtype=complex)


def _sum_with_estimates(terms: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Row sums of a ``(batch, N+1)`` term matrix, a fallback mask and relative tails."""
    with np.errstate(over="ignore", invalid="ignore"):
        values = terms.sum(axis=1)
        mags = np.abs(terms)
        ratio = np.where(mags[:, -2] > 0, mags[:, -1] / mags[:, -2], 0.0)
        ratio = np.minimum(np.nan_to_num(ratio, nan=1.0, posinf=1.0), 0.99)
        tail = mags[:, -1] * ratio / (1.0 - ratio)
        roundoff = 4 * EPS * terms.shape[1] * mags.sum(axis=1)
        scale = np.maximum(np.abs(values), 1.0)
        bad = ~np.isfinite(values) | (tail + roundoff > FALLBACK_TOL * scale)
        rel_tail = np.where(np.abs(values) > 0, tail / np.abs(values), tail)
    return values, bad, rel_tail


def _worst(rel_tail: np.ndarray) -> float:
    return float(np.nan_to_num(rel_tail, nan=np.inf).max()) if rel_tail.size else 0.0


def mode_response(family: SolutionFamily, c, t: float, fallback: bool = True,
                  contour: TalbotSpec = FALLBACK_CONTOUR) -> tuple[np.ndarray, float]:
    """Series value for each multiplier in ``c`` at time ``t > 0``.

    Returns the values and the largest relative tail estimate among modes
    summed by the series. With ``fallback``, modes whose tail or roundoff
    estimate exceeds ``1e-10`` are recomputed by Talbot inversion of the image.
    """
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    e = _term_table(family.terms, t)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = c[:, None] ** np.arange(len(e))[None, :] * e[None, :]
    values, bad, rel_tail = _sum_with_estimates(terms)
    if fallback and bad.any():
        values[bad] = inverse_sawi_numeric(family.image(c[bad]), t, contour)
        rel_tail[bad] = 0.0
    return values, _worst(rel_tail)


def time_response(family: SolutionFamily, c: complex, t, fallback: bool = True,
                  contour: TalbotSpec = FALLBACK_CONTOUR) -> tuple[np.ndarray, float]:
    """Series value for one multiplier ``c`` at every time in the 1-D array ``t > 0``."""
    t = np.asarray(t, dtype=float)
    e = _term_table(family.terms, t)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = (complex(c) ** np.arange(len(e)))[None, :] * e.T
    values, bad, rel_tail = _sum_with_estimates(terms)
    if fallback and bad.any():
        image = family.image(np.array([c]))
        for j in np.flatnonzero(bad):
            values[j] = inverse_sawi_numeric(image, float(t[j]), contour)[0]
        rel_tail[bad] = 0.0
    return values, _worst(rel_tail)


def _warn_tail(worst: float, what: str) -> None:
    if worst > TAIL_WARN_REL:
        warnings.warn(f"{what}: series tail estimate {worst:.3g} exceeds {TAIL_WARN_REL:g} of the sum",
                      TruncationWarning, stacklevel=3)


def _fourier_solve(spec, family: SolutionFamily, g: InitialProfile, x, t: float,
                   mq: ModeQuadrature | None, fallback: bool):
    mq = mq or ModeQuadrature.for_profile(g)
    k, w = mq.points()
    x_arr = np.asarray(x, dtype=float)
    if t == 0:
        if not spec.regularized:
            raise ValueError("the weighted-datum solution is singular at t = 0")
        psi = np.ones(k.shape, dtype=complex)
    elif t > 0:
        psi, worst = mode_response(family, spec.symbol(k), t, fallback)
        _warn_tail(worst, type(spec).__name__)
    else:
        raise ValueError("t must be nonnegative")
    weights = w * g.fourier_image(k) * psi
    phase = np.exp(-1j * np.multiply.outer(x_arr.reshape(-1), k))
    out = phase @ weights
    return complex(out[0]) if x_arr.ndim == 0 else out.reshape(x_arr.shape)


def solve_adv_disp(spec: AdvDispSpec, g: InitialProfile, x, t: float, N_terms: int = DEFAULT_TERMS,
                   mq: ModeQuadrature | None = None, fallback: bool = True):
    """Advection-dispersion solution at position(s) ``x`` and time ``t``.

    Parameters
    ----------
    spec : AdvDispSpec
        ``regularized=True`` solves with the regularized derivative and
        ``psi(x, 0) = g``; otherwise the Hilfer-Prabhakar derivative with the
        weighted initial value ``g``.
    g : InitialProfile
    x : float or array_like
    t : float
        ``t > 0``; ``t = 0`` is accepted in the regularized case.
    N_terms : int
        Series truncation index.
    mq : ModeQuadrature, optional
        Defaults to :meth:`ModeQuadrature.for_profile`.
    fallback : bool
        Evaluate ill-conditioned modes by contour inversion.

    Warns
    -----
    TruncationWarning
        If a series-summed mode has a relative tail estimate above ``1e-6``.
    """
    return _fourier_solve(spec, adv_disp_family(spec, N_terms), g, x, t, mq, fallback)


def solve_heat(spec: HeatSpec, g: InitialProfile, x, t: float, N_terms: int = DEFAULT_TERMS,
               mq: ModeQuadrature | None = None, fallback: bool = True):
    """Diffusion solution; arguments as in :func:`solve_adv_disp`."""
    return _fourier_solve(spec, heat_family(spec, N_terms), g, x, t, mq, fallback)


def solve_pointwise(spec: PointwiseSpec, t, N_terms: int = DEFAULT_TERMS, fallback: bool = True):
    """Pointwise relaxation solution ``sum_n (-lambda (1-x))**n t**(rho n) E^(gamma n)_{alpha, rho n + 1}(-omega t**alpha)``.

    ``t`` may be a scalar or an array of nonnegative times.
    """
    t_arr = np.asarray(t, dtype=float)
    flat = t_arr.reshape(-1)
    if np.any(flat < 0):
        raise ValueError("t must be nonnegative")
    out = np.ones(flat.shape, dtype=complex)
    pos = flat > 0
    if pos.any():
        values, worst = time_response(pointwise_family(spec, N_terms), spec.rate, flat[pos], fallback)
        _warn_tail(worst, "PointwiseSpec")
        out[pos] = values
    return complex(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def mode_samples(spec: AdvDispSpec | HeatSpec, k: float, grid: Grid, N_terms: int = DEFAULT_TERMS) -> Samples:
    """Single Fourier mode ``psi_hat(k, t) / g_hat(k)`` on a time grid.

    For the weighted-datum problems the result carries the singular factor
    ``t**(nu(1-rho) + rho - 1)``; node zero holds the leading coefficient.
    """
    family = (adv_disp_family if isinstance(spec, AdvDispSpec) else heat_family)(spec, N_terms)
    c = complex(spec.symbol(k))
    t = grid.t[1:]
    e = _term_table(family.terms, t)
    vals = np.empty(grid.n, dtype=complex)
    vals[1:] = ((c ** np.arange(len(e)))[:, None] * e).sum(axis=0)
    h = spec.hspec
    if spec.regularized:
        vals[0] = 1.0
        return Samples(grid, vals)
    lead = h.nu * (1 - h.rho) + h.rho
    vals[0] = rgamma(lead)
    return Samples(grid, vals, lead - 1.0)


def solve_integro_grid(spec: IntegroSpec, N_terms: int = DEFAULT_TERMS, tol: float = 1e-17) -> Samples:
    """Integro-differential solution at every node of the forcing grid.

    Terms are added until ``N_terms`` or until three consecutive terms are
    below ``tol`` relative to the running sum.
    """
    h = spec.hspec
    grid = spec.forcing.grid
    lam = complex(spec.lambda_coef)
    forcing_family, weighted_family = integro_families(h, spec.delta, N_terms)
    t = grid.t[1:]
    total = np.zeros(grid.n, dtype=complex)
    small = 0
    for n, (atom, term) in enumerate(zip(forcing_family.series.atoms, weighted_family.terms)):
        factor = lam**n
        if n > 0 and factor == 0:
            break
        piece = np.zeros(grid.n, dtype=complex)
        if np.any(spec.forcing.values != 0):
            kernel = KernelSpec(h.alpha, float(atom.mu), float(atom.kappa), h.omega)
            piece += prabhakar_integral_num(spec.forcing, kernel).values
        if spec.M_init != 0:
            a, b, g = (float(x) for x in term.ml)
            piece[1:] += spec.M_init * t ** float(term.power) * ml3(a, b, g, h.omega * t**a).value
        piece *= factor
        total += piece
        size = np.abs(piece[1:]).max()
        small = small + 1 if size <= tol * max(np.abs(total[1:]).max(), 1e-300) else 0
        if small >= 3:
            break
    lead = h.nu * (1 - h.rho) + h.rho
    total[0] = spec.M_init * rgamma(lead)
    sigma = lead - 1.0
    return Samples(grid, total, 0.0 if abs(sigma) < 1e-12 else sigma)


def solve_integro(spec: IntegroSpec, t_index: int, N_terms: int = DEFAULT_TERMS) -> complex:
    """Integro-differential solution at grid node ``t_index >= 1``."""
    if not 1 <= t_index < spec.forcing.grid.n:
        raise ValueError(f"t_index must lie in [1, {spec.forcing.grid.n - 1}]")
    return complex(solve_integro_grid(spec, N_terms).values[t_index])
