"""Atom algebra for Sawi images of Mittag-Leffler type.

An atom is ``coef * s**mu * (1 - omega s**alpha)**(-kappa)``. Atoms sharing
``(alpha, omega)`` form a group under multiplication, and each atom with
``mu + 2 > 0`` is the image of the single time term
``coef * t**(mu+1) * E^kappa_{alpha,mu+2}(omega t**alpha)``.

Every closed-form solution in :mod:`sawi_prabhakar.analytic_solutions` is
obtained by writing the image of the unknown as ``P / (A + B)``, expanding
``P A^-1 sum_n (-B A^-1)^n`` and inverting term by term.

Exponents are stored as exact :class:`fractions.Fraction` values (every
finite binary64 number is rational), so long expansions do not accumulate
rounding in ``mu`` and ``kappa``; they are rounded once, at evaluation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import BranchCut, DivergentSeriesWarning, MixedBase, NotInvertible
from .ml_kernels import RATIO_CLAMP, EvalResult, ml3

__all__ = [
    "AtomSeries",
    "SawiAtom",
    "TimeTerm",
    "atom_eval",
    "atom_inv",
    "atom_mul",
    "atom_pow",
    "geometric_expand",
    "invert_atom",
    "render_trace",
    "scalar_atom",
    "series_eval_time",
]

Exponent = Fraction


def _exponent(x) -> Exponent:
    if isinstance(x, Rational):
        return Fraction(x)
    x = float(x)
    if not np.isfinite(x):
        raise ValueError(f"exponent must be finite, got {x!r}")
    return Fraction(x)


def _add(a: Exponent, b) -> Exponent:
    return a + _exponent(b)


def _scale(n: int, a: Exponent) -> Exponent:
    return n * a


@dataclass(frozen=True)
class SawiAtom:
    """``coef * s**mu * (1 - omega s**alpha)**(-kappa)``."""

    coef: complex
    mu: Exponent
    kappa: Exponent
    alpha: Exponent
    omega: complex = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "coef", complex(self.coef))
        object.__setattr__(self, "omega", complex(self.omega))
        for name in ("mu", "kappa", "alpha"):
            object.__setattr__(self, name, _exponent(getattr(self, name)))
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")

    @property
    def base(self) -> tuple[float, complex]:
        return float(self.alpha), self.omega

    def scaled(self, c: complex) -> SawiAtom:
        return SawiAtom(self.coef * c, self.mu, self.kappa, self.alpha, self.omega)


@dataclass(frozen=True)
class TimeTerm:
    """``coef * t**power * E^ml_gamma_{ml_alpha, ml_beta}(omega t**ml_alpha)``."""

    coef: complex
    power: Exponent
    ml: tuple[Exponent, Exponent, Exponent]
    omega: complex = 0.0

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        a, b, g = (float(x) for x in self.ml)
        e = ml3(a, b, g, self.omega * t**a).value
        return self.coef * t ** float(self.power) * e


@dataclass(frozen=True)
class AtomSeries:
    """Atoms ``0 .. truncation_index`` of a geometric expansion.

    ``ratio_bound`` is ``|B/A|`` at the probe point; ``divergent`` flags
    ``ratio_bound >= 1``. The series is returned either way because the
    time-domain series may still converge.
    """

    atoms: tuple[SawiAtom, ...]
    truncation_index: int
    ratio_bound: float
    divergent: bool = False


def scalar_atom(c: complex, alpha, omega: complex = 0.0) -> SawiAtom:
    """A constant ``c`` as an atom on the base ``(alpha, omega)``."""
    return SawiAtom(c, 0, 0, alpha, omega)


def atom_eval(a: SawiAtom, s) -> complex:
    """Evaluate an atom at ``s``.

    Raises
    ------
    BranchCut
        If ``1 - omega s**alpha <= 0`` with real ``omega`` and real ``s``.
    """
    alpha, omega = float(a.alpha), a.omega
    s_arr = np.asarray(s)
    if omega.imag == 0.0 and np.isrealobj(s_arr):
        base = 1.0 - omega.real * s_arr.astype(float) ** alpha
        if np.any(base <= 0):
            raise BranchCut(f"1 - omega s^alpha = {np.min(base):g} <= 0")
        val = a.coef * s_arr.astype(float) ** float(a.mu) * base ** (-float(a.kappa))
    else:
        sc = s_arr.astype(complex)
        val = a.coef * sc ** float(a.mu) * (1.0 - omega * sc**alpha) ** (-float(a.kappa))
    val = np.asarray(val, dtype=complex)
    return complex(val) if val.ndim == 0 else val


def _check_base(a: SawiAtom, b: SawiAtom) -> None:
    if a.alpha != b.alpha or a.omega != b.omega:
        raise MixedBase(f"cannot combine bases {a.base} and {b.base}")


def atom_mul(a: SawiAtom, b: SawiAtom) -> SawiAtom:
    """Product of two atoms on the same base."""
    _check_base(a, b)
    return SawiAtom(a.coef * b.coef, _add(a.mu, b.mu), _add(a.kappa, b.kappa), a.alpha, a.omega)


def atom_inv(a: SawiAtom) -> SawiAtom:
    """Multiplicative inverse; ``coef`` must be nonzero."""
    if a.coef == 0:
        raise ZeroDivisionError("atom with zero coefficient has no inverse")
    return SawiAtom(1.0 / a.coef, _scale(-1, a.mu), _scale(-1, a.kappa), a.alpha, a.omega)


def atom_pow(a: SawiAtom, n: int) -> SawiAtom:
    """Integer power ``a**n``; negative ``n`` inverts first."""
    if n < 0:
        return atom_pow(atom_inv(a), -n)
    return SawiAtom(a.coef**n, _scale(n, a.mu), _scale(n, a.kappa), a.alpha, a.omega)


def geometric_expand(P: SawiAtom, A: SawiAtom, B: SawiAtom, N: int, s_probe: float,
                     warn: bool = True) -> AtomSeries:
    """Expand ``P / (A + B)`` as ``P A^-1 sum_{n<=N} (-B A^-1)^n``.

    Parameters
    ----------
    P, A, B : SawiAtom
        Atoms on a common base; ``A`` must have a nonzero coefficient.
    N : int
        Truncation index; ``N + 1`` atoms are returned.
    s_probe : float
        Point at which ``|B/A|`` is reported as ``ratio_bound``.
    warn : bool
        Emit :class:`DivergentSeriesWarning` when ``ratio_bound >= 1``.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    _check_base(P, A)
    _check_base(A, B)
    a_inv = atom_inv(A)
    lead = atom_mul(P, a_inv)
    step = atom_mul(B, a_inv).scaled(-1.0)
    atoms = []
    current = lead
    for _ in range(N + 1):
        atoms.append(current)
        current = atom_mul(current, step)
    ratio = abs(atom_eval(B, s_probe) / atom_eval(A, s_probe))
    divergent = ratio >= 1.0
    if divergent and warn:
        warnings.warn(f"|B/A| = {ratio:.3g} >= 1 at s = {s_probe}", DivergentSeriesWarning, stacklevel=2)
    return AtomSeries(tuple(atoms), N, ratio, divergent)


def invert_atom(a: SawiAtom) -> TimeTerm:
    """Time-domain preimage ``coef t**(mu+1) E^kappa_{alpha,mu+2}(omega t**alpha)``.

    Raises
    ------
    NotInvertible
        If ``mu + 2 <= 0``.
    """
    beta = _add(a.mu, 2)
    if beta <= 0:
        raise NotInvertible(f"mu + 2 = {beta} <= 0 has no Mittag-Leffler preimage")
    return TimeTerm(a.coef, _add(a.mu, 1), (a.alpha, beta, a.kappa), a.omega)


def series_eval_time(terms: Sequence[TimeTerm], t: float, tol: float = 1e-15) -> EvalResult:
    """Sum time terms at ``t > 0``.

    ``est_error`` adds the Mittag-Leffler evaluation errors to a geometric
    tail bound built from the last two term magnitudes (ratio clamped to
    0.99, as in :func:`sawi_prabhakar.ml_kernels.ml3`).
    """
    if not t > 0:
        raise ValueError("t must be positive")
    total = 0j
    eval_err = 0.0
    mags = []
    for term in terms:
        a, b, g = (float(x) for x in term.ml)
        r = ml3(a, b, g, term.omega * t**a, tol)
        value = term.coef * t ** float(term.power) * r.value
        total += value
        eval_err += abs(term.coef) * t ** float(term.power) * r.est_error
        mags.append(abs(value))
    tail = 0.0
    if len(mags) >= 2:
        ratio = mags[-1] / mags[-2] if mags[-2] > 0 else 0.0
        tail = mags[-1] * min(ratio, RATIO_CLAMP) / (1.0 - min(ratio, RATIO_CLAMP))
    return EvalResult(total, eval_err + tail, len(mags))


def _fmt(x: Fraction) -> str:
    return str(x) if x.denominator <= 10**6 else repr(float(x))


def render_trace(series: AtomSeries | Iterable[SawiAtom]) -> str:
    """Tab-separated listing: ``n, coef.re, coef.im, mu, kappa, alpha, omega.re, omega.im``."""
    atoms = series.atoms if isinstance(series, AtomSeries) else tuple(series)
    lines = ["n\tcoef_re\tcoef_im\tmu\tkappa\talpha\tomega_re\tomega_im"]
    for n, a in enumerate(atoms):
        lines.append("\t".join([
            str(n), repr(a.coef.real), repr(a.coef.imag), _fmt(a.mu), _fmt(a.kappa),
            _fmt(a.alpha), repr(a.omega.real), repr(a.omega.imag),
        ]))
    return "\n".join(lines) + "\n"
