from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sawi_prabhakar import analytic_solutions as sol
from sawi_prabhakar.errors import InvalidOrder, TruncationWarning
from sawi_prabhakar.ml_kernels import ml3
from sawi_prabhakar.prabhakar_ops import Grid, Samples
from sawi_prabhakar.reference_solver import residual_check
from sawi_prabhakar.specs import HilferSpec, KernelSpec

HSPEC = HilferSpec(KernelSpec(0.8, 0.6, 0.5, -0.2), 0.4)
GAUSS = sol.InitialProfile.gaussian(1.0)


def classical(rho: float = 1.0, nu: float = 1.0) -> HilferSpec:
    return HilferSpec(KernelSpec(1.0, rho, 0.0, 0.0), nu)


def test_pointwise_reference_values():
    one = sol.PointwiseSpec(classical(), 1.0, 1.0)
    assert sol.solve_pointwise(one, 2.0) == pytest.approx(1.0)
    decay = sol.PointwiseSpec(classical(), 1.0, 0.0)
    assert sol.solve_pointwise(decay, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-13)
    half = sol.PointwiseSpec(classical(0.5), 1.0, 0.0)
    assert sol.solve_pointwise(half, 1.0) == pytest.approx(math.e * math.erfc(1.0), rel=1e-12)


def test_pointwise_accepts_arrays_and_origin():
    spec = sol.PointwiseSpec(classical(), 2.0, 0.5)
    t = np.array([[0.0, 0.5], [1.0, 2.0]])
    out = sol.solve_pointwise(spec, t)
    assert out.shape == t.shape
    np.testing.assert_allclose(out.real, np.exp(-t), rtol=1e-12)
    with pytest.raises(ValueError):
        sol.solve_pointwise(spec, -1.0)
    with pytest.raises(ValueError):
        sol.PointwiseSpec(classical(), 1.0, 1.5)


def test_pointwise_negates_kernel_base():
    h = HilferSpec(KernelSpec(0.7, 0.6, 0.8, 0.3), 1.0)
    spec = sol.PointwiseSpec(h, 0.8, 0.2)
    t = 0.9
    expected = sum((spec.rate) ** n * t ** (0.6 * n) * ml3(0.7, 0.6 * n + 1, 0.8 * n, -0.3 * t**0.7).value
                   for n in range(60))
    assert sol.solve_pointwise(spec, t) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("t,expected", [(0.25, 1 / math.sqrt(1.5)), (0.5, 1 / math.sqrt(2.0))])
def test_classical_heat_peak(t, expected):
    # unit-variance Gaussian data spreads to variance 1 + 2t
    spec = sol.HeatSpec(classical(), 1.0)
    assert sol.solve_heat(spec, GAUSS, 0.0, t) == pytest.approx(expected, rel=1e-9)
    x = np.linspace(-2, 2, 5)
    profile = sol.solve_heat(spec, GAUSS, x, t)
    np.testing.assert_allclose(profile.real, expected * np.exp(-x**2 / (2 * (1 + 2 * t))), atol=1e-9)


def test_classical_advection_shifts_the_profile():
    spec = sol.AdvDispSpec(classical(), p=1.0, theta=0.0, lap_order=2.0)
    x = np.linspace(-2, 2, 9)
    out = sol.solve_adv_disp(spec, GAUSS, x, 0.5)
    # symbol i p k with the exp(-i k x) inversion transports the data to the right
    np.testing.assert_allclose(out.real, GAUSS(x - 0.5), atol=1e-9)


@pytest.mark.parametrize("solver,spec", [
    (sol.solve_heat, sol.HeatSpec(HSPEC, 0.8)),
    (sol.solve_adv_disp, sol.AdvDispSpec(HSPEC, 0.3, 0.7, 1.5)),
])
def test_regularized_solution_starts_at_data(solver, spec):
    x = np.array([-1.0, 0.0, 0.5])
    np.testing.assert_allclose(solver(spec, GAUSS, x, 0.0).real, GAUSS(x), atol=1e-12)
    weighted = type(spec)(**{**spec.__dict__, "regularized": False})
    with pytest.raises(ValueError):
        solver(weighted, GAUSS, x, 0.0)
    with pytest.raises(ValueError):
        solver(spec, GAUSS, x, -0.1)


def test_forms_agree_when_they_coincide():
    h = HilferSpec(KernelSpec(0.8, 0.7, 0.0, -0.2), 1.0)
    x = np.array([0.0, 0.7])
    reg = sol.solve_heat(sol.HeatSpec(h, 0.5, True), GAUSS, x, 0.6)
    raw = sol.solve_heat(sol.HeatSpec(h, 0.5, False), GAUSS, x, 0.6)
    np.testing.assert_allclose(raw, reg, atol=1e-12)


def test_symmetric_problem_gives_real_profile():
    spec = sol.AdvDispSpec(HSPEC, p=0.0, theta=0.9, lap_order=1.5)
    x = np.linspace(-2, 2, 7)
    out = sol.solve_adv_disp(spec, GAUSS, x, 0.8)
    assert np.abs(out.imag).max() < 1e-12
    np.testing.assert_allclose(out, out[::-1], atol=1e-12)


def _check_terms(family, power, beta, kappa, n_max=3):
    for n in range(n_max):
        term = family.terms[n]
        assert term.power == power(n) and term.ml[1] == beta(n) and term.ml[2] == kappa(n)
        assert complex(term.coef) == pytest.approx(1.0)


def test_term_shapes_of_every_family():
    h = HilferSpec(KernelSpec(Fraction(4, 5), Fraction(3, 5), Fraction(1, 2), -0.2), Fraction(2, 5))
    rho, g, nu = Fraction(3, 5), Fraction(1, 2), Fraction(2, 5)
    reg = dict(power=lambda n: rho * n, beta=lambda n: rho * n + 1, kappa=lambda n: g * n)
    lead = nu * (1 - rho) + rho
    weighted = dict(power=lambda n: lead + rho * n - 1, beta=lambda n: lead + rho * n, kappa=lambda n: g * (n + 1 - nu))
    _check_terms(sol.heat_family(sol.HeatSpec(h, 1.0, True), 8), **reg)
    _check_terms(sol.adv_disp_family(sol.AdvDispSpec(h, 0.1, 0.2, 2.0, True), 8), **reg)
    _check_terms(sol.pointwise_family(sol.PointwiseSpec(h, 1.0, 0.0), 8), **reg)
    _check_terms(sol.heat_family(sol.HeatSpec(h, 1.0, False), 8), **weighted)
    _check_terms(sol.adv_disp_family(sol.AdvDispSpec(h, 0.1, 0.2, 2.0, False), 8), **weighted)
    delta = Fraction(3, 10)
    forcing, init = sol.integro_families(h, delta, 8)
    _check_terms(init, power=lambda n: lead + 2 * rho * n - 1, beta=lambda n: lead + 2 * rho * n,
                 kappa=lambda n: g * (n + 1 - nu) + delta * n)
    for n, atom in enumerate(forcing.series.atoms[:3]):
        assert atom.mu == (2 * n + 1) * rho and atom.kappa == g * (n + 1) + delta * n
    assert sol.pointwise_family(sol.PointwiseSpec(h, 1.0, 0.0), 4).terms[0].omega == pytest.approx(0.2)


def test_spec_validation():
    with pytest.raises(InvalidOrder):
        sol.AdvDispSpec(HSPEC, 0.0, 1.0, 2.5)
    with pytest.raises(InvalidOrder):
        sol.AdvDispSpec(HSPEC, 0.0, -1.0, 2.0)
    with pytest.raises(InvalidOrder):
        sol.HeatSpec(HSPEC, 0.0)
    with pytest.raises(ValueError):
        sol.InitialProfile.gaussian(0.0)
    with pytest.raises(ValueError):
        sol.ModeQuadrature.for_profile(sol.InitialProfile.point_mass())
    with pytest.raises(ValueError):
        sol.ModeQuadrature(4.0, 63)
    with pytest.raises(ValueError):
        sol.InitialProfile.point_mass()(0.0)


def test_point_mass_gives_heat_kernel():
    spec = sol.HeatSpec(classical(), 1.0)
    x = np.array([0.0, 1.0])
    out = sol.solve_heat(spec, sol.InitialProfile.point_mass(), x, 1.0, mq=sol.ModeQuadrature(12.0, 1024))
    np.testing.assert_allclose(out.real, np.exp(-x**2 / 4) / math.sqrt(4 * math.pi), atol=1e-9)


def test_truncation_warning_without_fallback():
    spec = sol.HeatSpec(HSPEC, 1.0)
    with pytest.warns(TruncationWarning):
        sol.solve_heat(spec, GAUSS, 0.0, 1.0, N_terms=3, fallback=False)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sol.solve_heat(spec, GAUSS, 0.0, 1.0, N_terms=3, fallback=True)


def test_fallback_agrees_with_series():
    family = sol.heat_family(sol.HeatSpec(HSPEC, 1.0), 80)
    c = np.array([-0.5, -2.0, -4.0])
    series, worst = sol.mode_response(family, c, 0.7, fallback=False)
    assert worst < 1e-12
    contour = sol.inverse_sawi_numeric(family.image(c), 0.7, sol.FALLBACK_CONTOUR)
    np.testing.assert_allclose(contour, series, rtol=1e-6)
    times = np.array([0.3, 0.7])
    by_time, _ = sol.time_response(family, -2.0, times, fallback=False)
    assert by_time[1] == pytest.approx(series[1], rel=1e-14)


def test_large_symbols_fall_back_to_contour():
    family = sol.heat_family(sol.HeatSpec(HSPEC, 1.0), 64)
    values, worst = sol.mode_response(family, np.array([-400.0]), 1.0)
    assert worst == 0.0 and np.isfinite(values).all()
    assert abs(values[0]) < 0.05


def test_mode_samples_origin_data():
    grid = Grid(1 / 64, 65)
    reg = sol.mode_samples(sol.HeatSpec(HSPEC, 1.0, True), 1.0, grid)
    assert reg.values[0] == 1.0 and reg.origin_power == 0.0
    raw = sol.mode_samples(sol.HeatSpec(HSPEC, 1.0, False), 1.0, grid)
    lead = HSPEC.nu * (1 - HSPEC.rho) + HSPEC.rho
    assert raw.origin_power == pytest.approx(lead - 1)
    assert raw.values[0] == pytest.approx(1 / math.gamma(lead))


@pytest.mark.parametrize("gamma", [0.0, 0.6])
def test_integro_single_term_is_integral_of_forcing(gamma):
    h = HilferSpec(KernelSpec(0.8, 0.6, gamma, -0.2), 1.0)
    grid = Grid(1 / 128, 129)
    out = sol.solve_integro_grid(sol.IntegroSpec(h, 0.0, 0.3, 0.0, Samples(grid, np.ones(grid.n))))
    t = grid.t[1:]
    expected = t**0.6 * ml3(0.8, 1.6, gamma, -0.2 * t**0.8).value
    np.testing.assert_allclose(out.values[1:], expected, rtol=1e-9)


def test_integro_initial_value_only():
    h = HilferSpec(KernelSpec(0.8, 0.6, 0.5, -0.2), 0.0)
    grid = Grid(1 / 128, 129)
    out = sol.solve_integro_grid(sol.IntegroSpec(h, 0.0, 0.3, 2.0, Samples(grid, np.zeros(grid.n))))
    t = grid.t[1:]
    assert out.origin_power == pytest.approx(-0.4)
    assert out.values[0] == pytest.approx(2 / math.gamma(0.6))
    np.testing.assert_allclose(out.values[1:], 2 * t**-0.4 * ml3(0.8, 0.6, 0.5, -0.2 * t**0.8).value, rtol=1e-12)
    assert sol.solve_integro(sol.IntegroSpec(h, 0.0, 0.3, 2.0, Samples(grid, np.zeros(grid.n))), 5) == out.values[5]
    with pytest.raises(ValueError):
        sol.solve_integro(sol.IntegroSpec(h, 0.0, 0.3, 2.0, Samples(grid, np.zeros(grid.n))), 0)
    with pytest.raises(InvalidOrder):
        sol.IntegroSpec(h, 0.0, -0.3, 2.0, Samples(grid, np.zeros(grid.n)))


@settings(max_examples=8, deadline=None)
@given(lam=st.floats(-1.0, 1.0), m=st.floats(-1.0, 1.0), nu=st.floats(0.0, 1.0))
def test_integro_solution_satisfies_its_equation(lam, m, nu):
    h = HilferSpec(KernelSpec(0.7, 0.4, 0.2, -0.1), nu)
    grid = Grid(1 / 256, 257)
    y = Samples.from_function(grid, lambda t: np.exp(-t))
    out = sol.solve_integro_grid(sol.IntegroSpec(h, lam, 0.3, m, y))
    report = residual_check("hilfer_prabhakar", h, out, 0.0, forcing=y, integral_coef=lam, integral_order=0.3)
    assert report.max_abs_residual < 5e-3
