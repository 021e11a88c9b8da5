from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sawi_prabhakar.errors import GridTooCoarse, InvalidOrder
from sawi_prabhakar.ml_kernels import ml3
from sawi_prabhakar.prabhakar_ops import (
    Grid,
    Samples,
    hilfer_prabhakar_num,
    prabhakar_derivative_num,
    prabhakar_integral_num,
    reg_hilfer_prabhakar_num,
    reg_prabhakar_derivative_num,
    toeplitz_weights,
)
from sawi_prabhakar.specs import HilferSpec, KernelSpec

SPEC = KernelSpec(0.8, 0.6, 0.5, -0.3)
GRID = Grid.covering(1.0, 1 / 512)


def monomial_image(spec: KernelSpec, beta: float, t: np.ndarray, order_sign: int = 1) -> np.ndarray:
    """Prabhakar integral (``order_sign = 1``) or derivative (``-1``) of ``t**(beta-1)``."""
    rho, gamma = order_sign * spec.rho, order_sign * spec.gamma
    return math.gamma(beta) * t ** (beta + rho - 1) * ml3(spec.alpha, beta + rho, gamma, spec.omega * t**spec.alpha).value


def interior(grid: Grid) -> np.ndarray:
    return grid.t >= 0.05 * grid.t_end


def rel(a, b) -> float:
    return float(np.max(np.abs(a - b) / np.abs(b)))


@pytest.mark.parametrize("beta", [1.0, 2.0, 3.0])
def test_integral_of_regular_monomials(beta):
    f = Samples.from_function(GRID, lambda t: t ** (beta - 1))
    out = prabhakar_integral_num(f, SPEC)
    m = interior(GRID)
    exact = monomial_image(SPEC, beta, GRID.t)
    assert rel(out.values[m], exact[m]) < 1e-3
    assert np.abs(out.values[1:] - exact[1:]).max() < 1e-6
    assert out.origin_power == 0.0 and out.values[0] == 0


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.8])
def test_integral_of_singular_monomials(beta):
    f = Samples.from_function(GRID, lambda t: t ** (beta - 1), origin_power=beta - 1, origin_coefficient=1.0)
    out = prabhakar_integral_num(f, SPEC)
    t = GRID.t[1:]
    assert rel(out.values[1:], monomial_image(SPEC, beta, t)) < 1e-5


def test_singular_output_keeps_leading_coefficient():
    spec = KernelSpec(0.8, 0.2, 0.5, -0.3)
    f = Samples.from_function(GRID, lambda t: t**-0.5, origin_power=-0.5, origin_coefficient=1.0)
    out = prabhakar_integral_num(f, spec)
    assert out.origin_power == pytest.approx(-0.3)
    assert out.values[0] == pytest.approx(math.gamma(0.5) / math.gamma(0.7))
    assert rel(out.values[1:], monomial_image(spec, 0.5, GRID.t[1:])) < 1e-5


def test_derivatives_of_one_plus_t_squared():
    f = Samples.from_function(GRID, lambda t: 1 + t**2)
    hs = HilferSpec(SPEC, 0.4)
    t = GRID.t
    m = interior(GRID)
    const = monomial_image(SPEC, 1.0, t[m], -1)
    quad = monomial_image(SPEC, 3.0, t[m], -1)
    assert rel(prabhakar_derivative_num(f, SPEC, 1).values[m], const + quad) < 1e-4
    assert rel(hilfer_prabhakar_num(f, hs).values[m], const + quad) < 1e-4
    assert rel(reg_prabhakar_derivative_num(f, SPEC, 1).values[m], quad) < 1e-3
    assert rel(reg_hilfer_prabhakar_num(f, hs).values[m], quad) < 1e-3


def test_singular_constant_part_is_reported():
    f = Samples.from_function(GRID, lambda t: 2 + t)
    out = prabhakar_derivative_num(f, SPEC, 1)
    assert out.origin_power == pytest.approx(-SPEC.rho)
    assert out.values[0] == pytest.approx(2 / math.gamma(1 - SPEC.rho))


def test_second_order_derivative():
    spec = KernelSpec(0.8, 1.5, 0.5, -0.3)
    f = Samples.from_function(GRID, lambda t: t**3)
    m = interior(GRID)
    m[-2:] = False  # nested one-sided difference stencils at the right edge
    exact = monomial_image(spec, 4.0, GRID.t[m], -1)
    assert rel(reg_prabhakar_derivative_num(f, spec, 2).values[m], exact) < 1e-3
    assert rel(prabhakar_derivative_num(f, spec, 2).values[m], exact) < 1e-3


def test_hilfer_endpoints_match_prabhakar_forms():
    f = Samples.from_function(GRID, lambda t: np.cos(t) + t)
    m = interior(GRID)
    rl = prabhakar_derivative_num(f, SPEC, 1).values[m]
    reg = reg_prabhakar_derivative_num(f, SPEC, 1).values[m]
    assert np.abs(hilfer_prabhakar_num(f, HilferSpec(SPEC, 0.0)).values[m] - rl).max() < 1e-6
    assert np.abs(hilfer_prabhakar_num(f, HilferSpec(SPEC, 1.0)).values[m] - reg).max() < 1e-6
    for nu in (0.0, 0.3, 1.0):
        assert np.abs(reg_hilfer_prabhakar_num(f, HilferSpec(SPEC, nu)).values - reg_prabhakar_derivative_num(f, SPEC, 1).values).max() < 1e-12


def test_derivative_inverts_integral():
    f = Samples.from_function(GRID, lambda t: 1 + np.sin(2 * t))
    m = interior(GRID)
    back = prabhakar_derivative_num(prabhakar_integral_num(f, SPEC), SPEC, 1)
    assert np.abs(back.values[m] - f.values[m]).max() < 1e-3


def test_constant_has_zero_regularized_derivative():
    f = Samples(GRID, np.full(GRID.n, 3.0))
    hs = HilferSpec(SPEC, 0.5)
    assert np.abs(reg_hilfer_prabhakar_num(f, hs).values).max() < 1e-12
    assert np.abs(reg_prabhakar_derivative_num(f, SPEC, 1).values).max() < 1e-12


def test_zero_order_and_order_errors():
    f = Samples.from_function(GRID, np.cos)
    assert prabhakar_integral_num(f, SPEC.with_(rho=0.0)) is f
    with pytest.raises(InvalidOrder):
        prabhakar_integral_num(f, SPEC.with_(rho=-0.5))
    with pytest.raises(InvalidOrder):
        prabhakar_derivative_num(f, SPEC, 2)
    with pytest.raises(InvalidOrder):
        reg_prabhakar_derivative_num(f, SPEC.with_(rho=0.0), 0)
    tiny = Samples(Grid(0.1, 2), np.ones(2))
    with pytest.raises(GridTooCoarse):
        prabhakar_derivative_num(tiny, SPEC, 1)
    with pytest.raises(GridTooCoarse):
        hilfer_prabhakar_num(tiny, HilferSpec(SPEC, 0.5))
    singular = Samples.from_function(GRID, lambda t: t**-0.5, -0.5, 1.0)
    with pytest.raises(ValueError):
        reg_hilfer_prabhakar_num(singular, HilferSpec(SPEC, 0.5))


def test_grid_and_samples_plumbing():
    g = Grid.covering(1.0, 0.3)
    assert g.n == 5 and g.t_end == pytest.approx(1.2)
    assert Grid.covering(1.0, 0.25).index_of(0.75) == 3
    with pytest.raises(ValueError):
        g.index_of(0.1)
    with pytest.raises(ValueError):
        Grid(0.0, 4)
    with pytest.raises(GridTooCoarse):
        Grid(0.1, 1)
    with pytest.raises(ValueError):
        Samples(g, np.ones(3))
    with pytest.raises(ValueError):
        Samples(g, np.ones(5), origin_power=-1.0)
    with pytest.raises(ValueError):
        Samples.from_function(g, lambda t: t**-0.5, origin_power=-0.5)
    s = Samples(g, np.arange(5.0))
    with pytest.raises(ValueError):
        s.values[0] = 1.0
    assert np.allclose((s + s - s.scaled(0.5)).values, 1.5 * np.arange(5.0))
    f = s.as_function(outside=-1.0)
    assert f(np.array([0.45, 5.0])) == pytest.approx([1.5, -1.0])


def test_weight_tables_are_kernel_primitives():
    K1, K2 = toeplitz_weights(SPEC, GRID)
    t = GRID.dt * np.arange(len(K1))
    assert K1[0] == 0 and K2[0] == 0
    j = 100
    assert K1[j] == pytest.approx(monomial_image(SPEC, 1.0, t[j]), rel=1e-12)
    assert K2[j] == pytest.approx(monomial_image(SPEC, 2.0, t[j]), rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(r1=st.floats(0.2, 1.2), r2=st.floats(0.2, 1.2), g1=st.floats(0.0, 1.5), g2=st.floats(0.0, 1.5))
def test_integral_semigroup(r1, r2, g1, g2):
    grid = Grid.covering(1.0, 1 / 256)
    # smooth start keeps the intermediate result resolvable on the grid
    f = Samples.from_function(grid, lambda t: t**2 * np.cos(3 * t))
    a, w = 0.7, -0.4
    twice = prabhakar_integral_num(prabhakar_integral_num(f, KernelSpec(a, r2, g2, w)), KernelSpec(a, r1, g1, w))
    once = prabhakar_integral_num(f, KernelSpec(a, r1 + r2, g1 + g2, w))
    assert np.abs(twice.values - once.values).max() < 1e-4 * (1 + np.abs(once.values).max())


@settings(max_examples=15, deadline=None)
@given(c1=st.floats(-3, 3), c2=st.floats(-3, 3), nu=st.floats(0, 1))
def test_operators_are_linear(c1, c2, nu):
    grid = Grid.covering(1.0, 1 / 128)
    f = Samples.from_function(grid, lambda t: np.exp(-t))
    g = Samples.from_function(grid, lambda t: t**2 + 0.5)
    h = HilferSpec(SPEC, nu)
    combo = f.scaled(c1) + g.scaled(c2)
    for op in (lambda u: hilfer_prabhakar_num(u, h), lambda u: reg_hilfer_prabhakar_num(u, h),
               lambda u: prabhakar_integral_num(u, SPEC)):
        lhs = op(combo).values[1:]
        rhs = c1 * op(f).values[1:] + c2 * op(g).values[1:]
        assert np.abs(lhs - rhs).max() <= 1e-10 * (1 + np.abs(rhs).max())


def test_refinement_is_second_order_for_smooth_integrands():
    def err(dt):
        grid = Grid.covering(1.0, dt)
        out = prabhakar_integral_num(Samples.from_function(grid, lambda t: np.exp(t)), SPEC)
        exact = sum(monomial_image(SPEC, k + 1.0, grid.t[1:]) / math.factorial(k) for k in range(25))
        return np.abs(out.values[1:] - exact).max()

    assert err(1 / 64) / err(1 / 128) > 3.0
