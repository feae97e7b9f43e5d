"""Grid operators and quadrature: gradients, divergence, integrals."""

import numpy as np
import pytest

from surfpde.calculus import pointwise_divergence
from surfpde.geometry import (
    ParamGrid,
    frame,
    mean_curvature,
    surface_divergence,
    surface_gradient,
    surface_integral,
)
from surfpde.geometry.library import (
    disc,
    full_sphere,
    hemisphere_pair,
    plane,
    sphere_cap,
)

from conftest import interior_points


def test_gradient_of_constant_is_zero():
    chart = sphere_cap()
    grid = ParamGrid.from_chart(chart, 16, 16)
    grad = surface_gradient(chart, grid, np.ones((16, 16)), 0.0)
    assert np.max(np.abs(grad)) == 0.0


def test_plane_affine_gradient_exact():
    chart = plane()
    grid = ParamGrid.from_chart(chart, 16, 16)
    R, S = grid.centers()
    grad = surface_gradient(chart, grid, R, 0.0)
    assert np.max(np.abs(grad - np.array([1.0, 0.0, 0.0]))) < 1e-13


def test_gradient_tangency(chart_corpus):
    for chart in chart_corpus:
        grid = ParamGrid.from_chart(chart, 16, 16)
        R, S = grid.centers()
        u = np.sin(R + 0.3) * np.cos(S)
        grad = surface_gradient(chart, grid, u, 0.0)
        n = frame(chart, grid.centers(), 0.0).n
        assert np.max(np.abs(np.einsum("...i,...i->...", grad, n))) < 1e-12


def test_sphere_tangential_gradient_magnitude():
    # u = x3 on the unit sphere: |grad u|^2 = 1 - x3^2
    chart = full_sphere()
    errs = []
    for n in (32, 64):
        grid = ParamGrid.from_chart(chart, n, n)
        R, S = grid.centers()
        x = chart.map(R, S, 0.0)
        grad = surface_gradient(chart, grid, x[..., 2], 0.0)
        mag2 = np.einsum("...i,...i->...", grad, grad)
        errs.append(np.max(np.abs(mag2 - (1.0 - x[..., 2] ** 2))))
    assert errs[1] < errs[0] / 3.0  # second order
    assert errs[1] < 2e-3


def test_divergence_trivial_and_position():
    chart = plane()
    grid = ParamGrid.from_chart(chart, 16, 16)
    R, S = grid.centers()
    const = np.broadcast_to(np.array([0.3, -0.2, 0.7]), (16, 16, 3)).copy()
    assert np.max(np.abs(surface_divergence(chart, grid, const, 0.0))) == 0.0
    x = chart.map(R, S, 0.0)
    div = surface_divergence(chart, grid, x, 0.0)
    assert np.max(np.abs(div - 2.0)) < 1e-13


def test_pointwise_divergence_of_position_is_two(chart_corpus, rng):
    for chart in chart_corpus:
        r, s = interior_points(chart, rng, 40)
        div = pointwise_divergence(chart, lambda x, t: x, (r, s), 0.0)
        assert np.max(np.abs(div - 2.0)) < 1e-8


def test_divergence_of_normal_matches_curvature(rng):
    chart = full_sphere()
    r, s = interior_points(chart, rng, 40, pad=0.1)

    def unit_normal_field(x, t):
        return x / np.linalg.norm(x, axis=-1)[..., None]

    div = pointwise_divergence(chart, unit_normal_field, (r, s), 0.0)
    h_val = mean_curvature(chart, (r, s), 0.0)
    assert np.max(np.abs(div + h_val)) < 1e-7
    assert np.max(np.abs(np.abs(div) - 2.0)) < 1e-8


def test_sphere_area_from_two_caps_convergence():
    north, south = hemisphere_pair()
    errs = []
    for n in (8, 16, 32, 64):
        total = 0.0
        for chart in (north, south):
            grid = ParamGrid.from_chart(chart, n, n)
            total += surface_integral(chart, grid, np.ones((n, n)), 0.0)
        errs.append(abs(total - 4.0 * np.pi))
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    assert min(orders) > 1.9


def test_disc_area():
    chart = disc(radius=0.8)
    grid = ParamGrid.from_chart(chart, 64, 32)
    area = surface_integral(chart, grid, np.ones((64, 32)), 0.0)
    assert area == pytest.approx(np.pi * 0.64, rel=1e-12)
    assert surface_integral(chart, grid, np.zeros((64, 32)), 0.0) == 0.0


def test_septum_disc_area(reference_bubble):
    from surfpde.bubble import charts_for

    chart = charts_for(reference_bubble, 0.0)["S"]
    grid = ParamGrid.from_chart(chart, 64, 32)
    area = surface_integral(chart, grid, np.ones((64, 32)), 0.0)
    assert area == pytest.approx(np.pi * 0.56109375, rel=1e-12)


def test_surface_integral_convergence_generic():
    chart = sphere_cap(angle=np.pi / 3.0)

    def f(x, t):
        return np.cos(2.0 * x[..., 1]) + x[..., 0]

    vals = {}
    for n in (16, 32, 64, 128, 2048):
        grid = ParamGrid.from_chart(chart, n, 64)
        vals[n] = surface_integral(chart, grid, grid.sample(chart, f, 0.0), 0.0)
    errs = [abs(vals[n] - vals[2048]) for n in (16, 32, 64, 128)]
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    assert min(orders) > 1.9
