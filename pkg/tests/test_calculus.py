"""Residuals of the integral identities."""

import numpy as np
import pytest

from surfpde.calculus import (
    EdgePairing,
    ResidualReport,
    divergence_theorem_residual,
    dissipation_variation_residual,
    motion_divergence,
    seam_conormal_residual,
    sqrtG_evolution_residual,
    transport_theorem_residual,
    union_divergence_residual,
)
from surfpde.errors import PairingMismatch
from surfpde.geometry import ParamGrid
from surfpde.geometry.library import (
    default_graph,
    disc,
    full_sphere,
    hemisphere_pair,
    plane,
    scaling_plane,
    sphere_cap,
)
from surfpde.solver import EnergyDensity


def phi_yz(x, t):
    out = np.zeros_like(x)
    out[..., 1] = x[..., 1]
    out[..., 2] = x[..., 2]
    return out


def test_report_pass_semantics():
    rep = ResidualReport("x", 2e-3, 1e-3)
    assert not rep.passed
    assert ResidualReport("x", -5e-4, 1e-3).passed


def test_divergence_theorem_disc_term_values():
    # phi = (0, x2, x3) on a disc of radius R: both the divergence integral
    # and the boundary integral equal 2 pi R^2 and the curvature term is 0.
    from surfpde.calculus import _divergence_theorem_terms

    radius = 0.8
    chart = disc(radius=radius)
    grid = ParamGrid.from_chart(chart, 64, 64)
    vol, curv, bnd = _divergence_theorem_terms(chart, phi_yz, 0.0, grid, m_edge=256)
    assert vol == pytest.approx(2.0 * np.pi * radius**2, rel=1e-9)
    assert bnd == pytest.approx(2.0 * np.pi * radius**2, rel=1e-9)
    assert abs(curv) < 1e-9
    rep = divergence_theorem_residual(chart, phi_yz, 0.0, n_r=64, n_s=64, m_edge=256, tolerance=1e-6)
    assert rep.passed


def test_divergence_theorem_zero_field():
    rep = divergence_theorem_residual(
        sphere_cap(), lambda x, t: np.zeros_like(x), 0.0, n_r=16, n_s=16, m_edge=32, tolerance=0.0
    )
    assert rep.value == 0.0 and rep.passed


def test_closed_sphere_terms():
    # On the closed unit sphere with phi = x: integral(div) = 8 pi and the
    # curvature term is -8 pi under the outward-normal sign convention.
    from surfpde.calculus import _divergence_theorem_terms

    north, south = hemisphere_pair()
    vol = curv = 0.0
    for chart in (north, south):
        grid = ParamGrid.from_chart(chart, 96, 96)
        v, c, _ = _divergence_theorem_terms(chart, lambda x, t: x, 0.0, grid, m_edge=2)
        vol += v
        curv += c
    assert vol == pytest.approx(8.0 * np.pi, rel=1e-7)
    assert curv == pytest.approx(-8.0 * np.pi, rel=1e-7)


def test_union_closed_sphere_residual():
    north, south = hemisphere_pair()
    reports = union_divergence_residual(
        [north, south],
        [EdgePairing(0, "r1", 1, "r1")],
        lambda x, t: x,
        0.0,
        n_r=64,
        n_s=64,
        m_edge=128,
        tolerance=1e-6,
        seam_tolerance=1e-10,
    )
    assert all(rep.passed for rep in reports)
    assert len(reports) == 2  # union residual + one seam report


def test_union_empty_pairing_reduces_to_single_chart():
    chart = sphere_cap()
    single = divergence_theorem_residual(chart, phi_yz, 0.0, n_r=32, n_s=32, m_edge=64, tolerance=1.0)
    union = union_divergence_residual(
        [chart], [], phi_yz, 0.0, n_r=32, n_s=32, m_edge=64, tolerance=1.0
    )
    assert len(union) == 1
    assert union[0].value == pytest.approx(single.value, rel=1e-12, abs=1e-15)


def test_pairing_mismatch_raises():
    north, _ = hemisphere_pair()
    other = sphere_cap(radius0=2.0, angle=np.pi / 2.0, name="big_cap")
    with pytest.raises(PairingMismatch):
        seam_conormal_residual([north, other], EdgePairing(0, "r1", 1, "r1"), 0.0)


def test_transport_growing_sphere():
    chart = full_sphere(1.0, 0.1)
    rep = transport_theorem_residual(
        chart, lambda x, t: np.ones(x.shape[:-1]), 0.0, dt=1e-4, n_r=64, n_s=64, tolerance=1e-6
    )
    # both sides approximate d/dt area = 8 pi a a' ~ 2.513274
    assert abs(rep.value) / (8.0 * np.pi * 0.1) < 1e-6


def test_transport_static_chart_zero():
    chart = plane()
    rep = transport_theorem_residual(
        chart, lambda x, t: 1.0 + x[..., 0], 0.0, dt=1e-3, n_r=16, n_s=16, tolerance=1e-12
    )
    assert abs(rep.value) < 1e-12


def test_transport_bubble_moving_interface(reference_bubble):
    from surfpde.bubble import bubble_transport_check

    def f(x, t):
        return 0.5 + 0.3 * x[..., 0] - 0.2 * x[..., 1] * x[..., 2]

    reports = bubble_transport_check(reference_bubble, f, 0.0, dt=1e-3, n_r=128, n_s=128, tolerance=1e-6)
    assert all(rep.passed for rep in reports)


def test_sqrtG_evolution_static_zero():
    res = sqrtG_evolution_residual(plane(), (0.4, 0.6), 0.2, dt=1e-3)
    assert abs(float(res)) < 1e-12


def test_sqrtG_evolution_scaling_plane():
    # d(sqrtG)/dt = 2 (1+t) and div(w) sqrtG = (2/(1+t)) (1+t)^2 agree.
    chart = scaling_plane(1.0)
    t = 0.5
    res = sqrtG_evolution_residual(chart, (0.3, 0.7), t, dt=1e-4)
    assert abs(float(res)) < 1e-9
    divw = float(motion_divergence(chart, (0.3, 0.7), t))
    assert divw == pytest.approx(2.0 / (1.0 + t), rel=1e-9)


def test_sqrtG_evolution_growing_sphere(rng):
    chart = full_sphere(1.0, 0.1)
    r = rng.uniform(0.1, 0.9, size=16)
    s = rng.uniform(0.0, 2.0 * np.pi, size=16)
    res = sqrtG_evolution_residual(chart, (r, s), 0.3, dt=1e-4)
    assert np.max(np.abs(res)) < 1e-8


def _bump(x):
    y = (x - 0.25) * (0.75 - x)
    return np.where((x > 0.25) & (x < 0.75), y**3, 0.0)


def test_variation_linear_affine_is_zero():
    chart = plane()
    grid = ParamGrid.from_chart(chart, 48, 48)
    R, S = grid.centers()
    f_vals = 0.7 * R - 0.3 * S + 0.2
    psi = _bump(R) * _bump(S) * 1e3
    rep = dissipation_variation_residual(
        chart, grid, f_vals, psi, EnergyDensity.linear(), 0.0, eps=1e-4, tolerance=1e-10
    )
    assert rep.passed


@pytest.mark.parametrize("energy", [EnergyDensity.power(1.0), EnergyDensity.log()])
def test_variation_nonlinear_presets(energy):
    chart = plane()
    grid = ParamGrid.from_chart(chart, 64, 64)
    R, S = grid.centers()
    f_vals = 0.4 * np.sin(2 * np.pi * R) * np.cos(np.pi * S) + 0.3 * R * S
    psi = _bump(R) * _bump(S) * 1e3
    rep = dissipation_variation_residual(chart, grid, f_vals, psi, energy, 0.0, eps=1e-4, tolerance=1e-6)
    assert rep.passed


def test_variation_rejects_boundary_supported_field():
    chart = plane()
    grid = ParamGrid.from_chart(chart, 16, 16)
    psi = np.ones((16, 16))
    with pytest.raises(ValueError):
        dissipation_variation_residual(
            chart, grid, np.zeros((16, 16)), psi, EnergyDensity.linear(), 0.0
        )
