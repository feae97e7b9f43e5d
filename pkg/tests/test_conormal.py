"""Co-normal formula and boundary quadrature."""

import numpy as np
import pytest

from surfpde.bubble import charts_for
from surfpde.geometry import (
    BoundarySegment,
    boundary_integral,
    boundary_segments,
    conormal,
    frame,
)
from surfpde.geometry.library import disc, plane, sphere_polar

from conftest import interior_points


def test_plane_edge_conormal():
    chart = plane()
    seg = BoundarySegment.for_edge(chart, "r1")
    nu = conormal(chart, seg, np.array([0.25, 0.75]), 0.0)
    assert np.max(np.abs(nu - np.array([1.0, 0.0, 0.0]))) < 1e-14


def test_disc_edge_conormal_is_radial():
    chart = disc(radius=1.0)
    seg = BoundarySegment.for_edge(chart, "r1")
    theta = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
    nu = conormal(chart, seg, theta, 0.0)
    expected = np.stack([np.cos(theta), np.sin(theta), np.zeros_like(theta)], axis=-1)
    assert np.max(np.abs(nu - expected)) < 1e-13


def test_septum_conormal_matches_closed_form(reference_bubble):
    chart = charts_for(reference_bubble, 0.0)["S"]
    seg = BoundarySegment.for_edge(chart, "r1")
    theta = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
    nu = conormal(chart, seg, theta, 0.0)
    expected = np.stack([np.zeros_like(theta), np.cos(theta), np.sin(theta)], axis=-1)
    assert np.max(np.abs(nu - expected)) < 1e-12


def test_cap_a2_conormal_value(reference_bubble):
    # At theta = 0 the outer co-normal of the A cap on the interface circle
    # is (R/a, -(m+n)/a, 0) with R = sqrt(0.56109375).
    chart = charts_for(reference_bubble, 0.0)["A2"]
    seg = BoundarySegment.for_edge(chart, "r1")
    nu = conormal(chart, seg, np.array([0.0]), 0.0)[0]
    r_val = np.sqrt(0.56109375)
    assert nu[0] == pytest.approx(r_val, abs=1e-12)
    assert nu[1] == pytest.approx(-0.6625, abs=1e-12)
    assert abs(nu[2]) < 1e-14


def test_conormal_unit_tangent_outward(chart_corpus, rng):
    for chart in chart_corpus:
        for seg in boundary_segments(chart):
            ell = np.linspace(seg.a, seg.b, 17)[1:-1]
            nu = conormal(chart, seg, ell, 0.0)
            fr = frame(chart, seg.points(ell), 0.0)
            assert np.max(np.abs(np.linalg.norm(nu, axis=-1) - 1.0)) < 1e-12
            assert np.max(np.abs(np.einsum("...i,...i->...", nu, fr.n))) < 1e-12
            # outwardness: the parameter-space pullback of nu crosses the edge
            d1 = np.einsum("...i,...i->...", nu, fr.gup1)
            d2 = np.einsum("...i,...i->...", nu, fr.gup2)
            outward = d1 * seg.n_u[0] + d2 * seg.n_u[1]
            assert np.all(outward > 0.0)


def test_boundary_integral_disc_circumference():
    for radius in (1.0, 0.8):
        chart = disc(radius=radius)
        seg = BoundarySegment.for_edge(chart, "r1")
        length = boundary_integral(chart, seg, 1.0, 0.0, m=256)
        assert length == pytest.approx(2.0 * np.pi * radius, rel=1e-12)


def test_boundary_integral_equator():
    chart = sphere_polar(1.0, 0.0, 0.0, np.pi / 2.0)
    seg = BoundarySegment.for_edge(chart, "r1")
    length = boundary_integral(chart, seg, 1.0, 0.0, m=128)
    assert length == pytest.approx(2.0 * np.pi, rel=1e-12)


def test_boundary_integral_zero_and_roles():
    chart = disc()
    seg = BoundarySegment.for_edge(chart, "r1")
    assert boundary_integral(chart, seg, 0.0, 0.0, m=64) == 0.0
    pole_seg = BoundarySegment.for_edge(chart, "r0")
    with pytest.raises(ValueError):
        boundary_integral(chart, pole_seg, 1.0, 0.0, m=64)
    with pytest.raises(ValueError):
        conormal(chart, pole_seg, np.array([0.1]), 0.0)


def test_boundary_integral_convergence_order():
    # Non-periodic edge so the midpoint rule shows its genuine second order.
    chart = plane()
    seg = BoundarySegment.for_edge(chart, "s0")

    def f(x, t):
        return np.cos(3.0 * x[..., 0]) + x[..., 0] ** 3

    errs = []
    ref = boundary_integral(chart, seg, f, 0.0, m=8192)
    for m in (8, 16, 32, 64):
        errs.append(abs(boundary_integral(chart, seg, f, 0.0, m=m) - ref))
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    assert min(orders) > 1.9
