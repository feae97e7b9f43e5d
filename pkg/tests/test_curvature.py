"""Mean curvature and the normal-derivative expansion coefficients."""

import dataclasses

import numpy as np
import pytest

from surfpde.bubble import charts_for
from surfpde.geometry import frame, mean_curvature, normal_fd_derivatives, weingarten_coeffs
from surfpde.geometry.library import (
    cylinder,
    disc,
    plane,
    random_graph_chart,
    sphere_cap,
)

from conftest import interior_points


def test_plane_coefficients_vanish(rng):
    chart = plane()
    r, s = interior_points(chart, rng, 50)
    coeffs = weingarten_coeffs(chart, (r, s), 0.0)
    for c in coeffs:
        assert np.max(np.abs(c)) < 1e-12


def test_sphere_mean_curvature_sign_and_magnitude(rng):
    # Chart normal points outward, so H = -div(n) = -2/a.
    for a in (1.0, 2.0):
        chart = sphere_cap(radius0=a, angle=np.pi / 3.0)
        r, s = interior_points(chart, rng, 50)
        h_val = mean_curvature(chart, (r, s), 0.0)
        assert np.max(np.abs(h_val + 2.0 / a)) < 1e-11
        # trace of the expansion coefficients reproduces div(n)
        c1, _, _, c4 = weingarten_coeffs(chart, (r, s), 0.0)
        assert np.max(np.abs((c1 + c4) - 2.0 / a)) < 1e-11


def test_disc_and_cylinder_curvature(rng):
    r, s = interior_points(disc(), rng, 50)
    assert np.max(np.abs(mean_curvature(disc(), (r, s), 0.0))) < 1e-12
    r, s = interior_points(cylinder(), rng, 50)
    assert np.max(np.abs(np.abs(mean_curvature(cylinder(), (r, s), 0.0)) - 1.0)) < 1e-11


def test_cylinder_curvature_fd_mode(rng):
    chart = dataclasses.replace(cylinder(), d2_map=None)
    r, s = interior_points(chart, rng, 50)
    assert np.max(np.abs(np.abs(mean_curvature(chart, (r, s), 0.0)) - 1.0)) < 1e-7


def test_bubble_cap_curvature_magnitudes(reference_bubble):
    # |H| = 2/a on the A cap, 2/b on the B cap, 0 on the septum disc
    # (finite-difference second derivatives).
    charts = charts_for(reference_bubble, 0.0)
    pts = (np.array([0.3, 0.6, 0.85]), np.array([0.5, 2.0, 4.0]))
    for patch, expected in (("A1", 2.0), ("A2", 2.0), ("B1", 2.0 / 1.2), ("B2", 2.0 / 1.2), ("S", 0.0)):
        h_val = mean_curvature(charts[patch], pts, 0.0)
        assert np.max(np.abs(np.abs(h_val) - expected)) < 1e-6


def _reconstruction_residual(chart, rng, n=60):
    r, s = interior_points(chart, rng, n)
    c1, c2, c3, c4 = weingarten_coeffs(chart, (r, s), 0.0)
    fr = frame(chart, (r, s), 0.0)
    dn1, dn2 = normal_fd_derivatives(chart, (r, s), 0.0)
    res1 = dn1 - (c1[..., None] * fr.g1 + c2[..., None] * fr.g2)
    res2 = dn2 - (c3[..., None] * fr.g1 + c4[..., None] * fr.g2)
    return max(float(np.max(np.abs(res1))), float(np.max(np.abs(res2))))


def test_reconstruction_on_random_graphs(rng):
    for _ in range(5):
        chart = random_graph_chart(rng)
        assert _reconstruction_residual(chart, rng) < 1e-8
        fd_chart = dataclasses.replace(chart, d2_map=None)
        assert _reconstruction_residual(fd_chart, rng) < 1e-6


def test_random_graph_cross_identities(rng):
    for _ in range(5):
        chart = random_graph_chart(rng)
        r, s = interior_points(chart, rng, 100)
        fr = frame(chart, (r, s), 0.0)
        assert np.max(np.abs(fr.gup1 * fr.sqrtG[..., None] - np.cross(fr.g2, fr.n))) < 1e-10
        assert np.max(np.abs(fr.gup2 * fr.sqrtG[..., None] + np.cross(fr.g1, fr.n))) < 1e-10
