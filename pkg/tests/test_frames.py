"""Metric frame invariants and identities."""

import numpy as np
import pytest

from surfpde.bubble import charts_for
from surfpde.errors import DegenerateMetric
from surfpde.geometry import (
    Chart,
    frame,
    normal,
    physical,
    validate_chart,
)
from surfpde.geometry.library import full_sphere, sphere_cap

from conftest import interior_points

# Reference interface radius squared for (a, b, m) = (1, 1.2, 0.8):
# n = (1 - 1.44) / 3.2 = -0.1375, R^2 = 1 - 0.6625^2.
R2_REF = 0.56109375


def test_dual_basis_identity(chart_corpus, rng):
    for chart in chart_corpus:
        r, s = interior_points(chart, rng, 100)
        fr = frame(chart, (r, s), 0.0)
        assert np.max(np.abs(np.einsum("...i,...i->...", fr.gup1, fr.g1) - 1.0)) < 1e-12
        assert np.max(np.abs(np.einsum("...i,...i->...", fr.gup2, fr.g2) - 1.0)) < 1e-12
        assert np.max(np.abs(np.einsum("...i,...i->...", fr.gup1, fr.g2))) < 1e-12
        assert np.max(np.abs(np.einsum("...i,...i->...", fr.gup2, fr.g1))) < 1e-12


def test_inverse_metric_and_determinant(chart_corpus, rng):
    eye = np.eye(2)
    for chart in chart_corpus:
        r, s = interior_points(chart, rng, 100)
        fr = frame(chart, (r, s), 0.0)
        prod = np.einsum("...ij,...jk->...ik", fr.ginv_ab, fr.g_ab)
        assert np.max(np.abs(prod - eye)) < 1e-12
        # determinant equals the sum of the three squared Jacobian minors
        assert np.max(np.abs(fr.G - fr.sqrtG**2) / np.maximum(fr.G, 1e-30)) < 1e-12
        spd = fr.g_ab[..., 0, 0] > 0
        assert np.all(spd) and np.all(fr.G > 0)


def test_normal_unit_and_orthogonal(chart_corpus, rng):
    for chart in chart_corpus:
        r, s = interior_points(chart, rng, 100)
        fr = frame(chart, (r, s), 0.0)
        assert np.max(np.abs(np.linalg.norm(fr.n, axis=-1) - 1.0)) < 1e-12
        assert np.max(np.abs(np.einsum("...i,...i->...", fr.n, fr.g1))) < 1e-12
        assert np.max(np.abs(np.einsum("...i,...i->...", fr.n, fr.g2))) < 1e-12


def test_cross_product_identities(chart_corpus, rng):
    # gup1 sqrtG = g2 x n, gup2 sqrtG = -(g1 x n)
    for chart in chart_corpus:
        r, s = interior_points(chart, rng, 100)
        fr = frame(chart, (r, s), 0.0)
        assert np.max(np.abs(fr.gup1 * fr.sqrtG[..., None] - np.cross(fr.g2, fr.n))) < 1e-10
        assert np.max(np.abs(fr.gup2 * fr.sqrtG[..., None] + np.cross(fr.g1, fr.n))) < 1e-10


def test_septum_disc_metric_oracle(reference_bubble):
    # Flat septum chart: G = R^4 r^2, computed independently from the
    # interface radius formula; value frozen at r=0.5.
    chart = charts_for(reference_bubble, 0.0)["S"]
    fr = frame(chart, (0.5, 0.0), 0.0)
    expected = R2_REF**2 * 0.25
    assert expected == pytest.approx(0.078706549072265625, abs=0.0)
    assert float(fr.G) == pytest.approx(expected, rel=1e-14)
    # normal is the plane normal +-e1
    assert abs(abs(float(fr.n[0])) - 1.0) < 1e-14
    assert np.max(np.abs(fr.n[1:])) < 1e-14


def test_sphere_normal_parallel_to_position(rng):
    chart = full_sphere(radius0=1.0)
    r, s = interior_points(chart, rng, 100)
    n = normal(chart, (r, s), 0.0)
    x = chart.map(r, s, 0.0)
    assert np.max(np.linalg.norm(np.cross(n, x), axis=-1)) < 1e-12
    assert np.max(np.abs(np.linalg.norm(n, axis=-1) - 1.0)) < 1e-12


def test_degenerate_metric_raises():
    def bad_map(r, s, t):
        out = np.empty(np.broadcast(r, s).shape + (3,))
        out[..., 0] = r
        out[..., 1] = r
        out[..., 2] = 0.0
        return out

    def bad_d(r, s, t):
        shape = np.broadcast(r, s).shape
        g1 = np.zeros(shape + (3,))
        g1[..., 0] = 1.0
        g1[..., 1] = 1.0
        g2 = np.zeros(shape + (3,))
        return g1, g2

    fold = Chart(
        name="fold",
        map=bad_map,
        d_map=bad_d,
        dt_map=lambda r, s, t: np.zeros(np.broadcast(r, s).shape + (3,)),
        domain=(0.0, 1.0, 0.0, 1.0),
        roles={e: physical() for e in ("r0", "r1", "s0", "s1")},
    )
    with pytest.raises(DegenerateMetric):
        frame(fold, (0.5, 0.5), 0.0)
    # allow_degenerate gives zeroed inverse instead
    fr = frame(fold, (0.5, 0.5), 0.0, allow_degenerate=True)
    assert float(fr.sqrtG) == 0.0


def test_pole_edge_permits_degeneracy():
    chart = sphere_cap()
    fr = frame(chart, (0.0, 1.0), 0.0, allow_degenerate=True)
    assert float(fr.sqrtG) == pytest.approx(0.0, abs=1e-14)


def test_periodic_edges_agree(chart_corpus):
    for chart in chart_corpus:
        validate_chart(chart, 0.3, tol=1e-12)
