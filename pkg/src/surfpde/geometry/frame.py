"""Metric frames, co-normals and curvature derived from a chart.

All functions are pure and vectorized: parameter arguments broadcast, and
every returned array carries the broadcast shape (with a trailing axis of
size 3 for vectors).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateMetric
from .chart import INTERFACE, PHYSICAL, BoundarySegment, Chart

# Degeneracy tolerance on the metric determinant.
EPS_G = 1e-14


@dataclass(frozen=True)
class FrameData:
    """First-fundamental-form data at one or many parameter points.

    ``g1``/``g2`` are the tangent vectors, ``g_ab`` the 2x2 metric,
    ``ginv_ab`` its inverse, ``G`` the determinant, ``gup1``/``gup2`` the
    dual tangent vectors and ``n`` the unit normal ``g1 x g2 / |g1 x g2|``.
    """

    g1: np.ndarray
    g2: np.ndarray
    g_ab: np.ndarray
    ginv_ab: np.ndarray
    G: np.ndarray
    sqrtG: np.ndarray
    gup1: np.ndarray
    gup2: np.ndarray
    n: np.ndarray


def metric_components(chart: Chart, X, t: float):
    """Raw metric pieces (g1, g2, g11, g12, g22, G, sqrtG) at points ``X``.

    Cheaper than :func:`frame` for hot loops; performs no degeneracy check.
    """
    r = np.asarray(X[0], dtype=float)
    s = np.asarray(X[1], dtype=float)
    g1, g2 = chart.d_map(r, s, t)
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    g11 = np.einsum("...i,...i->...", g1, g1)
    g12 = np.einsum("...i,...i->...", g1, g2)
    g22 = np.einsum("...i,...i->...", g2, g2)
    G = g11 * g22 - g12 * g12
    cross = np.cross(g1, g2)
    sqrtG = np.sqrt(np.einsum("...i,...i->...", cross, cross))
    return g1, g2, g11, g12, g22, G, sqrtG, cross


def frame(
    chart: Chart,
    X,
    t: float,
    *,
    allow_degenerate: bool = False,
    eps_g: float = EPS_G,
) -> FrameData:
    """Evaluate the full metric frame of ``chart`` at parameter points ``X``.

    Parameters
    ----------
    X : pair (r, s) of broadcastable arrays
    allow_degenerate : bool
        Permit a vanishing determinant (pole edges); degenerate entries get
        zeroed inverse metric and normal instead of raising.

    Raises
    ------
    DegenerateMetric
        If the determinant falls at or below ``eps_g`` anywhere and
        ``allow_degenerate`` is False.
    """
    g1, g2, g11, g12, g22, G, sqrtG, cross = metric_components(chart, X, t)
    ok = G > eps_g
    if not allow_degenerate and not np.all(ok):
        gmin = float(np.min(G))
        raise DegenerateMetric(
            f"chart {chart.name!r}: metric determinant {gmin:.3e} <= {eps_g:g} "
            f"at a non-pole point (t={t!r})"
        )
    safe_G = np.where(ok, G, 1.0)
    inv11 = np.where(ok, g22 / safe_G, 0.0)
    inv12 = np.where(ok, -g12 / safe_G, 0.0)
    inv22 = np.where(ok, g11 / safe_G, 0.0)
    safe_sqrtG = np.where(sqrtG > 0.0, sqrtG, 1.0)
    n = cross / safe_sqrtG[..., None]
    n = np.where(ok[..., None], n, 0.0)
    gup1 = inv11[..., None] * g1 + inv12[..., None] * g2
    gup2 = inv12[..., None] * g1 + inv22[..., None] * g2
    g_ab = np.stack(
        [np.stack([g11, g12], axis=-1), np.stack([g12, g22], axis=-1)], axis=-2
    )
    ginv_ab = np.stack(
        [np.stack([inv11, inv12], axis=-1), np.stack([inv12, inv22], axis=-1)], axis=-2
    )
    return FrameData(g1, g2, g_ab, ginv_ab, G, sqrtG, gup1, gup2, n)


def conormal(chart: Chart, seg: BoundarySegment, ell, t: float) -> np.ndarray:
    """Unit outer co-normal along a physical or interface edge.

    Computed as ``unit(n1_u g2 - n2_u g1) x n``; the result is unit length,
    tangent to the surface and orthogonal to ``n`` by construction.
    """
    role = chart.roles[seg.edge]
    if role.kind not in (PHYSICAL, INTERFACE):
        raise ValueError(
            f"co-normal undefined on {role.kind!r} edge {seg.edge!r} of {chart.name!r}"
        )
    fr = frame(chart, seg.points(ell), t)
    tau = seg.n_u[0] * fr.g2 - seg.n_u[1] * fr.g1
    tlen = np.sqrt(np.einsum("...i,...i->...", tau, tau))
    if np.any(tlen <= 0.0):
        raise DegenerateMetric(
            f"chart {chart.name!r}: zero boundary line element on edge {seg.edge!r}"
        )
    return np.cross(tau / tlen[..., None], fr.n)


def boundary_line_element(chart: Chart, seg: BoundarySegment, ell, t: float) -> np.ndarray:
    """Length density |n1_u g2 - n2_u g1| along an edge."""
    fr = frame(chart, seg.points(ell), t, allow_degenerate=True)
    tau = seg.n_u[0] * fr.g2 - seg.n_u[1] * fr.g1
    return np.sqrt(np.einsum("...i,...i->...", tau, tau))


def second_derivatives(chart: Chart, X, t: float):
    """Second derivatives (x11, x12, x22) of the chart map.

    Uses the analytic callback when the chart provides one, otherwise
    central differences of ``d_map`` with step ``chart.fd_h`` (the mixed
    derivative is symmetrized).
    """
    r = np.asarray(X[0], dtype=float)
    s = np.asarray(X[1], dtype=float)
    if chart.d2_map is not None:
        x11, x12, x22 = chart.d2_map(r, s, t)
        return np.asarray(x11, float), np.asarray(x12, float), np.asarray(x22, float)
    h = chart.fd_h
    g1_rp, g2_rp = chart.d_map(r + h, s, t)
    g1_rm, g2_rm = chart.d_map(r - h, s, t)
    g1_sp, g2_sp = chart.d_map(r, s + h, t)
    g1_sm, g2_sm = chart.d_map(r, s - h, t)
    x11 = (np.asarray(g1_rp, float) - np.asarray(g1_rm, float)) / (2.0 * h)
    x22 = (np.asarray(g2_sp, float) - np.asarray(g2_sm, float)) / (2.0 * h)
    x12_a = (np.asarray(g2_rp, float) - np.asarray(g2_rm, float)) / (2.0 * h)
    x12_b = (np.asarray(g1_sp, float) - np.asarray(g1_sm, float)) / (2.0 * h)
    x12 = 0.5 * (x12_a + x12_b)
    return x11, x12, x22


def weingarten_coeffs(chart: Chart, X, t: float):
    """Coefficients (c1, c2, c3, c4) expanding the normal derivatives.

    The derivatives of the unit normal lie in the tangent plane:
    ``dn/dX1 = c1 g1 + c2 g2`` and ``dn/dX2 = c3 g1 + c4 g2``, with the
    coefficients given by closed-form quotients of metric and second
    fundamental form entries.
    """
    fr = frame(chart, X, t)
    x11, x12, x22 = second_derivatives(chart, X, t)
    L = np.einsum("...i,...i->...", x11, fr.n)
    M = np.einsum("...i,...i->...", x12, fr.n)
    N = np.einsum("...i,...i->...", x22, fr.n)
    g11 = fr.g_ab[..., 0, 0]
    g12 = fr.g_ab[..., 0, 1]
    g22 = fr.g_ab[..., 1, 1]
    c1 = (g12 * M - g22 * L) / fr.G
    c2 = (g12 * L - g11 * M) / fr.G
    c3 = (g12 * N - g22 * M) / fr.G
    c4 = (g12 * M - g11 * N) / fr.G
    return c1, c2, c3, c4


def mean_curvature(chart: Chart, X, t: float) -> np.ndarray:
    """Mean curvature ``H = -div_surface(n)`` in the chart's own orientation.

    With the chart normal pointing outward on a sphere of radius ``a`` this
    evaluates to ``-2/a``; magnitudes are orientation-independent.
    """
    c1, _, _, c4 = weingarten_coeffs(chart, X, t)
    return -(c1 + c4)


def normal(chart: Chart, X, t: float) -> np.ndarray:
    """Unit normal ``g1 x g2 / |g1 x g2|`` at parameter points ``X``."""
    return frame(chart, X, t).n


def normal_fd_derivatives(chart: Chart, X, t: float, h: float | None = None):
    """(dn/dX1, dn/dX2) by central differences of the unit normal.

    Independent of the closed-form route in :func:`weingarten_coeffs`;
    used to cross-check the reconstruction identity.
    """
    r = np.asarray(X[0], dtype=float)
    s = np.asarray(X[1], dtype=float)
    h = chart.fd_h if h is None else h
    n_rp = frame(chart, (r + h, s), t).n
    n_rm = frame(chart, (r - h, s), t).n
    n_sp = frame(chart, (r, s + h), t).n
    n_sm = frame(chart, (r, s - h), t).n
    return (n_rp - n_rm) / (2.0 * h), (n_sp - n_sm) / (2.0 * h)
