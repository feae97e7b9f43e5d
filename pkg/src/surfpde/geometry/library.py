"""Ready-made charts: planes, graphs, cylinders, discs and sphere caps.

Every factory returns a :class:`~surfpde.geometry.chart.Chart` with analytic
first derivatives and motion velocity; all of them also carry analytic
second derivatives, which makes this module the reference corpus for the
curvature and identity tests.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly

from .chart import Chart, interface, periodic, physical, pole


def _vec(shape, a, b, c):
    out = np.empty(shape + (3,), dtype=float)
    out[..., 0] = a
    out[..., 1] = b
    out[..., 2] = c
    return out


def _shape(r, s):
    return np.broadcast(np.asarray(r, float), np.asarray(s, float)).shape


def _zero3(r, s, t):
    return np.zeros(_shape(r, s) + (3,))


def plane(lx: float = 1.0, ly: float = 1.0, name: str = "plane") -> Chart:
    """Flat patch (r, s, 0) over [0, lx] x [0, ly]; all edges physical."""
    return affine_plane(
        origin=(0.0, 0.0, 0.0),
        e1=(1.0, 0.0, 0.0),
        e2=(0.0, 1.0, 0.0),
        lr=lx,
        ls=ly,
        name=name,
    )


def affine_plane(origin, e1, e2, lr: float = 1.0, ls: float = 1.0, name: str = "affine_plane") -> Chart:
    """Planar patch origin + r e1 + s e2 (e1, e2 need not be orthogonal)."""
    o = np.asarray(origin, float)
    a1 = np.asarray(e1, float)
    a2 = np.asarray(e2, float)

    def _map(r, s, t):
        shape = _shape(r, s)
        r = np.broadcast_to(np.asarray(r, float), shape)
        s = np.broadcast_to(np.asarray(s, float), shape)
        return o + r[..., None] * a1 + s[..., None] * a2

    def _d_map(r, s, t):
        shape = _shape(r, s)
        return (
            np.broadcast_to(a1, shape + (3,)).copy(),
            np.broadcast_to(a2, shape + (3,)).copy(),
        )

    def _d2_map(r, s, t):
        z = np.zeros(_shape(r, s) + (3,))
        return z, z.copy(), z.copy()

    return Chart(
        name=name,
        map=_map,
        d_map=_d_map,
        dt_map=_zero3,
        domain=(0.0, lr, 0.0, ls),
        roles={"r0": physical(), "r1": physical(), "s0": physical(), "s1": physical()},
        d2_map=_d2_map,
        static=True,
    )


def scaling_plane(rate: float = 1.0, name: str = "scaling_plane") -> Chart:
    """Uniformly expanding flat patch (1 + rate t)(r, s, 0) over [0, 1]^2."""

    def _map(r, s, t):
        shape = _shape(r, s)
        f = 1.0 + rate * t
        return _vec(shape, f * np.asarray(r, float), f * np.asarray(s, float), 0.0)

    def _d_map(r, s, t):
        shape = _shape(r, s)
        f = 1.0 + rate * t
        return _vec(shape, f, 0.0, 0.0), _vec(shape, 0.0, f, 0.0)

    def _dt_map(r, s, t):
        shape = _shape(r, s)
        return _vec(shape, rate * np.asarray(r, float), rate * np.asarray(s, float), 0.0)

    def _d2_map(r, s, t):
        z = np.zeros(_shape(r, s) + (3,))
        return z, z.copy(), z.copy()

    return Chart(
        name=name,
        map=_map,
        d_map=_d_map,
        dt_map=_dt_map,
        domain=(0.0, 1.0, 0.0, 1.0),
        roles={"r0": physical(), "r1": physical(), "s0": physical(), "s1": physical()},
        d2_map=_d2_map,
    )


def polynomial_graph(coeffs, name: str = "graph", extent: float = 1.0) -> Chart:
    """Static graph chart (r, s, f(r, s)) with polynomial height f.

    ``coeffs[i, j]`` multiplies ``r^i s^j``; derivatives are exact.
    """
    C = np.atleast_2d(np.asarray(coeffs, dtype=float))
    Cr = npoly.polyder(C, axis=0)
    Cs = npoly.polyder(C, axis=1)
    Crr = npoly.polyder(Cr, axis=0)
    Crs = npoly.polyder(Cr, axis=1)
    Css = npoly.polyder(Cs, axis=1)

    def _map(r, s, t):
        return _vec(_shape(r, s), r, s, npoly.polyval2d(r, s, C))

    def _d_map(r, s, t):
        shape = _shape(r, s)
        g1 = _vec(shape, 1.0, 0.0, npoly.polyval2d(r, s, Cr))
        g2 = _vec(shape, 0.0, 1.0, npoly.polyval2d(r, s, Cs))
        return g1, g2

    def _d2_map(r, s, t):
        shape = _shape(r, s)
        x11 = _vec(shape, 0.0, 0.0, npoly.polyval2d(r, s, Crr))
        x12 = _vec(shape, 0.0, 0.0, npoly.polyval2d(r, s, Crs))
        x22 = _vec(shape, 0.0, 0.0, npoly.polyval2d(r, s, Css))
        return x11, x12, x22

    return Chart(
        name=name,
        map=_map,
        d_map=_d_map,
        dt_map=_zero3,
        domain=(0.0, extent, 0.0, extent),
        roles={"r0": physical(), "r1": physical(), "s0": physical(), "s1": physical()},
        d2_map=_d2_map,
        static=True,
    )


def default_graph(name: str = "graph") -> Chart:
    """A gently curved graph patch used throughout the test corpus."""
    coeffs = np.zeros((3, 3))
    coeffs[2, 1] = 0.15   # r^2 s
    coeffs[0, 2] = 0.10   # s^2
    coeffs[1, 1] = -0.05  # r s
    coeffs[1, 0] = 0.08   # r
    return polynomial_graph(coeffs, name=name)


def random_graph_chart(rng: np.random.Generator, scale: float = 0.15, name: str = "random_graph") -> Chart:
    coeffs = rng.uniform(-scale, scale, size=(3, 3))
    coeffs[0, 0] = 0.0
    return polynomial_graph(coeffs, name=name)


def cylinder(radius: float = 1.0, height: float = 1.0, name: str = "cylinder") -> Chart:
    """Cylinder patch (R cos s, R sin s, r); |H| = 1/R."""
    R = float(radius)

    def _map(r, s, t):
        return _vec(_shape(r, s), R * np.cos(s), R * np.sin(s), r)

    def _d_map(r, s, t):
        shape = _shape(r, s)
        g1 = _vec(shape, 0.0, 0.0, 1.0)
        g2 = _vec(shape, -R * np.sin(s), R * np.cos(s), 0.0)
        return g1, g2

    def _d2_map(r, s, t):
        shape = _shape(r, s)
        z = np.zeros(shape + (3,))
        x22 = _vec(shape, -R * np.cos(s), -R * np.sin(s), 0.0)
        return z, z.copy(), x22

    return Chart(
        name=name,
        map=_map,
        d_map=_d_map,
        dt_map=_zero3,
        domain=(0.0, height, 0.0, 2.0 * np.pi),
        roles={"r0": physical(), "r1": physical(), "s0": periodic(), "s1": periodic()},
        d2_map=_d2_map,
        static=True,
    )


def disc(radius: float = 1.0, name: str = "disc", edge_role=None) -> Chart:
    """Flat disc (R r cos s, R r sin s, 0); pole at r = 0."""
    R = float(radius)

    def _map(r, s, t):
        return _vec(_shape(r, s), R * r * np.cos(s), R * r * np.sin(s), 0.0)

    def _d_map(r, s, t):
        shape = _shape(r, s)
        g1 = _vec(shape, R * np.cos(s), R * np.sin(s), 0.0)
        g2 = _vec(shape, -R * np.asarray(r, float) * np.sin(s), R * np.asarray(r, float) * np.cos(s), 0.0)
        return g1, g2

    def _d2_map(r, s, t):
        shape = _shape(r, s)
        z = np.zeros(shape + (3,))
        x12 = _vec(shape, -R * np.sin(s), R * np.cos(s), 0.0)
        x22 = _vec(shape, -R * np.asarray(r, float) * np.cos(s), -R * np.asarray(r, float) * np.sin(s), 0.0)
        return z, x12, x22

    return Chart(
        name=name,
        map=_map,
        d_map=_d_map,
        dt_map=_zero3,
        domain=(0.0, 1.0, 0.0, 2.0 * np.pi),
        roles={
            "r0": pole(),
            "r1": edge_role if edge_role is not None else physical(),
            "s0": periodic(),
            "s1": periodic(),
        },
        d2_map=_d2_map,
        static=True,
    )


def sphere_polar(
    radius0: float = 1.0,
    radius_rate: float = 0.0,
    theta_lo: float = 0.0,
    theta_hi: float = np.pi / 2.0,
    name: str = "sphere_patch",
) -> Chart:
    """Sphere patch in polar coordinates with (possibly) growing radius.

    Maps (r, s) to a(t) (sin T cos s, sin T sin s, cos T) with
    T(r) = theta_lo + (theta_hi - theta_lo) r.  Edges at T = 0 or pi are
    poles; other r-edges are physical.  The s direction is periodic.
    """
    c = float(theta_hi - theta_lo)

    def _a(t):
        return radius0 + radius_rate * t

    def _theta(r):
        return theta_lo + c * np.asarray(r, float)

    def _map(r, s, t):
        T = _theta(r)
        a = _a(t)
        return _vec(_shape(r, s), a * np.sin(T) * np.cos(s), a * np.sin(T) * np.sin(s), a * np.cos(T))

    def _d_map(r, s, t):
        shape = _shape(r, s)
        T = _theta(r)
        a = _a(t)
        g1 = _vec(shape, a * c * np.cos(T) * np.cos(s), a * c * np.cos(T) * np.sin(s), -a * c * np.sin(T))
        g2 = _vec(shape, -a * np.sin(T) * np.sin(s), a * np.sin(T) * np.cos(s), 0.0)
        return g1, g2

    def _dt_map(r, s, t):
        T = _theta(r)
        return _vec(
            _shape(r, s),
            radius_rate * np.sin(T) * np.cos(s),
            radius_rate * np.sin(T) * np.sin(s),
            radius_rate * np.cos(T),
        )

    def _d2_map(r, s, t):
        shape = _shape(r, s)
        T = _theta(r)
        a = _a(t)
        x11 = _vec(shape, -a * c * c * np.sin(T) * np.cos(s), -a * c * c * np.sin(T) * np.sin(s), -a * c * c * np.cos(T))
        x12 = _vec(shape, -a * c * np.cos(T) * np.sin(s), a * c * np.cos(T) * np.cos(s), 0.0)
        x22 = _vec(shape, -a * np.sin(T) * np.cos(s), -a * np.sin(T) * np.sin(s), 0.0)
        return x11, x12, x22

    def _edge_role(theta):
        return pole() if abs(np.sin(theta)) < 1e-15 else physical()

    return Chart(
        name=name,
        map=_map,
        d_map=_d_map,
        dt_map=_dt_map,
        domain=(0.0, 1.0, 0.0, 2.0 * np.pi),
        roles={
            "r0": _edge_role(theta_lo),
            "r1": _edge_role(theta_hi),
            "s0": periodic(),
            "s1": periodic(),
        },
        d2_map=_d2_map,
        static=(radius_rate == 0.0),
    )


def sphere_cap(radius0: float = 1.0, radius_rate: float = 0.0, angle: float = np.pi / 3.0, name: str = "sphere_cap") -> Chart:
    return sphere_polar(radius0, radius_rate, 0.0, angle, name=name)


def full_sphere(radius0: float = 1.0, radius_rate: float = 0.0, name: str = "full_sphere") -> Chart:
    """Whole sphere as a single polar chart; both r-edges are poles."""
    return sphere_polar(radius0, radius_rate, 0.0, np.pi, name=name)


def hemisphere_pair(radius0: float = 1.0, radius_rate: float = 0.0):
    """Northern/southern hemisphere charts meeting along the equator (r = 1)."""
    north = sphere_polar(radius0, radius_rate, 0.0, np.pi / 2.0, name="hemisphere_north")
    south = sphere_polar(radius0, radius_rate, np.pi, np.pi / 2.0, name="hemisphere_south")
    return north, south


def standard_corpus() -> list[Chart]:
    """Charts covering the flat, graph, cylindrical and spherical cases."""
    return [
        plane(),
        affine_plane((0.2, -0.1, 0.3), (1.0, 0.2, 0.1), (0.1, 0.9, -0.2), name="skew_plane"),
        default_graph(),
        cylinder(),
        sphere_cap(angle=np.pi / 3.0),
        disc(radius=0.8, name="disc08"),
    ]
