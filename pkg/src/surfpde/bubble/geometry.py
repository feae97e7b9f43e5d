"""Double-bubble geometry: two spherical caps joined by a flat disc.

The bubble is described by three C^1 radii-like functions a(t), b(t), m(t)
with 0 < m < a < b < 2m.  Sphere A has center (-m, 0, 0) and radius a,
sphere B center (m, 0, 0) and radius b; they intersect the plane
x1 = n(t) = (a^2 - b^2) / (4 m) in the common interface circle of radius
R(t) with R^2 = a^2 - (m+n)^2 = b^2 - (m-n)^2.

Five charts cover the three surfaces: A1/A2 split the cap of sphere A, B1/B2
the cap of sphere B, and S is the flat septum disc.  The B1 chart uses the
ramp m + b/2 - r (m - n + b/2) in its first component: that is the unique
affine ramp that starts on the B1/B2 seam at r = 0 and lands on the
interface circle x1 = n at r = 1 while staying on sphere B.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import GeometryInvalid
from ..geometry import Chart, interface, periodic, pole

PATCHES = ("A1", "A2", "B1", "B2", "S")

#: Which surface (kappa group) each chart belongs to.
PATCH_SURFACE = {"A1": "A", "A2": "A", "B1": "B", "B2": "B", "S": "S"}

GAMMA0 = "gamma0"
SEAM_A = "seam_A"
SEAM_B = "seam_B"


@dataclass(frozen=True)
class C1Fn:
    """Scalar C^1 function of time with an explicit derivative."""

    value: Callable[[float], float]
    rate: Callable[[float], float]
    constant: bool = False

    @staticmethod
    def affine(v0: float, v1: float = 0.0) -> "C1Fn":
        return C1Fn(lambda t: v0 + v1 * t, lambda t: v1, constant=(v1 == 0.0))


@dataclass(frozen=True)
class BubbleGeometry:
    """The triple (a, b, m) plus the derived plane position and radius."""

    a: C1Fn
    b: C1Fn
    m: C1Fn

    @staticmethod
    def affine(a0: float, a1: float = 0.0, b0: float = 1.2, b1: float = 0.0, m0: float = 0.8, m1: float = 0.0) -> "BubbleGeometry":
        return BubbleGeometry(C1Fn.affine(a0, a1), C1Fn.affine(b0, b1), C1Fn.affine(m0, m1))

    @property
    def static(self) -> bool:
        return self.a.constant and self.b.constant and self.m.constant

    def n(self, t: float) -> float:
        return (self.a.value(t) ** 2 - self.b.value(t) ** 2) / (4.0 * self.m.value(t))

    def n_rate(self, t: float) -> float:
        a, b, m = self.a.value(t), self.b.value(t), self.m.value(t)
        da, db, dm = self.a.rate(t), self.b.rate(t), self.m.rate(t)
        return (a * da - b * db) / (2.0 * m) - self.n(t) * dm / m

    def R(self, t: float) -> float:
        a, m = self.a.value(t), self.m.value(t)
        return float(np.sqrt(a * a - (m + self.n(t)) ** 2))

    def R_rate(self, t: float) -> float:
        a, m = self.a.value(t), self.m.value(t)
        da, dm = self.a.rate(t), self.m.rate(t)
        mn = m + self.n(t)
        return (a * da - mn * (dm + self.n_rate(t))) / self.R(t)

    def consistency_error(self, t: float) -> float:
        """|a^2 - (m+n)^2 - (b^2 - (m-n)^2)|; zero given n's definition."""
        a, b, m, n = self.a.value(t), self.b.value(t), self.m.value(t), self.n(t)
        return abs((a * a - (m + n) ** 2) - (b * b - (m - n) ** 2))

    def check(self, t: float) -> None:
        a, b, m = self.a.value(t), self.b.value(t), self.m.value(t)
        if not (0.0 < m < a < b < 2.0 * m):
            raise GeometryInvalid(
                f"need 0 < m < a < b < 2m; got m={m:g}, a={a:g}, b={b:g} at t={t:g}"
            )

    def validate(self, t0: float, t1: float | None = None, samples: int = 65) -> None:
        """Check the ordering constraints on a fine time sample of [t0, t1]."""
        times = [t0] if t1 is None else np.linspace(t0, t1, samples)
        for t in np.atleast_1d(times):
            self.check(float(t))


def _shape(r, s):
    return np.broadcast(np.asarray(r, float), np.asarray(s, float)).shape


def _vec(shape, a, b, c):
    out = np.empty(shape + (3,), dtype=float)
    out[..., 0] = a
    out[..., 1] = b
    out[..., 2] = c
    return out


_SQ3H = np.sqrt(3.0) / 2.0


def _chart_a1(geom: BubbleGeometry) -> Chart:
    def _map(r, s, t):
        a, m = geom.a.value(t), geom.m.value(t)
        w = np.sqrt(1.0 - 0.75 * np.asarray(r, float) ** 2)
        return _vec(_shape(r, s), -a * w - m, _SQ3H * a * r * np.cos(s), _SQ3H * a * r * np.sin(s))

    def _d_map(r, s, t):
        a = geom.a.value(t)
        r = np.asarray(r, float)
        w = np.sqrt(1.0 - 0.75 * r**2)
        shape = _shape(r, s)
        g1 = _vec(shape, 0.75 * a * r / w, _SQ3H * a * np.cos(s), _SQ3H * a * np.sin(s))
        g2 = _vec(shape, 0.0, -_SQ3H * a * r * np.sin(s), _SQ3H * a * r * np.cos(s))
        return g1, g2

    def _dt_map(r, s, t):
        da, dm = geom.a.rate(t), geom.m.rate(t)
        w = np.sqrt(1.0 - 0.75 * np.asarray(r, float) ** 2)
        return _vec(_shape(r, s), -da * w - dm, _SQ3H * da * r * np.cos(s), _SQ3H * da * r * np.sin(s))

    return Chart(
        name="bubble_A1",
        map=_map,
        d_map=_d_map,
        dt_map=_dt_map,
        domain=(0.0, 1.0, 0.0, 2.0 * np.pi),
        roles={"r0": pole(), "r1": interface(SEAM_A), "s0": periodic(), "s1": periodic()},
        static=geom.static,
    )


def _chart_a2(geom: BubbleGeometry) -> Chart:
    def _uu(r, t):
        a, m, n = geom.a.value(t), geom.m.value(t), geom.n(t)
        return (m + n + 0.5 * a) * np.asarray(r, float) - 0.5 * a

    def _map(r, s, t):
        a, m = geom.a.value(t), geom.m.value(t)
        u = _uu(r, t)
        rho = np.sqrt(a * a - u * u)
        return _vec(_shape(r, s), u - m, rho * np.cos(s), rho * np.sin(s))

    def _d_map(r, s, t):
        a, m, n = geom.a.value(t), geom.m.value(t), geom.n(t)
        u = _uu(r, t)
        rho = np.sqrt(a * a - u * u)
        u_r = m + n + 0.5 * a
        rho_r = -u * u_r / rho
        shape = _shape(r, s)
        g1 = _vec(shape, u_r, rho_r * np.cos(s), rho_r * np.sin(s))
        g2 = _vec(shape, 0.0, -rho * np.sin(s), rho * np.cos(s))
        return g1, g2

    def _dt_map(r, s, t):
        a, m = geom.a.value(t), geom.m.value(t)
        da, dm, dn = geom.a.rate(t), geom.m.rate(t), geom.n_rate(t)
        r = np.asarray(r, float)
        u = _uu(r, t)
        rho = np.sqrt(a * a - u * u)
        u_t = (dm + dn + 0.5 * da) * r - 0.5 * da
        rho_t = (a * da - u * u_t) / rho
        return _vec(_shape(r, s), u_t - dm, rho_t * np.cos(s), rho_t * np.sin(s))

    return Chart(
        name="bubble_A2",
        map=_map,
        d_map=_d_map,
        dt_map=_dt_map,
        domain=(0.0, 1.0, 0.0, 2.0 * np.pi),
        roles={
            "r0": interface(SEAM_A),
            "r1": interface(GAMMA0),
            "s0": periodic(),
            "s1": periodic(),
        },
        static=geom.static,
    )


def _chart_b1(geom: BubbleGeometry) -> Chart:
    def _qq(r, t):
        b, m, n = geom.b.value(t), geom.m.value(t), geom.n(t)
        return 0.5 * b - np.asarray(r, float) * (m - n + 0.5 * b)

    def _map(r, s, t):
        b, m = geom.b.value(t), geom.m.value(t)
        q = _qq(r, t)
        rho = np.sqrt(b * b - q * q)
        return _vec(_shape(r, s), m + q, rho * np.cos(s), rho * np.sin(s))

    def _d_map(r, s, t):
        b, m, n = geom.b.value(t), geom.m.value(t), geom.n(t)
        q = _qq(r, t)
        rho = np.sqrt(b * b - q * q)
        q_r = -(m - n + 0.5 * b)
        rho_r = -q * q_r / rho
        shape = _shape(r, s)
        g1 = _vec(shape, q_r, rho_r * np.cos(s), rho_r * np.sin(s))
        g2 = _vec(shape, 0.0, -rho * np.sin(s), rho * np.cos(s))
        return g1, g2

    def _dt_map(r, s, t):
        b, m = geom.b.value(t), geom.m.value(t)
        db, dm, dn = geom.b.rate(t), geom.m.rate(t), geom.n_rate(t)
        r = np.asarray(r, float)
        q = _qq(r, t)
        rho = np.sqrt(b * b - q * q)
        q_t = 0.5 * db - r * (dm - dn + 0.5 * db)
        rho_t = (b * db - q * q_t) / rho
        return _vec(_shape(r, s), dm + q_t, rho_t * np.cos(s), rho_t * np.sin(s))

    return Chart(
        name="bubble_B1",
        map=_map,
        d_map=_d_map,
        dt_map=_dt_map,
        domain=(0.0, 1.0, 0.0, 2.0 * np.pi),
        roles={
            "r0": interface(SEAM_B),
            "r1": interface(GAMMA0),
            "s0": periodic(),
            "s1": periodic(),
        },
        static=geom.static,
    )


def _chart_b2(geom: BubbleGeometry) -> Chart:
    def _map(r, s, t):
        b, m = geom.b.value(t), geom.m.value(t)
        w = np.sqrt(1.0 - 0.75 * np.asarray(r, float) ** 2)
        return _vec(_shape(r, s), b * w + m, _SQ3H * b * r * np.cos(s), _SQ3H * b * r * np.sin(s))

    def _d_map(r, s, t):
        b = geom.b.value(t)
        r = np.asarray(r, float)
        w = np.sqrt(1.0 - 0.75 * r**2)
        shape = _shape(r, s)
        g1 = _vec(shape, -0.75 * b * r / w, _SQ3H * b * np.cos(s), _SQ3H * b * np.sin(s))
        g2 = _vec(shape, 0.0, -_SQ3H * b * r * np.sin(s), _SQ3H * b * r * np.cos(s))
        return g1, g2

    def _dt_map(r, s, t):
        db, dm = geom.b.rate(t), geom.m.rate(t)
        w = np.sqrt(1.0 - 0.75 * np.asarray(r, float) ** 2)
        return _vec(_shape(r, s), db * w + dm, _SQ3H * db * r * np.cos(s), _SQ3H * db * r * np.sin(s))

    return Chart(
        name="bubble_B2",
        map=_map,
        d_map=_d_map,
        dt_map=_dt_map,
        domain=(0.0, 1.0, 0.0, 2.0 * np.pi),
        roles={"r0": pole(), "r1": interface(SEAM_B), "s0": periodic(), "s1": periodic()},
        static=geom.static,
    )


def _chart_s(geom: BubbleGeometry) -> Chart:
    def _map(r, s, t):
        R = geom.R(t)
        return _vec(_shape(r, s), geom.n(t), R * r * np.cos(s), R * r * np.sin(s))

    def _d_map(r, s, t):
        R = geom.R(t)
        r = np.asarray(r, float)
        shape = _shape(r, s)
        g1 = _vec(shape, 0.0, R * np.cos(s), R * np.sin(s))
        g2 = _vec(shape, 0.0, -R * r * np.sin(s), R * r * np.cos(s))
        return g1, g2

    def _dt_map(r, s, t):
        dR = geom.R_rate(t)
        r = np.asarray(r, float)
        return _vec(_shape(r, s), geom.n_rate(t), dR * r * np.cos(s), dR * r * np.sin(s))

    return Chart(
        name="bubble_S",
        map=_map,
        d_map=_d_map,
        dt_map=_dt_map,
        domain=(0.0, 1.0, 0.0, 2.0 * np.pi),
        roles={"r0": pole(), "r1": interface(GAMMA0), "s0": periodic(), "s1": periodic()},
        static=geom.static,
    )


def charts_for(geom: BubbleGeometry, t: float) -> dict[str, Chart]:
    """The five bubble charts (validated at time ``t``).

    The returned charts are time-dependent maps; ``t`` is only the instant
    at which the ordering constraints are verified.
    """
    geom.check(t)
    return {
        "A1": _chart_a1(geom),
        "A2": _chart_a2(geom),
        "B1": _chart_b1(geom),
        "B2": _chart_b2(geom),
        "S": _chart_s(geom),
    }


def analytic_conormals(geom: BubbleGeometry, theta, t: float):
    """Closed-form outer co-normals (nu_A, nu_B, nu_S) on the interface circle.

    nu_B is the orthogonality-consistent form (-R/b, (n-m)/b cos, (n-m)/b sin);
    see :func:`printed_conormal_B` for the defective variant kept for
    documentation.
    """
    theta = np.asarray(theta, float)
    a, b, m, n, R = geom.a.value(t), geom.b.value(t), geom.m.value(t), geom.n(t), geom.R(t)
    shape = theta.shape
    nu_a = _vec(shape, R / a, -(m + n) / a * np.cos(theta), -(m + n) / a * np.sin(theta))
    nu_b = _vec(shape, -R / b, (n - m) / b * np.cos(theta), (n - m) / b * np.sin(theta))
    nu_s = _vec(shape, 0.0, np.cos(theta), np.sin(theta))
    return nu_a, nu_b, nu_s


def printed_conormal_B(geom: BubbleGeometry, theta, t: float) -> np.ndarray:
    """The defective nu_B variant with (m+n) in place of (m-n).

    It is unit length but fails the tangency requirement nu . n_B = 0 on
    sphere B; kept so the verification battery can report the failure.
    """
    theta = np.asarray(theta, float)
    b, m, n = geom.b.value(t), geom.m.value(t), geom.n(t)
    rt = np.sqrt(b * b - (m + n) ** 2)
    return _vec(theta.shape, -rt / b, (m + n) / b * np.cos(theta), (m + n) / b * np.sin(theta))


def printed_conormal_B_defect(geom: BubbleGeometry, t: float) -> float:
    """Closed form of |printed nu_B . n_B| on the interface circle.

    Equals (sqrt(b^2 - (m+n)^2) (m-n) + (m+n) R) / b^2; nonzero for every
    admissible geometry, which is what disqualifies the printed variant.
    """
    b, m, n, R = geom.b.value(t), geom.m.value(t), geom.n(t), geom.R(t)
    rt = np.sqrt(b * b - (m + n) ** 2)
    return (rt * (m - n) + (m + n) * R) / (b * b)


def interface_normals(geom: BubbleGeometry, theta, t: float):
    """Outward sphere/plane normals (n_A, n_B, n_S) on the interface circle."""
    theta = np.asarray(theta, float)
    a, b, m, n, R = geom.a.value(t), geom.b.value(t), geom.m.value(t), geom.n(t), geom.R(t)
    shape = theta.shape
    n_a = _vec(shape, (n + m) / a, R / a * np.cos(theta), R / a * np.sin(theta))
    n_b = _vec(shape, (n - m) / b, R / b * np.cos(theta), R / b * np.sin(theta))
    n_s = _vec(shape, 1.0, 0.0, 0.0)
    return n_a, n_b, n_s


def interface_alignment(geom: BubbleGeometry, t: float, n_theta: int = 64) -> float:
    """Max pairwise distance between the three charts' images of r = 1."""
    charts = charts_for(geom, t)
    theta = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    ones = np.ones_like(theta)
    pts = [charts[p].map(ones, theta, t) for p in ("A2", "B1", "S")]
    worst = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            worst = max(worst, float(np.max(np.linalg.norm(pts[i] - pts[j], axis=-1))))
    return worst
