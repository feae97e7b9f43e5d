"""Time-dependent parametric charts over rectangular parameter domains.

A chart maps a fixed rectangle [r_lo, r_hi] x [s_lo, s_hi] into R^3 at each
time t.  All chart callables must accept broadcastable numpy arrays for the
two parameter coordinates and a scalar time, and return arrays whose last
axis holds the three space components.

Edge naming: ``r0``/``r1`` are the edges of constant first parameter,
``s0``/``s1`` of constant second parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

PHYSICAL = "physical"
PERIODIC = "periodic"
POLE = "pole"
INTERFACE = "interface"

EDGE_NAMES = ("r0", "r1", "s0", "s1")

# Outward unit normals of the parameter rectangle, per edge.
_EDGE_NORMALS = {
    "r0": (-1.0, 0.0),
    "r1": (1.0, 0.0),
    "s0": (0.0, -1.0),
    "s1": (0.0, 1.0),
}


@dataclass(frozen=True)
class EdgeRole:
    """Role of one rectangle edge: physical, periodic, pole or interface(tag)."""

    kind: str
    tag: str | None = None

    def __post_init__(self):
        if self.kind not in (PHYSICAL, PERIODIC, POLE, INTERFACE):
            raise ValueError(f"unknown edge role {self.kind!r}")


def physical() -> EdgeRole:
    return EdgeRole(PHYSICAL)


def periodic() -> EdgeRole:
    return EdgeRole(PERIODIC)


def pole() -> EdgeRole:
    return EdgeRole(POLE)


def interface(tag: str) -> EdgeRole:
    return EdgeRole(INTERFACE, tag)


@dataclass(frozen=True)
class Chart:
    """A time-dependent map from a parameter rectangle into R^3.

    Parameters
    ----------
    map : callable (r, s, t) -> (..., 3)
        Position of the surface point.
    d_map : callable (r, s, t) -> pair of (..., 3)
        The two tangent (partial derivative) vectors.
    dt_map : callable (r, s, t) -> (..., 3)
        Motion velocity of the surface point (time derivative at fixed
        parameters).
    domain : (r_lo, r_hi, s_lo, s_hi)
    roles : mapping edge name -> EdgeRole
    d2_map : optional callable (r, s, t) -> (x11, x12, x22)
        Analytic second derivatives of the map.  When absent, second
        derivatives are obtained by central differencing of ``d_map``
        with step ``fd_step``.
    fd_step : optional float
        Parameter step for finite-difference second derivatives; defaults
        to 1e-5 times the largest domain extent.
    static : bool
        True when the chart does not depend on time (enables geometry
        caching in the solvers).
    """

    name: str
    map: Callable
    d_map: Callable
    dt_map: Callable
    domain: tuple[float, float, float, float]
    roles: Mapping[str, EdgeRole]
    d2_map: Callable | None = None
    fd_step: float | None = None
    static: bool = False

    def __post_init__(self):
        r_lo, r_hi, s_lo, s_hi = self.domain
        if not (r_hi > r_lo and s_hi > s_lo):
            raise ValueError(f"empty parameter domain {self.domain}")
        missing = [e for e in EDGE_NAMES if e not in self.roles]
        if missing:
            raise ValueError(f"chart {self.name!r} missing edge roles {missing}")
        for axis in ("r", "s"):
            kinds = {self.roles[axis + "0"].kind, self.roles[axis + "1"].kind}
            if PERIODIC in kinds and kinds != {PERIODIC}:
                raise ValueError(
                    f"chart {self.name!r}: periodic edges must come in opposite pairs"
                )

    @property
    def r_lo(self) -> float:
        return self.domain[0]

    @property
    def r_hi(self) -> float:
        return self.domain[1]

    @property
    def s_lo(self) -> float:
        return self.domain[2]

    @property
    def s_hi(self) -> float:
        return self.domain[3]

    @property
    def extent(self) -> float:
        return max(self.r_hi - self.r_lo, self.s_hi - self.s_lo)

    @property
    def fd_h(self) -> float:
        """Parameter step used for finite-difference second derivatives."""
        return self.fd_step if self.fd_step is not None else 1e-5 * self.extent

    def periodic_axis(self, axis: int) -> bool:
        e0, e1 = ("r0", "r1") if axis == 0 else ("s0", "s1")
        return self.roles[e0].kind == PERIODIC and self.roles[e1].kind == PERIODIC

    def edge_is(self, edge: str, *kinds: str) -> bool:
        return self.roles[edge].kind in kinds


@dataclass(frozen=True)
class BoundarySegment:
    """One edge of the parameter rectangle with its outward normal.

    The edge is parametrized as ``(p(l), q(l))`` for ``l`` in ``[a, b]``
    with unit outward parameter normal ``n_u``.  For the axis-aligned
    rectangle edges used here the parametrization is the obvious one.
    """

    edge: str
    a: float
    b: float
    n_u: tuple[float, float]
    fixed: float
    axis: int  # index of the varying parameter (0 = r varies, 1 = s varies)

    @staticmethod
    def for_edge(chart: Chart, edge: str) -> "BoundarySegment":
        r_lo, r_hi, s_lo, s_hi = chart.domain
        if edge == "r0":
            return BoundarySegment(edge, s_lo, s_hi, _EDGE_NORMALS[edge], r_lo, 1)
        if edge == "r1":
            return BoundarySegment(edge, s_lo, s_hi, _EDGE_NORMALS[edge], r_hi, 1)
        if edge == "s0":
            return BoundarySegment(edge, r_lo, r_hi, _EDGE_NORMALS[edge], s_lo, 0)
        if edge == "s1":
            return BoundarySegment(edge, r_lo, r_hi, _EDGE_NORMALS[edge], s_hi, 0)
        raise ValueError(f"unknown edge {edge!r}")

    def points(self, ell):
        """Parameter points (r, s) along the edge at edge-parameter ``ell``."""
        ell = np.asarray(ell, dtype=float)
        fixed = np.full_like(ell, self.fixed)
        if self.axis == 0:
            return ell, fixed
        return fixed, ell

    def midpoints(self, m: int):
        """Midpoint quadrature nodes and weight along the edge."""
        dl = (self.b - self.a) / m
        ell = self.a + (np.arange(m) + 0.5) * dl
        return ell, dl


def boundary_segments(chart: Chart, kinds=(PHYSICAL, INTERFACE)) -> list[BoundarySegment]:
    """Segments for every edge of the chart whose role is in ``kinds``."""
    return [
        BoundarySegment.for_edge(chart, e)
        for e in EDGE_NAMES
        if chart.roles[e].kind in kinds
    ]


def validate_chart(chart: Chart, t: float, n: int = 17, tol: float = 1e-12) -> float:
    """Check that periodic edge pairs agree in values and derivatives.

    Returns the largest deviation found; raises ``ValueError`` above ``tol``.
    """
    worst = 0.0
    r_lo, r_hi, s_lo, s_hi = chart.domain
    for axis in (0, 1):
        if not chart.periodic_axis(axis):
            continue
        u = np.linspace(0.0, 1.0, n)
        if axis == 0:
            lo = (np.full(n, r_lo), s_lo + u * (s_hi - s_lo))
            hi = (np.full(n, r_hi), s_lo + u * (s_hi - s_lo))
        else:
            lo = (r_lo + u * (r_hi - r_lo), np.full(n, s_lo))
            hi = (r_lo + u * (r_hi - r_lo), np.full(n, s_hi))
        for f in (chart.map, chart.dt_map):
            worst = max(worst, float(np.max(np.abs(f(*lo, t) - f(*hi, t)))))
        dlo = chart.d_map(*lo, t)
        dhi = chart.d_map(*hi, t)
        for a, b in zip(dlo, dhi):
            worst = max(worst, float(np.max(np.abs(np.asarray(a) - np.asarray(b)))))
    if worst > tol:
        raise ValueError(
            f"chart {chart.name!r}: periodic edges disagree by {worst:.3e} (tol {tol:g})"
        )
    return worst
