"""Conservative face-flux discretization of the surface diffusion operator.

The conserved unknown per cell is the density v = u_hat sqrtG; pulled back
to the parameter rectangle the PDE reads

    d/dt (u_hat sqrtG) = d/dX_a ( sqrtG e'(q) ginv_ab d u_hat / dX_b ),

so every interior face flux is computed once and added/subtracted to its
two neighbor cells, making the total sum(v) exactly conserved for any
chart motion.  Pole faces carry zero flux (vanishing line element);
periodic faces wrap; Neumann faces contribute exactly zero; Dirichlet
faces use the ghost value 2 g - u.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CflViolation, DegenerateMetric, NonparabolicEnergy
from ..geometry import Chart, ParamGrid, metric_components
from ..geometry.frame import EPS_G
from .state import DIRICHLET, HEAT, NEUMANN, SolverState


@dataclass(frozen=True)
class GeoSnapshot:
    """Geometry factors of one chart+grid at a fixed time.

    ``arr``/``ars`` live on r-faces, ``ass``/``asr`` on s-faces; they are
    sqrtG times the relevant inverse-metric entry, with pole faces zeroed.
    """

    t: float
    sqrtG_c: np.ndarray
    i11_c: np.ndarray
    i12_c: np.ndarray
    i22_c: np.ndarray
    arr: np.ndarray
    ars: np.ndarray
    ass: np.ndarray
    asr: np.ndarray
    s_periodic: bool


def _inverse_metric(chart: Chart, pts, t: float):
    """(sqrtG, i11, i12, i22, all_ok) with degenerate points zeroed."""
    _, _, g11, g12, g22, G, sqrtG, _ = metric_components(chart, pts, t)
    ok = G > EPS_G
    safe = np.where(ok, G, 1.0)
    i11 = np.where(ok, g22 / safe, 0.0)
    i12 = np.where(ok, -g12 / safe, 0.0)
    i22 = np.where(ok, g11 / safe, 0.0)
    return sqrtG, i11, i12, i22, bool(np.all(ok))


class PatchGeometry:
    """Evaluates and caches the per-time geometry of one chart+grid.

    The last snapshot is memoized by exact time, so repeated assemblies
    within one time step share a single metric evaluation.
    """

    def __init__(self, chart: Chart, grid: ParamGrid):
        if chart.periodic_axis(0):
            raise ValueError("periodic first parameter axis is not supported by the solver")
        self.chart = chart
        self.grid = grid
        rc = grid.r_centers
        sc = grid.s_centers
        self._cells = np.meshgrid(rc, sc, indexing="ij")
        self._rfaces = np.meshgrid(grid.r_edges, sc, indexing="ij")
        self.s_periodic = chart.periodic_axis(1)
        s_face = grid.s_edges[:-1] if self.s_periodic else grid.s_edges
        self._sfaces = np.meshgrid(rc, s_face, indexing="ij")
        self._cache: GeoSnapshot | None = None

    def at(self, t: float) -> GeoSnapshot:
        if self._cache is not None and (self.chart.static or self._cache.t == t):
            return self._cache
        sqrtG_c, i11_c, i12_c, i22_c, ok = _inverse_metric(self.chart, self._cells, t)
        if not ok:
            raise DegenerateMetric(
                f"chart {self.chart.name!r}: degenerate metric at a cell center (t={t!r})"
            )
        sqrtG_r, ir11, ir12, _, _ = _inverse_metric(self.chart, self._rfaces, t)
        sqrtG_s, _, is12, is22, _ = _inverse_metric(self.chart, self._sfaces, t)
        arr = sqrtG_r * ir11
        ars = sqrtG_r * ir12
        ass = sqrtG_s * is22
        asr = sqrtG_s * is12
        # Zero-length faces: pole edges never carry flux.
        if self.chart.edge_is("r0", "pole"):
            arr[0, :] = 0.0
            ars[0, :] = 0.0
        if self.chart.edge_is("r1", "pole"):
            arr[-1, :] = 0.0
            ars[-1, :] = 0.0
        if not self.s_periodic:
            if self.chart.edge_is("s0", "pole"):
                ass[:, 0] = 0.0
                asr[:, 0] = 0.0
            if self.chart.edge_is("s1", "pole"):
                ass[:, -1] = 0.0
                asr[:, -1] = 0.0
        snap = GeoSnapshot(
            t=t,
            sqrtG_c=sqrtG_c,
            i11_c=i11_c,
            i12_c=i12_c,
            i22_c=i22_c,
            arr=arr,
            ars=ars,
            ass=ass,
            asr=asr,
            s_periodic=self.s_periodic,
        )
        self._cache = snap
        return snap


def _diff_periodic(u: np.ndarray, delta: float, axis: int) -> np.ndarray:
    return (np.roll(u, -1, axis=axis) - np.roll(u, 1, axis=axis)) / (2.0 * delta)


def diffusivity_cells(state: SolverState, geo: GeoSnapshot, u: np.ndarray):
    """kappa e'(|grad u|^2) at cell centers plus the raw gradient pieces."""
    grid = state.grid
    if geo.s_periodic:
        du_s = _diff_periodic(u, grid.ds, 1)
    else:
        du_s = np.gradient(u, grid.ds, axis=1, edge_order=1)
    du_r = np.gradient(u, grid.dr, axis=0, edge_order=1)
    if state.energy.kind == "linear":
        # e' is identically one; skip the gradient-magnitude evaluation.
        diff = np.broadcast_to(np.asarray(state.kappa, float), u.shape) * np.ones_like(u)
        return diff, du_r, du_s
    q = geo.i11_c * du_r**2 + 2.0 * geo.i12_c * du_r * du_s + geo.i22_c * du_s**2
    ep = np.asarray(state.energy.e_prime(q), float)
    if np.any(ep < 0.0):
        raise NonparabolicEnergy(
            f"e' < 0 encountered (min {float(np.min(ep)):.3e}) with {state.energy.kind}"
        )
    diff = np.asarray(state.kappa, float) * ep
    return diff, du_r, du_s


def _edge_bc(state: SolverState, edge: str):
    role = state.grid.roles[edge]
    if role.kind == "pole":
        return ("pole", None)
    if role.kind == "physical" or role.kind == "interface":
        bc = state.bc.get(edge)
        if bc is None:
            if role.kind == "interface":
                raise ValueError(f"interface edge {edge!r} needs a boundary value")
            raise ValueError(f"missing boundary condition on edge {edge!r}")
        return (bc.kind, bc.value)
    return (role.kind, None)  # periodic handled structurally


def face_conductances(state: SolverState, geo: GeoSnapshot, diff_c: np.ndarray):
    """Linear face coefficients K such that flux = K * (u_i - u_{i-1}).

    Includes the transverse face length over normal distance factor;
    Dirichlet faces carry the ghost factor 2; Neumann and pole faces are
    zero.  Used by both the flux assembly and the stability bound, so the
    two stay consistent.
    """
    grid = state.grid
    dr, ds = grid.dr, grid.ds
    n_r, n_s = grid.n_r, grid.n_s

    kr = np.zeros((n_r + 1, n_s))
    kr[1:-1] = geo.arr[1:-1] * 0.5 * (diff_c[:-1] + diff_c[1:]) * (ds / dr)
    kind0, _ = _edge_bc(state, "r0")
    kind1, _ = _edge_bc(state, "r1")
    if kind0 == DIRICHLET:
        kr[0] = 2.0 * geo.arr[0] * diff_c[0] * (ds / dr)
    if kind1 == DIRICHLET:
        kr[-1] = 2.0 * geo.arr[-1] * diff_c[-1] * (ds / dr)

    if geo.s_periodic:
        ks = geo.ass * 0.5 * (diff_c + np.roll(diff_c, 1, axis=1)) * (dr / ds)
    else:
        ks = np.zeros((n_r, n_s + 1))
        ks[:, 1:-1] = geo.ass[:, 1:-1] * 0.5 * (diff_c[:, :-1] + diff_c[:, 1:]) * (dr / ds)
        kind0, _ = _edge_bc(state, "s0")
        kind1, _ = _edge_bc(state, "s1")
        if kind0 == DIRICHLET:
            ks[:, 0] = 2.0 * geo.ass[:, 0] * diff_c[:, 0] * (dr / ds)
        if kind1 == DIRICHLET:
            ks[:, -1] = 2.0 * geo.ass[:, -1] * diff_c[:, -1] * (dr / ds)
    return kr, ks


def flux_divergence(state: SolverState, geo: GeoSnapshot, u: np.ndarray, pieces=None) -> np.ndarray:
    """dv/dt from the face fluxes of the scalar field ``u``.

    ``pieces`` may carry a precomputed (diff_c, du_r, du_s, kr, ks) tuple
    so multi-patch drivers assemble the coefficients once per step.
    """
    grid = state.grid
    dr, ds = grid.dr, grid.ds
    if pieces is None:
        diff_c, du_r, du_s = diffusivity_cells(state, geo, u)
        kr, ks = face_conductances(state, geo, diff_c)
    else:
        diff_c, du_r, du_s, kr, ks = pieces

    # r-direction fluxes, F[i] between cells i-1 and i.
    f_r = np.zeros_like(kr)
    f_r[1:-1] = kr[1:-1] * (u[1:] - u[:-1])
    # Cross-metric contribution on interior faces: transverse gradient
    # averaged from the adjacent cells.
    cross_r = geo.ars[1:-1] * 0.5 * (diff_c[:-1] + diff_c[1:]) * 0.5 * (du_s[:-1] + du_s[1:]) * ds
    f_r[1:-1] += cross_r
    kind, value = _edge_bc(state, "r0")
    if kind == DIRICHLET:
        f_r[0] = kr[0] * (u[0] - np.asarray(value, float))
    kind, value = _edge_bc(state, "r1")
    if kind == DIRICHLET:
        # F[n] = K (ghost - u_last) with ghost = 2 value - u_last.
        f_r[-1] = kr[-1] * (np.asarray(value, float) - u[-1])

    vdot = (f_r[1:] - f_r[:-1]) / (dr * ds)

    if geo.s_periodic:
        u_m = np.roll(u, 1, axis=1)
        du_r_face = 0.5 * (du_r + np.roll(du_r, 1, axis=1))
        diff_face = 0.5 * (diff_c + np.roll(diff_c, 1, axis=1))
        f_s = ks * (u - u_m) + geo.asr * diff_face * du_r_face * dr
        vdot += (np.roll(f_s, -1, axis=1) - f_s) / (dr * ds)
    else:
        f_s = np.zeros_like(ks)
        f_s[:, 1:-1] = ks[:, 1:-1] * (u[:, 1:] - u[:, :-1])
        cross_s = (
            geo.asr[:, 1:-1]
            * 0.5
            * (diff_c[:, :-1] + diff_c[:, 1:])
            * 0.5
            * (du_r[:, :-1] + du_r[:, 1:])
            * dr
        )
        f_s[:, 1:-1] += cross_s
        kind, value = _edge_bc(state, "s0")
        if kind == DIRICHLET:
            f_s[:, 0] = ks[:, 0] * (u[:, 0] - np.asarray(value, float))
        kind, value = _edge_bc(state, "s1")
        if kind == DIRICHLET:
            f_s[:, -1] = ks[:, -1] * (np.asarray(value, float) - u[:, -1])
        vdot += (f_s[:, 1:] - f_s[:, :-1]) / (dr * ds)
    return vdot


def _cell_mass(state: SolverState, geo: GeoSnapshot) -> np.ndarray:
    dens = state.P if state.system == HEAT else geo.sqrtG_c
    return dens * state.grid.cell_area


def pde_rhs(state: SolverState, geometry: PatchGeometry | None = None) -> np.ndarray:
    """Flux divergence dv/dt of the conserved density at ``state.t``."""
    geometry = geometry or PatchGeometry(state.chart, state.grid)
    geo = geometry.at(state.t)
    u = state.scalar(geo.sqrtG_c)
    return flux_divergence(state, geo, u)


def stability_limit(state: SolverState, geo: GeoSnapshot, kr: np.ndarray, ks: np.ndarray) -> float:
    """min over cells of (cell mass / sum of face conductances); inf if free."""
    total = kr[:-1] + kr[1:]
    if geo.s_periodic:
        total = total + ks + np.roll(ks, -1, axis=1)
    else:
        total = total + ks[:, :-1] + ks[:, 1:]
    mass = _cell_mass(state, geo)
    with np.errstate(divide="ignore"):
        ratios = np.where(total > 0.0, mass / np.where(total > 0.0, total, 1.0), np.inf)
    return float(np.min(ratios))


def cfl_dt(
    state: SolverState,
    safety: float = 0.4,
    dt_max: float | None = None,
    geometry: PatchGeometry | None = None,
) -> float:
    """Explicit stability bound: safety * min(cell mass / sum of face K).

    Cells whose faces all vanish (flat power-law states, isolated pole
    cells) impose no bound; ``dt_max`` clamps the result when every
    conductance is zero.
    """
    geometry = geometry or PatchGeometry(state.chart, state.grid)
    geo = geometry.at(state.t)
    u = state.scalar(geo.sqrtG_c)
    diff_c, _, _ = diffusivity_cells(state, geo, u)
    kr, ks = face_conductances(state, geo, diff_c)
    bound = safety * stability_limit(state, geo, kr, ks)
    if not np.isfinite(bound):
        if dt_max is None:
            raise ValueError("all conductances vanish; set dt_max to clamp the step")
        return dt_max
    if dt_max is not None:
        bound = min(bound, dt_max)
    return bound


def step(
    state: SolverState,
    dt: float,
    method: str = "euler",
    enforce_cfl: bool = True,
    geometry: PatchGeometry | None = None,
) -> SolverState:
    """Advance one explicit step (forward Euler or Heun).

    Geometry is re-evaluated at each stage time; raises CflViolation when
    ``dt`` exceeds the stability bound (safety 1) unless ``enforce_cfl`` is
    off.
    """
    if method not in ("euler", "heun"):
        raise ValueError(f"unknown integrator {method!r}")
    geometry = geometry or PatchGeometry(state.chart, state.grid)
    if enforce_cfl:
        bound = cfl_dt(state, safety=1.0, geometry=geometry)
        if dt > bound * (1.0 + 1e-9):
            raise CflViolation(f"dt={dt:g} exceeds stability bound {bound:g}")
    k1 = pde_rhs(state, geometry)
    if method == "euler":
        out = state.with_update(state.v + dt * k1, state.t + dt)
    else:
        predictor = state.with_update(state.v + dt * k1, state.t + dt)
        k2 = pde_rhs(predictor, geometry)
        out = state.with_update(state.v + 0.5 * dt * (k1 + k2), state.t + dt)
    if state.system == HEAT:
        # rho_hat sqrtG is frozen by construction; the array is shared and
        # write-protected, so any drift indicates a bug.
        assert out.P is state.P
    return out
