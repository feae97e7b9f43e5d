"""Coupled diffusion on the evolving double bubble.

Five conservative patch solvers are glued by interface and seam unknowns:
at every angular node the shared value is the conductance-weighted average
of the adjacent cell values, which makes the net flux through each node
vanish and the total mass exactly conserved for any admissible geometry
motion.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from ..calculus import motion_divergence
from ..errors import CflViolation
from ..geometry import ParamGrid, frame
from ..solver.energy import EnergyDensity
from ..solver.initial import initial_field
from ..solver.scheme import (
    PatchGeometry,
    diffusivity_cells,
    face_conductances,
    flux_divergence,
    stability_limit,
)
from ..solver.state import SolverState, dirichlet
from .geometry import GAMMA0, PATCH_SURFACE, PATCHES, SEAM_A, SEAM_B, BubbleGeometry, charts_for

# coupling name -> list of (patch, edge) sharing the unknown.
COUPLINGS = {
    GAMMA0: (("A2", "r1"), ("B1", "r1"), ("S", "r1")),
    SEAM_A: (("A1", "r1"), ("A2", "r0")),
    SEAM_B: (("B2", "r1"), ("B1", "r0")),
}

_PATCH_EDGES = {
    p: [
        (name, edge)
        for name, members in COUPLINGS.items()
        for (q, edge) in members
        if q == p
    ]
    for p in PATCHES
}


@dataclass(frozen=True)
class BubbleState:
    """Discrete coupled solution: one conserved field per patch.

    ``c0`` holds the most recently solved interface/seam node values
    (single-valued; every adjacent patch trace equals them by
    construction).
    """

    geom: BubbleGeometry
    charts: Mapping[str, object]
    grids: Mapping[str, ParamGrid]
    v: Mapping[str, np.ndarray]
    t: float
    kappa: Mapping[str, float]
    energy: EnergyDensity
    c0: Mapping[str, np.ndarray] | None = None

    @staticmethod
    def create(
        geom: BubbleGeometry,
        n_r: int,
        n_theta: int,
        kappa: Mapping[str, float],
        init: Mapping[str, tuple],
        t0: float = 0.0,
        energy: EnergyDensity | None = None,
    ) -> "BubbleState":
        """Initialize from per-surface presets {'A': (preset, params), ...}.

        All five charts share the same angular grid so interface nodes align
        exactly.
        """
        geom.check(t0)
        charts = charts_for(geom, t0)
        energy = energy or EnergyDensity.linear()
        for s in ("A", "B", "S"):
            if float(kappa[s]) <= 0.0:
                raise ValueError(f"kappa_{s} must be positive")
        grids = {p: ParamGrid.from_chart(charts[p], n_r, n_theta) for p in PATCHES}
        v = {}
        for p in PATCHES:
            preset, params = init[PATCH_SURFACE[p]]
            u0 = initial_field(preset, params, charts[p], grids[p], t0)
            sqrtG = frame(charts[p], grids[p].centers(), t0, allow_degenerate=True).sqrtG
            v[p] = u0 * sqrtG
        return BubbleState(geom, charts, grids, dict(v), t0, dict(kappa), energy)

    def patch_state(self, p: str, bc_values: Mapping[str, object] | None = None) -> SolverState:
        """View one patch as a single-patch solver state.

        Interface edges receive Dirichlet entries carrying the coupling
        values (zeros when ``bc_values`` is not given; only the condition
        kind matters for conductances).
        """
        bc = {}
        for name, edge in _PATCH_EDGES[p]:
            value = 0.0 if bc_values is None else bc_values[name]
            bc[edge] = dirichlet(value)
        return SolverState(
            chart=self.charts[p],
            grid=self.grids[p],
            v=self.v[p],
            t=self.t,
            energy=self.energy,
            bc=bc,
            kappa=float(self.kappa[PATCH_SURFACE[p]]),
        )

    def mass_total(self) -> float:
        return float(sum(np.sum(self.v[p]) * self.grids[p].cell_area for p in PATCHES))


def geometry_caches(state: BubbleState) -> dict[str, PatchGeometry]:
    return {p: PatchGeometry(state.charts[p], state.grids[p]) for p in PATCHES}


def _assemble_patches(state: BubbleState, caches):
    """Per-patch (state, geometry, scalar, diffusivity, gradients, K's)."""
    out = {}
    for p in PATCHES:
        ps = state.patch_state(p)
        geo = caches[p].at(state.t)
        u = ps.scalar(geo.sqrtG_c)
        diff_c, du_r, du_s = diffusivity_cells(ps, geo, u)
        kr, ks = face_conductances(ps, geo, diff_c)
        out[p] = (ps, geo, u, diff_c, du_r, du_s, kr, ks)
    return out


def _solve_couplings(assembly):
    """Per-node flux balance: conductance-weighted average of the traces."""
    c0 = {}
    for name, members in COUPLINGS.items():
        total = 0.0
        weighted = 0.0
        traces = []
        for p, edge in members:
            _, _, u, _, _, _, kr, _ = assembly[p]
            row = kr[-1] if edge == "r1" else kr[0]
            adj = u[-1] if edge == "r1" else u[0]
            total = total + row
            weighted = weighted + row * adj
            traces.append(adj)
        fallback = sum(traces) / len(traces)
        with np.errstate(invalid="ignore", divide="ignore"):
            c0[name] = np.where(total > 0.0, weighted / np.where(total > 0.0, total, 1.0), fallback)
    return c0


def interface_values(state: BubbleState, caches=None) -> dict[str, np.ndarray]:
    """Solve the per-node flux balance for every coupling unknown.

    Each value is the conductance-weighted average of the adjacent cell
    values, so it lies within their range and zeroes the net nodal flux.
    """
    caches = caches or geometry_caches(state)
    return _solve_couplings(_assemble_patches(state, caches))


def _rhs_from_assembly(state: BubbleState, assembly):
    c0 = _solve_couplings(assembly)
    vdot = {}
    for p in PATCHES:
        _, geo, u, diff_c, du_r, du_s, kr, ks = assembly[p]
        ps = state.patch_state(p, bc_values=c0)
        vdot[p] = flux_divergence(ps, geo, u, pieces=(diff_c, du_r, du_s, kr, ks))
    return vdot, c0


def coupled_rhs(state: BubbleState, caches=None):
    """(dv/dt per patch, interface values) at the current time."""
    caches = caches or geometry_caches(state)
    return _rhs_from_assembly(state, _assemble_patches(state, caches))


def _stability(assembly) -> float:
    return min(
        stability_limit(ps, geo, kr, ks)
        for (ps, geo, _, _, _, _, kr, ks) in assembly.values()
    )


def bubble_cfl_dt(state: BubbleState, safety: float = 0.4, caches=None, dt_max: float | None = None) -> float:
    caches = caches or geometry_caches(state)
    bound = safety * _stability(_assemble_patches(state, caches))
    if not np.isfinite(bound):
        if dt_max is None:
            raise ValueError("all conductances vanish; set dt_max to clamp the step")
        return dt_max
    if dt_max is not None:
        bound = min(bound, dt_max)
    return bound


def coupled_step(
    state: BubbleState,
    dt: float,
    method: str = "euler",
    enforce_cfl: bool = True,
    caches=None,
) -> BubbleState:
    """One explicit step of the coupled system."""
    caches = caches or geometry_caches(state)
    assembly = _assemble_patches(state, caches)
    if enforce_cfl:
        bound = _stability(assembly)
        if dt > bound * (1.0 + 1e-9):
            raise CflViolation(f"dt={dt:g} exceeds coupled stability bound {bound:g}")
    k1, c0 = _rhs_from_assembly(state, assembly)
    if method == "euler":
        v_new = {p: state.v[p] + dt * k1[p] for p in PATCHES}
        return replace(state, v=v_new, t=state.t + dt, c0=c0)
    if method == "heun":
        v_pred = {p: state.v[p] + dt * k1[p] for p in PATCHES}
        predictor = replace(state, v=v_pred, t=state.t + dt, c0=c0)
        k2, _ = coupled_rhs(predictor, caches)
        v_new = {p: state.v[p] + 0.5 * dt * (k1[p] + k2[p]) for p in PATCHES}
        return replace(state, v=v_new, t=state.t + dt, c0=c0)
    raise ValueError(f"unknown integrator {method!r}")


@dataclass
class BubbleHistory:
    """Law trackers of a coupled run (see RunHistory for the conventions)."""

    t: np.ndarray
    mass_total: np.ndarray
    energy_total: np.ndarray
    dissipation_cum: np.ndarray
    motion_cum: np.ndarray
    mass_drift: np.ndarray
    energy_residual: np.ndarray
    final_state: BubbleState


def simulate_bubble(
    state: BubbleState,
    t_end: float,
    dt: float | None = None,
    cfl_safety: float = 0.4,
    method: str = "euler",
    record_every: int = 1,
    enforce_cfl: bool = True,
) -> BubbleHistory:
    """Advance the coupled system to ``t_end`` with law bookkeeping."""
    state.geom.validate(state.t, t_end)
    caches = geometry_caches(state)
    span = t_end - state.t
    if span <= 0:
        raise ValueError("t_end must exceed the initial time")
    if dt is None:
        dt = bubble_cfl_dt(state, safety=cfl_safety, caches=caches)
    n_steps = max(1, int(np.ceil(span / dt - 1e-12)))
    dt = span / n_steps

    rows = []
    diss_cum = 0.0
    motion_cum = 0.0
    prev = None
    e0 = None
    m0 = None
    moving = not state.geom.static
    for k in range(n_steps + 1):
        assembly = _assemble_patches(state, caches)
        if enforce_cfl:
            bound = _stability(assembly)
            if k < n_steps and dt > bound * (1.0 + 1e-9):
                raise CflViolation(
                    f"dt={dt:g} exceeds coupled stability bound {bound:g} at t={state.t:g}"
                )
        vdot, c0 = _rhs_from_assembly(state, assembly)
        mass = 0.0
        energy = 0.0
        diss = 0.0
        motion = 0.0
        for p in PATCHES:
            _, geo, u, _, _, _, _, _ = assembly[p]
            w = state.grids[p].cell_area
            mass += float(np.sum(state.v[p]) * w)
            energy += 0.5 * float(np.sum(geo.sqrtG_c * u**2) * w)
            diss -= float(np.sum(u * vdot[p]) * w)
            if moving:
                divw = motion_divergence(state.charts[p], caches[p]._cells, state.t)
                motion += 0.5 * float(np.sum(u**2 * divw * geo.sqrtG_c) * w)
        if e0 is None:
            e0, m0 = energy, mass
        if prev is not None:
            diss_cum += 0.5 * (prev[0] + diss) * dt
            motion_cum += 0.5 * (prev[1] + motion) * dt
        prev = (diss, motion)
        if k % record_every == 0 or k == n_steps:
            rows.append(
                (
                    state.t,
                    mass,
                    energy,
                    diss_cum,
                    motion_cum,
                    mass - m0,
                    energy + diss_cum + motion_cum - e0,
                )
            )
        if k == n_steps:
            break
        if method == "euler":
            v_new = {p: state.v[p] + dt * vdot[p] for p in PATCHES}
            state = replace(state, v=v_new, t=state.t + dt, c0=c0)
        elif method == "heun":
            v_pred = {p: state.v[p] + dt * vdot[p] for p in PATCHES}
            predictor = replace(state, v=v_pred, t=state.t + dt, c0=c0)
            k2, _ = coupled_rhs(predictor, caches)
            v_new = {p: state.v[p] + 0.5 * dt * (vdot[p] + k2[p]) for p in PATCHES}
            state = replace(state, v=v_new, t=state.t + dt, c0=c0)
        else:
            raise ValueError(f"unknown integrator {method!r}")

    cols = np.array(rows, dtype=float).T
    return BubbleHistory(
        t=cols[0],
        mass_total=cols[1],
        energy_total=cols[2],
        dissipation_cum=cols[3],
        motion_cum=cols[4],
        mass_drift=cols[5],
        energy_residual=cols[6],
        final_state=state,
    )


def bubble_laws_report(history: BubbleHistory):
    """Conservation and energy-law series of a coupled run."""
    return history.t, history.mass_drift, history.energy_residual


def write_bubble_laws_csv(history: BubbleHistory, path) -> None:
    with open(path, "w") as fh:
        fh.write("t,mass_total,energy_total,dissipation_cum,mass_drift,energy_residual\n")
        for k in range(len(history.t)):
            fh.write(
                ",".join(
                    f"{val:.16e}"
                    for val in (
                        history.t[k],
                        history.mass_total[k],
                        history.energy_total[k],
                        history.dissipation_cum[k],
                        history.mass_drift[k],
                        history.energy_residual[k],
                    )
                )
                + "\n"
            )


def write_bubble_snapshots(state: BubbleState, out_dir, prefix: str = "bubble") -> None:
    """Per-patch snapshot CSVs with the single-patch column layout."""
    import os

    from ..solver.driver import write_snapshot_csv

    for p in PATCHES:
        write_snapshot_csv(
            state.patch_state(p), os.path.join(out_dir, f"{prefix}_{p}.csv")
        )
