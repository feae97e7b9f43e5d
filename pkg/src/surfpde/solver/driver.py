"""Time-stepping driver with conservation and energy-law bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..calculus import motion_divergence
from ..errors import CflViolation
from .scheme import PatchGeometry, cfl_dt, flux_divergence, pde_rhs
from .state import DIFFUSION, HEAT, SolverState


@dataclass
class RunHistory:
    """Per-step law trackers of one run.

    ``law_residual`` is the discrete energy-law defect
        E(t) + dissipation_cum(t) + motion_cum(t) - E(t0),
    where E is the quadratic energy, the dissipation rate is the exact
    discrete form -sum(u * dv/dt) (a consistent quadrature of the
    continuum dissipation integral), and motion_cum accumulates
    1/2 integral(u^2 div w) on moving charts.  For the heat system the
    motion term vanishes identically (the frozen density absorbs it), and
    on static charts both reduce to the plain energy balance.
    """

    t: np.ndarray
    mass: np.ndarray
    energy: np.ndarray
    dissipation_cum: np.ndarray
    motion_cum: np.ndarray
    law_residual: np.ndarray
    min_u: np.ndarray
    max_u: np.ndarray
    final_state: SolverState


def _observe(state: SolverState, geometry: PatchGeometry):
    geo = geometry.at(state.t)
    u = state.scalar(geo.sqrtG_c)
    area_w = state.grid.cell_area
    mass = float(np.sum(state.v) * area_w)
    if state.system == HEAT:
        energy = 0.5 * float(np.sum(state.P * u**2) * area_w)
    else:
        energy = 0.5 * float(np.sum(geo.sqrtG_c * u**2) * area_w)
    vdot = flux_divergence(state, geo, u)
    diss_rate = -float(np.sum(u * vdot) * area_w)
    if state.system == DIFFUSION and not state.chart.static:
        divw = motion_divergence(state.chart, geometry._cells, state.t)
        motion_rate = 0.5 * float(np.sum(u**2 * divw * geo.sqrtG_c) * area_w)
    else:
        motion_rate = 0.0
    return mass, energy, diss_rate, motion_rate, float(np.min(u)), float(np.max(u)), vdot


def simulate(
    state: SolverState,
    t_end: float,
    dt: float | None = None,
    cfl_safety: float = 0.4,
    dt_max: float | None = None,
    method: str = "euler",
    record_every: int = 1,
    enforce_cfl: bool = True,
) -> RunHistory:
    """Advance to ``t_end`` recording mass/energy/dissipation trackers.

    With ``dt=None`` the step is chosen from the stability bound at the
    initial state and kept fixed (the bound is re-checked every step and a
    CflViolation is raised if the geometry tightens it below the step).
    """
    geometry = PatchGeometry(state.chart, state.grid)
    span = t_end - state.t
    if span <= 0:
        raise ValueError("t_end must exceed the initial time")
    if dt is None:
        dt = cfl_dt(state, safety=cfl_safety, dt_max=dt_max, geometry=geometry)
    n_steps = max(1, int(np.ceil(span / dt - 1e-12)))
    dt = span / n_steps

    rows = []
    diss_cum = 0.0
    motion_cum = 0.0
    prev_rates = None
    energy0 = None
    check_every_step = enforce_cfl and not (state.chart.static and state.energy.kind == "linear")
    if enforce_cfl:
        bound = cfl_dt(state, safety=1.0, geometry=geometry)
        if dt > bound * (1.0 + 1e-9):
            raise CflViolation(f"dt={dt:g} exceeds stability bound {bound:g}")

    for k in range(n_steps + 1):
        mass, energy, diss_rate, motion_rate, umin, umax, vdot = _observe(state, geometry)
        if energy0 is None:
            energy0 = energy
        if prev_rates is not None:
            diss_cum += 0.5 * (prev_rates[0] + diss_rate) * dt
            motion_cum += 0.5 * (prev_rates[1] + motion_rate) * dt
        prev_rates = (diss_rate, motion_rate)
        if k % record_every == 0 or k == n_steps:
            rows.append(
                (
                    state.t,
                    mass,
                    energy,
                    diss_cum,
                    motion_cum,
                    energy + diss_cum + motion_cum - energy0,
                    umin,
                    umax,
                )
            )
        if k == n_steps:
            break
        if check_every_step and k > 0:
            bound = cfl_dt(state, safety=1.0, geometry=geometry)
            if dt > bound * (1.0 + 1e-9):
                raise CflViolation(
                    f"dt={dt:g} exceeds stability bound {bound:g} at t={state.t:g}"
                )
        if method == "euler":
            state = state.with_update(state.v + dt * vdot, state.t + dt)
        elif method == "heun":
            predictor = state.with_update(state.v + dt * vdot, state.t + dt)
            k2 = pde_rhs(predictor, geometry)
            state = state.with_update(state.v + 0.5 * dt * (vdot + k2), state.t + dt)
        else:
            raise ValueError(f"unknown integrator {method!r}")

    cols = np.array(rows, dtype=float).T
    return RunHistory(
        t=cols[0],
        mass=cols[1],
        energy=cols[2],
        dissipation_cum=cols[3],
        motion_cum=cols[4],
        law_residual=cols[5],
        min_u=cols[6],
        max_u=cols[7],
        final_state=state,
    )


def conservation_report(history: RunHistory):
    """Mass series and drift mass(t) - mass(t0)."""
    return history.t, history.mass, history.mass - history.mass[0]


def energy_report(history: RunHistory):
    """Energy-law residual series (see RunHistory)."""
    return history.t, history.law_residual


def write_report_csv(history: RunHistory, path) -> None:
    with open(path, "w") as fh:
        fh.write("t,mass,energy,dissipation_cum,law_residual,min_u,max_u\n")
        for k in range(len(history.t)):
            fh.write(
                ",".join(
                    f"{val:.16e}"
                    for val in (
                        history.t[k],
                        history.mass[k],
                        history.energy[k],
                        history.dissipation_cum[k],
                        history.law_residual[k],
                        history.min_u[k],
                        history.max_u[k],
                    )
                )
                + "\n"
            )


def write_snapshot_csv(state: SolverState, path) -> None:
    """Cell-by-cell dump: t,i,j,r,s,x1,x2,x3,u,sqrtG."""
    from ..geometry import frame

    grid = state.grid
    R, S = grid.centers()
    fr = frame(state.chart, (R, S), state.t, allow_degenerate=True)
    x = state.chart.map(R, S, state.t)
    u = state.scalar(fr.sqrtG)
    with open(path, "w") as fh:
        fh.write("t,i,j,r,s,x1,x2,x3,u,sqrtG\n")
        for i in range(grid.n_r):
            for j in range(grid.n_s):
                fh.write(
                    f"{state.t:.16e},{i},{j},"
                    f"{R[i, j]:.16e},{S[i, j]:.16e},"
                    f"{x[i, j, 0]:.16e},{x[i, j, 1]:.16e},{x[i, j, 2]:.16e},"
                    f"{u[i, j]:.16e},{fr.sqrtG[i, j]:.16e}\n"
                )
