"""Solver state for the diffusion and heat systems on one patch."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from ..geometry import Chart, ParamGrid, frame
from .energy import EnergyDensity

NEUMANN = "neumann"
DIRICHLET = "dirichlet"

DIFFUSION = "diffusion"
HEAT = "heat"


@dataclass(frozen=True)
class BoundaryCondition:
    """Per-edge condition: zero-flux or prescribed boundary value.

    ``value`` may be a constant or an array matching the edge's cell count
    (the latter is how the multi-patch coupling injects interface values).
    """

    kind: str
    value: object = 0.0

    def __post_init__(self):
        if self.kind not in (NEUMANN, DIRICHLET):
            raise ValueError(f"unknown boundary condition {self.kind!r}")


def neumann() -> BoundaryCondition:
    return BoundaryCondition(NEUMANN)


def dirichlet(value=0.0) -> BoundaryCondition:
    return BoundaryCondition(DIRICHLET, value)


@dataclass(frozen=True)
class SolverState:
    """Discrete solution at one instant.

    ``v`` holds the conserved cell density: u_hat sqrtG for the diffusion
    system, (rho theta)_hat sqrtG for the heat system.  ``P`` is the frozen
    mass density rho_hat sqrtG of the heat system (time-invariant by
    construction; the stepper re-asserts it).
    """

    chart: Chart
    grid: ParamGrid
    v: np.ndarray
    t: float
    energy: EnergyDensity
    bc: Mapping[str, BoundaryCondition]
    system: str = DIFFUSION
    P: np.ndarray | None = None
    kappa: object = 1.0

    def __post_init__(self):
        if self.system not in (DIFFUSION, HEAT):
            raise ValueError(f"unknown system {self.system!r}")
        if self.system == HEAT and self.P is None:
            raise ValueError("heat system requires the frozen density field P")
        for edge, role in self.grid.roles.items():
            if role.kind == "physical" and edge not in self.bc:
                raise ValueError(f"missing boundary condition on physical edge {edge!r}")
            if role.kind in ("periodic", "pole") and edge in self.bc:
                raise ValueError(f"boundary condition not allowed on {role.kind} edge {edge!r}")

    @staticmethod
    def from_initial(
        chart: Chart,
        grid: ParamGrid,
        u0,
        t0: float,
        energy: EnergyDensity,
        bc: Mapping[str, BoundaryCondition],
        system: str = DIFFUSION,
        rho0=None,
        kappa=1.0,
    ) -> "SolverState":
        """Build a state from initial fields sampled at cell centers.

        ``u0`` (and ``rho0`` for the heat system) may be arrays or callables
        of the space point ``(x, t)``.
        """
        sqrtG = frame(chart, grid.centers(), t0, allow_degenerate=True).sqrtG
        u0_vals = grid.sample(chart, u0, t0) if callable(u0) else np.asarray(u0, float)
        if system == HEAT:
            rho_vals = grid.sample(chart, rho0, t0) if callable(rho0) else np.asarray(rho0, float)
            P = rho_vals * sqrtG
            P.flags.writeable = False
            v = P * u0_vals
        else:
            P = None
            v = u0_vals * sqrtG
        return SolverState(chart, grid, v, t0, energy, dict(bc), system, P, kappa)

    def scalar(self, sqrtG_cells: np.ndarray) -> np.ndarray:
        """Recover the diffused scalar (u_hat or theta_hat) from ``v``.

        Pole cells are unproblematic: cell centers are strictly interior so
        the midpoint sqrtG is positive.
        """
        if self.system == HEAT:
            return self.v / self.P
        return self.v / sqrtG_cells

    def with_update(self, v: np.ndarray, t: float) -> "SolverState":
        return replace(self, v=v, t=t)

    def mass(self) -> float:
        """Conserved total: integral of C (diffusion) or rho*theta (heat)."""
        return float(np.sum(self.v) * self.grid.cell_area)
