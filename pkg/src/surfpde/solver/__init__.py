"""Conservative explicit solvers for the surface diffusion and heat systems."""

from .driver import (
    RunHistory,
    conservation_report,
    energy_report,
    simulate,
    write_report_csv,
    write_snapshot_csv,
)
from .energy import EnergyDensity, energy_preset
from .initial import J0_FIRST_ZERO, initial_field
from .scheme import PatchGeometry, cfl_dt, face_conductances, flux_divergence, pde_rhs, step
from .state import (
    DIFFUSION,
    DIRICHLET,
    HEAT,
    NEUMANN,
    BoundaryCondition,
    SolverState,
    dirichlet,
    neumann,
)

__all__ = [
    "BoundaryCondition",
    "DIFFUSION",
    "DIRICHLET",
    "EnergyDensity",
    "HEAT",
    "J0_FIRST_ZERO",
    "NEUMANN",
    "PatchGeometry",
    "RunHistory",
    "SolverState",
    "cfl_dt",
    "conservation_report",
    "dirichlet",
    "energy_preset",
    "energy_report",
    "face_conductances",
    "flux_divergence",
    "initial_field",
    "neumann",
    "pde_rhs",
    "simulate",
    "step",
    "write_report_csv",
    "write_snapshot_csv",
]
