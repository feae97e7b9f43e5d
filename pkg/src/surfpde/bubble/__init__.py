"""Double-bubble geometry, identity checks and the coupled diffusion solver."""

from .checks import (
    bubble_conormal_checks,
    bubble_divergence_check,
    bubble_seam_checks,
    bubble_transport_check,
)
from .coupled import (
    COUPLINGS,
    BubbleHistory,
    BubbleState,
    bubble_cfl_dt,
    bubble_laws_report,
    coupled_rhs,
    coupled_step,
    geometry_caches,
    interface_values,
    simulate_bubble,
    write_bubble_laws_csv,
    write_bubble_snapshots,
)
from .geometry import (
    GAMMA0,
    PATCH_SURFACE,
    PATCHES,
    SEAM_A,
    SEAM_B,
    BubbleGeometry,
    C1Fn,
    analytic_conormals,
    charts_for,
    interface_alignment,
    interface_normals,
    printed_conormal_B,
    printed_conormal_B_defect,
)

__all__ = [
    "BubbleGeometry",
    "BubbleHistory",
    "BubbleState",
    "C1Fn",
    "COUPLINGS",
    "GAMMA0",
    "PATCHES",
    "PATCH_SURFACE",
    "SEAM_A",
    "SEAM_B",
    "analytic_conormals",
    "bubble_cfl_dt",
    "bubble_conormal_checks",
    "bubble_divergence_check",
    "bubble_laws_report",
    "bubble_seam_checks",
    "bubble_transport_check",
    "charts_for",
    "coupled_rhs",
    "coupled_step",
    "geometry_caches",
    "interface_alignment",
    "interface_normals",
    "interface_values",
    "printed_conormal_B",
    "printed_conormal_B_defect",
    "simulate_bubble",
    "write_bubble_laws_csv",
    "write_bubble_snapshots",
]
