"""Chart-based differential geometry: frames, curvature and quadrature."""

from .chart import (
    EDGE_NAMES,
    INTERFACE,
    PERIODIC,
    PHYSICAL,
    POLE,
    BoundarySegment,
    Chart,
    EdgeRole,
    boundary_segments,
    interface,
    periodic,
    physical,
    pole,
    validate_chart,
)
from .frame import (
    EPS_G,
    FrameData,
    boundary_line_element,
    conormal,
    frame,
    mean_curvature,
    metric_components,
    normal,
    normal_fd_derivatives,
    second_derivatives,
    weingarten_coeffs,
)
from .grid import ParamGrid
from .ops import (
    boundary_integral,
    gradient_magnitude_squared,
    surface_divergence,
    surface_gradient,
    surface_integral,
)

__all__ = [
    "EDGE_NAMES",
    "INTERFACE",
    "PERIODIC",
    "PHYSICAL",
    "POLE",
    "BoundarySegment",
    "Chart",
    "EdgeRole",
    "EPS_G",
    "FrameData",
    "ParamGrid",
    "boundary_integral",
    "boundary_line_element",
    "boundary_segments",
    "conormal",
    "frame",
    "gradient_magnitude_squared",
    "interface",
    "mean_curvature",
    "metric_components",
    "normal",
    "normal_fd_derivatives",
    "periodic",
    "physical",
    "pole",
    "second_derivatives",
    "surface_divergence",
    "surface_gradient",
    "surface_integral",
    "validate_chart",
    "weingarten_coeffs",
]
