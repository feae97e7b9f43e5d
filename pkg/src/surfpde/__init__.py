"""surfpde: chart-based surface calculus and evolving-surface diffusion.

Subpackages:
  geometry  - charts, metric frames, co-normals, curvature, quadrature
  calculus  - integral identities turned into numerical residuals
  solver    - conservative explicit diffusion/heat stepping on one patch
  bubble    - double-bubble geometry and the coupled three-surface solver
  cli       - batch interface (verify | run | bubble | converge)
"""

from . import bubble, calculus, geometry, solver
from .errors import (
    CflViolation,
    ConfigError,
    DegenerateMetric,
    GeometryInvalid,
    NonparabolicEnergy,
    PairingMismatch,
    SurfPdeError,
)

__version__ = "0.1.0"

__all__ = [
    "CflViolation",
    "ConfigError",
    "DegenerateMetric",
    "GeometryInvalid",
    "NonparabolicEnergy",
    "PairingMismatch",
    "SurfPdeError",
    "bubble",
    "calculus",
    "geometry",
    "solver",
]
