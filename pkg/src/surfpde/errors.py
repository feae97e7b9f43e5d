"""Exception types shared across the package."""


class SurfPdeError(Exception):
    """Base class for all surfpde errors."""


class DegenerateMetric(SurfPdeError):
    """Metric determinant fell below the degeneracy tolerance at a non-pole point."""


class PairingMismatch(SurfPdeError):
    """Two edges declared as a shared seam map to different space curves."""


class NonparabolicEnergy(SurfPdeError):
    """A negative diffusivity e'(r) was encountered during flux assembly."""


class CflViolation(SurfPdeError):
    """Explicit step size exceeds the stability bound."""


class GeometryInvalid(SurfPdeError):
    """Bubble geometry parameters violate the ordering constraints."""


class ConfigError(SurfPdeError):
    """Scenario configuration is malformed or inconsistent."""
