"""Initial-condition presets shared by the CLI and the bubble coupling."""

from __future__ import annotations

import numpy as np
from scipy.special import j0, jn_zeros

from ..geometry import Chart, ParamGrid

#: First zero of the Bessel function J0; j01^2 is the principal Dirichlet
#: decay rate of the unit disc.
J0_FIRST_ZERO = float(jn_zeros(0, 1)[0])


def _wrap_angle(d: np.ndarray) -> np.ndarray:
    return np.arctan2(np.sin(d), np.cos(d))


def initial_field(preset: str, params: dict, chart: Chart, grid: ParamGrid, t0: float) -> np.ndarray:
    """Sample a named initial condition at cell centers.

    Presets: ``constant`` (c), ``gaussian`` (theta0, width; ridge in the
    angular coordinate), ``indicator_patch`` (theta0, width),
    ``bessel`` (J0 mode of the unit disc) and ``sine`` (product sine mode
    of the parameter rectangle).
    """
    R, S = grid.centers()
    if preset == "constant":
        return np.full_like(R, float(params.get("c", 1.0)))
    if preset == "gaussian":
        theta0 = float(params.get("theta0", 0.0))
        width = float(params.get("width", 0.5))
        return np.exp(-(_wrap_angle(S - theta0) / width) ** 2)
    if preset == "indicator_patch":
        theta0 = float(params.get("theta0", 0.0))
        width = float(params.get("width", 0.5))
        return np.where(np.abs(_wrap_angle(S - theta0)) <= width, 1.0, 0.0)
    if preset == "bessel":
        # Radial J0 mode; exact Dirichlet eigenfunction of the unit disc.
        return j0(J0_FIRST_ZERO * R)
    if preset == "sine":
        r_lo, r_hi, s_lo, s_hi = grid.domain
        return np.sin(np.pi * (R - r_lo) / (r_hi - r_lo)) * np.sin(
            np.pi * (S - s_lo) / (s_hi - s_lo)
        )
    raise ValueError(f"unknown initial preset {preset!r}")
