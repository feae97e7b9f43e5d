"""Nonlinear energy densities defining the diffusivity e'(|grad u|^2)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import NonparabolicEnergy


@dataclass(frozen=True)
class EnergyDensity:
    """Pair (e, e') defining the flux e'(|grad u|^2) grad u.

    Presets:
      linear     e(r) = r,                e'(r) = 1
      power(p)   e(r) = r^(p+1)/(p+1),    e'(r) = r^p
      log        e(r) = log(1 + r),       e'(r) = 1/(1 + r)

    Custom densities are spot-checked for parabolicity (e' > 0) on a
    logarithmic sample of positive arguments; the power preset is
    degenerate at r = 0 (e'(0) = 0), which is allowed.
    """

    kind: str
    e: Callable[[np.ndarray], np.ndarray]
    e_prime: Callable[[np.ndarray], np.ndarray]

    @staticmethod
    def linear() -> "EnergyDensity":
        return EnergyDensity("linear", lambda r: np.asarray(r, float), lambda r: np.ones_like(np.asarray(r, float)))

    @staticmethod
    def power(p: float = 1.0) -> "EnergyDensity":
        if p <= 0:
            raise ValueError("power-law exponent must be positive")
        return EnergyDensity(
            f"power({p:g})",
            lambda r: np.asarray(r, float) ** (p + 1.0) / (p + 1.0),
            lambda r: np.asarray(r, float) ** p,
        )

    @staticmethod
    def log() -> "EnergyDensity":
        return EnergyDensity(
            "log",
            lambda r: np.log1p(np.asarray(r, float)),
            lambda r: 1.0 / (1.0 + np.asarray(r, float)),
        )

    @staticmethod
    def custom(e: Callable, e_prime: Callable, name: str = "custom") -> "EnergyDensity":
        density = EnergyDensity(name, e, e_prime)
        density.check_parabolic()
        return density

    def check_parabolic(self) -> None:
        """Raise NonparabolicEnergy if e' <= 0 at sampled positive arguments."""
        samples = np.logspace(-6, 2, 17)
        vals = np.asarray(self.e_prime(samples), float)
        if np.any(vals <= 0.0) or not np.all(np.isfinite(vals)):
            raise NonparabolicEnergy(
                f"energy density {self.kind!r} has e' <= 0 on [1e-6, 1e2]"
            )


def energy_preset(name: str, p: float = 1.0) -> EnergyDensity:
    if name == "linear":
        return EnergyDensity.linear()
    if name == "power":
        return EnergyDensity.power(p)
    if name == "log":
        return EnergyDensity.log()
    raise ValueError(f"unknown energy preset {name!r}")
