"""Cell-centered structured grids over a chart's parameter rectangle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .chart import Chart, EdgeRole


@dataclass(frozen=True)
class ParamGrid:
    """Uniform cell-centered grid on [r_lo, r_hi] x [s_lo, s_hi].

    Cell (i, j) is centered at ``(r_lo + (i+1/2) dr, s_lo + (j+1/2) ds)``;
    faces tile the domain exactly.  Edge roles are copied from the chart so
    grid operators know which directions wrap periodically.
    """

    n_r: int
    n_s: int
    domain: tuple[float, float, float, float]
    roles: Mapping[str, EdgeRole]

    def __post_init__(self):
        if self.n_r < 2 or self.n_s < 2:
            raise ValueError("grid needs at least 2 cells per direction")

    @staticmethod
    def from_chart(chart: Chart, n_r: int, n_s: int) -> "ParamGrid":
        return ParamGrid(n_r, n_s, chart.domain, dict(chart.roles))

    @property
    def dr(self) -> float:
        return (self.domain[1] - self.domain[0]) / self.n_r

    @property
    def ds(self) -> float:
        return (self.domain[3] - self.domain[2]) / self.n_s

    @property
    def cell_area(self) -> float:
        return self.dr * self.ds

    @property
    def r_centers(self) -> np.ndarray:
        return self.domain[0] + (np.arange(self.n_r) + 0.5) * self.dr

    @property
    def s_centers(self) -> np.ndarray:
        return self.domain[2] + (np.arange(self.n_s) + 0.5) * self.ds

    @property
    def r_edges(self) -> np.ndarray:
        return self.domain[0] + np.arange(self.n_r + 1) * self.dr

    @property
    def s_edges(self) -> np.ndarray:
        return self.domain[2] + np.arange(self.n_s + 1) * self.ds

    def centers(self):
        """Meshgrid (R, S) of cell centers, shape (n_r, n_s)."""
        return np.meshgrid(self.r_centers, self.s_centers, indexing="ij")

    def periodic_axis(self, axis: int) -> bool:
        e0, e1 = ("r0", "r1") if axis == 0 else ("s0", "s1")
        return self.roles[e0].kind == "periodic" and self.roles[e1].kind == "periodic"

    def diff(self, F: np.ndarray, axis: int) -> np.ndarray:
        """Cell-centered derivative of a sampled field along a grid axis.

        Central differences inside; simple one-sided differences on the two
        boundary slices of non-periodic axes; wrap-around central
        differences on periodic axes.  Works for scalar fields (n_r, n_s)
        and vector fields (n_r, n_s, 3).
        """
        delta = self.dr if axis == 0 else self.ds
        if self.periodic_axis(axis):
            return (np.roll(F, -1, axis=axis) - np.roll(F, 1, axis=axis)) / (2.0 * delta)
        return np.gradient(F, delta, axis=axis, edge_order=1)

    def sample(self, chart: Chart, fn, t: float) -> np.ndarray:
        """Sample ``fn(x, t)`` (a function of the space point) at cell centers."""
        R, S = self.centers()
        x = chart.map(R, S, t)
        return np.asarray(fn(x, t))
