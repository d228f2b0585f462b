"""Position-grid CV registers."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

MIN_POINTS = 8
DEFAULT_POINTS = 2048
DEFAULT_HALF_WIDTH = 8.0


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not np.isfinite(self.x_min) or not np.isfinite(self.x_max) or not self.x_min < self.x_max:
            raise GridError(f"degenerate grid range [{self.x_min}, {self.x_max}]")
        if int(self.n_points) != self.n_points or self.n_points < MIN_POINTS:
            raise GridError(f"n_points must be an integer >= {MIN_POINTS}, got {self.n_points!r}")
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def nearest_index(self, x0: float) -> int:
        if not self.x_min - 0.5 * self.dx <= x0 <= self.x_max + 0.5 * self.dx:
            raise GridError(f"x = {x0} lies outside the grid [{self.x_min}, {self.x_max}]")
        return int(np.clip(np.rint((x0 - self.x_min) / self.dx), 0, self.n_points - 1))

    def to_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "n_points": self.n_points}


@dataclass(frozen=True)
class GridWavefunction:
    grid: GridSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_points,):
            raise GridError(f"amplitude shape {amps.shape} does not match grid of {self.grid.n_points} points")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dx))

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def mean(self) -> float:
        x = self.grid.points
        return float(np.sum(x * self.density) * self.grid.dx / self.norm**2)

    @property
    def std(self) -> float:
        x = self.grid.points
        p = self.density * self.grid.dx / self.norm**2
        m = np.sum(x * p)
        return float(np.sqrt(max(np.sum((x - m) ** 2 * p), 0.0)))


def make_grid(x_min: float, x_max: float, n_points: int) -> GridSpec:
    return GridSpec(x_min, x_max, n_points)


def centered_grid(center: float, half_width: float, n_points: int = DEFAULT_POINTS) -> GridSpec:
    """Grid over roughly ``center +/- half_width`` that has ``center`` as a node.

    For even ``n_points`` the node sits at index ``n_points // 2`` and the range
    is one step shorter on the right, so postselecting at ``center`` is exact.
    """
    if half_width <= 0:
        raise GridError(f"half_width must be positive, got {half_width}")
    if n_points < MIN_POINTS:
        raise GridError(f"n_points must be >= {MIN_POINTS}, got {n_points}")
    dx = 2.0 * half_width / n_points if n_points % 2 == 0 else 2.0 * half_width / (n_points - 1)
    left = n_points // 2
    return GridSpec(center - left * dx, center + (n_points - 1 - left) * dx, n_points)


def default_sigma(big_l: float) -> float:
    """Default envelope width ``L / (4 pi)``."""
    return big_l / (4.0 * np.pi)


def default_grid(center: float, sigma: float, n_points: int = DEFAULT_POINTS,
                 half_width_sigmas: float = DEFAULT_HALF_WIDTH) -> GridSpec:
    return centered_grid(center, half_width_sigmas * sigma, n_points)


def normalize(wf: GridWavefunction) -> tuple[GridWavefunction, float]:
    """Rescale to unit grid norm; returns the new wavefunction and the old norm."""
    norm = wf.norm
    if norm == 0 or not np.isfinite(norm):
        raise GridError("cannot normalize a zero wavefunction (zero-probability branch)")
    return GridWavefunction(wf.grid, wf.amplitudes / norm), norm


def gaussian_wavefunction(grid: GridSpec, center: float, sigma: float) -> GridWavefunction:
    """Normalized ``exp(-(x - center)^2 / (4 sigma^2))``, so ``|psi|^2`` has std ``sigma``."""
    if not sigma > 0:
        raise GridError(f"sigma must be positive, got {sigma}")
    if center - 6 * sigma < grid.x_min or center + 6 * sigma > grid.x_max:
        warnings.warn(
            f"Gaussian center={center}, sigma={sigma} is not contained within 6 sigma by the grid "
            f"[{grid.x_min}, {grid.x_max}]",
            stacklevel=2,
        )
    x = grid.points
    amps = np.exp(-((x - center) ** 2) / (4.0 * sigma**2)).astype(complex)
    return normalize(GridWavefunction(grid, amps))[0]
