"""Gridded ``(x, t) -> (h, u)`` samples with bilinear interpolation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .swe import DEPTH_FLOOR

__all__ = ["SolutionField"]


def _check_uniform(grid: np.ndarray, name: str) -> float:
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError(f"{name} needs at least two points")
    steps = np.diff(grid)
    if not np.all(steps > 0):
        raise ValueError(f"{name} must be strictly increasing")
    step = (grid[-1] - grid[0]) / (grid.size - 1)
    if np.max(np.abs(steps - step)) > 1e-9 * max(step, abs(grid[-1]), abs(grid[0])):
        raise ValueError(f"{name} is not uniform")
    return float(step)


@dataclass(frozen=True, eq=False)
class SolutionField:
    """Depth and velocity on a uniform tensor grid.

    ``h_values[i, j]`` is the depth at ``(x_grid[i], t_grid[j])``.
    """

    x_grid: np.ndarray
    t_grid: np.ndarray
    h_values: np.ndarray
    u_values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_grid, dtype=float)
        t = np.asarray(self.t_grid, dtype=float)
        h = np.asarray(self.h_values, dtype=float)
        u = np.asarray(self.u_values, dtype=float)
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "h_values", h)
        object.__setattr__(self, "u_values", u)
        object.__setattr__(self, "dx", _check_uniform(x, "x_grid"))
        object.__setattr__(self, "dt", _check_uniform(t, "t_grid"))
        if h.shape != (x.size, t.size) or u.shape != h.shape:
            raise ValueError(
                f"value arrays must have shape {(x.size, t.size)}, got {h.shape}, {u.shape}"
            )
        if not (np.all(np.isfinite(h)) and np.all(np.isfinite(u))):
            raise ValueError("field has non-finite values")
        if not np.all(h > DEPTH_FLOOR):
            raise DomainError(f"field depth must exceed {DEPTH_FLOOR:g}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.h_values.shape

    @property
    def x_range(self) -> tuple[float, float]:
        return float(self.x_grid[0]), float(self.x_grid[-1])

    @property
    def t_range(self) -> tuple[float, float]:
        return float(self.t_grid[0]), float(self.t_grid[-1])

    def contains(self, x, t, margin_x: float = 0.0, margin_t: float = 0.0):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        tol_x = 1e-12 * max(1.0, abs(self.x_grid[0]), abs(self.x_grid[-1]))
        tol_t = 1e-12 * max(1.0, abs(self.t_grid[0]), abs(self.t_grid[-1]))
        return (
            (x >= self.x_grid[0] + margin_x - tol_x)
            & (x <= self.x_grid[-1] - margin_x + tol_x)
            & (t >= self.t_grid[0] + margin_t - tol_t)
            & (t <= self.t_grid[-1] - margin_t + tol_t)
        )

    def _cell(self, coord, origin, step, n):
        s = (coord - origin) / step
        i = np.clip(np.floor(s).astype(int), 0, n - 2)
        w = np.clip(s - i, 0.0, 1.0)
        return i, w

    def interpolate(self, x, t):
        """Bilinear ``(h, u)`` at points ``(x, t)``; arrays broadcast together."""
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        if not np.all(self.contains(x, t)):
            raise DomainError("interpolation point outside the field domain")
        i, wx = self._cell(x, self.x_grid[0], self.dx, self.x_grid.size)
        j, wt = self._cell(t, self.t_grid[0], self.dt, self.t_grid.size)
        out = []
        for vals in (self.h_values, self.u_values):
            v = (
                (1 - wx) * (1 - wt) * vals[i, j]
                + wx * (1 - wt) * vals[i + 1, j]
                + (1 - wx) * wt * vals[i, j + 1]
                + wx * wt * vals[i + 1, j + 1]
            )
            out.append(v)
        return out[0], out[1]

    def gradients(self, x, t):
        """Central-difference partials at interior points.

        Returns ``(h, u, h_x, u_x, h_t, u_t)``. Differences use one grid
        spacing in each direction, so at grid nodes they are the usual
        second-order central differences.

        Raises:
            DomainError: if a point is within one cell of the boundary.
        """
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        if not np.all(self.contains(x, t, self.dx, self.dt)):
            raise DomainError("central differences need a one-cell margin; boundary point given")
        h, u = self.interpolate(x, t)
        hp, up = self.interpolate(x + self.dx, t)
        hm, um = self.interpolate(x - self.dx, t)
        h_x = (hp - hm) / (2 * self.dx)
        u_x = (up - um) / (2 * self.dx)
        hp, up = self.interpolate(x, t + self.dt)
        hm, um = self.interpolate(x, t - self.dt)
        h_t = (hp - hm) / (2 * self.dt)
        u_t = (up - um) / (2 * self.dt)
        return h, u, h_x, u_x, h_t, u_t

    def snapshot(self, j: int = -1):
        """``(x, h, u)`` at time index ``j``."""
        return self.x_grid, self.h_values[:, j], self.u_values[:, j]
