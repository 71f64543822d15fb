"""First-order Rusanov finite-volume reference solver for cross-checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, DryStateError
from .field import SolutionField
from .swe import DEPTH_FLOOR

__all__ = ["ConservedState", "FVDiagnostics", "fv_solve", "rusanov_flux"]


@dataclass(frozen=True)
class ConservedState:
    h: float
    q: float

    def __post_init__(self):
        if not self.h > DEPTH_FLOOR:
            raise DomainError(f"depth h={self.h} violates h > {DEPTH_FLOOR:g}")

    @property
    def u(self) -> float:
        return self.q / self.h


@dataclass
class FVDiagnostics:
    """Per-step totals ``sum(h) dx`` and ``sum(q) dx``, starting with the initial data."""

    times: list[float] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)
    momentum: list[float] = field(default_factory=list)

    def max_step_change(self) -> tuple[float, float]:
        return (
            float(np.max(np.abs(np.diff(self.mass)), initial=0.0)),
            float(np.max(np.abs(np.diff(self.momentum)), initial=0.0)),
        )


def _physical_flux(h, q):
    return q, q * q / h + 0.5 * h * h


def rusanov_flux(hl, ql, hr, qr):
    """Local Lax-Friedrichs flux between left and right cell states."""
    fhl, fql = _physical_flux(hl, ql)
    fhr, fqr = _physical_flux(hr, qr)
    speed = np.maximum(np.abs(ql / hl) + np.sqrt(hl), np.abs(qr / hr) + np.sqrt(hr))
    fh = 0.5 * (fhl + fhr) - 0.5 * speed * (hr - hl)
    fq = 0.5 * (fql + fqr) - 0.5 * speed * (qr - ql)
    return fh, fq


def fv_solve(
    initial: tuple[Callable, Callable],
    domain: tuple[float, float],
    t_end: float,
    nx: int,
    cfl: float,
    *,
    nt_out: int = 11,
    diagnostics: FVDiagnostics | None = None,
) -> SolutionField:
    """Solve the conservative shallow-water system with Rusanov fluxes.

    Cells are centred on ``linspace(x_min, x_max, nx)``; boundaries are
    zero-gradient. Forward Euler with ``dt = cfl * dx / max(|u| + sqrt(h))``,
    shortened to land on each of ``nt_out`` equally spaced output times.

    Raises:
        DryStateError: if the depth drops to the floor.
        FloatingPointError: on non-finite values.
    """
    if not 0 < cfl < 1:
        raise ValueError(f"cfl must lie in (0, 1), got {cfl}")
    x_min, x_max = map(float, domain)
    if not x_min < x_max:
        raise ValueError("domain must satisfy x_min < x_max")
    if nt_out < 2:
        raise ValueError("need at least two output times")
    x = np.linspace(x_min, x_max, nx)
    dx = (x_max - x_min) / (nx - 1)
    h = np.asarray(initial[0](x), dtype=float) * np.ones(nx)
    u = np.asarray(initial[1](x), dtype=float) * np.ones(nx)
    if not np.all(h > DEPTH_FLOOR):
        raise DryStateError("initial depth below the floor")
    q = h * u

    t_out = np.linspace(0.0, t_end, nt_out)
    H = np.empty((nx, nt_out))
    U = np.empty((nx, nt_out))
    H[:, 0], U[:, 0] = h, u
    if diagnostics is not None:
        diagnostics.times.append(0.0)
        diagnostics.mass.append(math.fsum(h) * dx)
        diagnostics.momentum.append(math.fsum(q) * dx)

    t = 0.0
    for k in range(1, nt_out):
        target = t_out[k]
        while t < target:
            smax = np.max(np.abs(q / h) + np.sqrt(h))
            dt = min(cfl * dx / smax, target - t)
            he = np.concatenate(([h[0]], h, [h[-1]]))
            qe = np.concatenate(([q[0]], q, [q[-1]]))
            fh, fq = rusanov_flux(he[:-1], qe[:-1], he[1:], qe[1:])
            h = h - dt / dx * (fh[1:] - fh[:-1])
            q = q - dt / dx * (fq[1:] - fq[:-1])
            t = target if target - t <= dt else t + dt
            if not (np.all(np.isfinite(h)) and np.all(np.isfinite(q))):
                raise FloatingPointError(f"non-finite state at t={t:.6g}")
            if not np.all(h > DEPTH_FLOOR):
                raise DryStateError(f"dry cell at t={t:.6g}")
            if diagnostics is not None:
                diagnostics.times.append(t)
                diagnostics.mass.append(math.fsum(h) * dx)
                diagnostics.momentum.append(math.fsum(q) * dx)
        H[:, k], U[:, k] = h, q / h
    return SolutionField(x, t_out, H, U)
