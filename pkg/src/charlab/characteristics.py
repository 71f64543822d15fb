"""Characteristic tracing and a two-invariant method-of-characteristics solver.

Family ``+1`` moves with ``u + sqrt(h)`` and carries ``J+ = u + 2 sqrt(h)``;
family ``-1`` moves with ``u - sqrt(h)`` and carries ``J- = u - 2 sqrt(h)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import BlowUpError, CFLError, DomainError
from .field import SolutionField
from .swe import invariants_from_arrays, states_from_invariant_arrays

__all__ = [
    "CharCurve",
    "trace_characteristic",
    "trace_many",
    "invariant_drift",
    "moc_solve",
    "BLOWUP_GRADIENT",
]

BLOWUP_GRADIENT = 1e6
EDGE_CELLS = 5


def _check_family(family: int) -> int:
    if family not in (-1, 1):
        raise ValueError(f"family must be +1 or -1, got {family}")
    return int(family)


def _speed_and_invariant(h, u, family):
    root = np.sqrt(h)
    return u + family * root, u + 2 * family * root


@dataclass(frozen=True, eq=False)
class CharCurve:
    """Samples along one traced characteristic.

    ``exited`` is set when the curve left the x-domain before ``t1``; the
    samples then stop at the last step that stayed inside.
    """

    family: int
    t: np.ndarray
    x: np.ndarray
    h: np.ndarray
    u: np.ndarray
    J: np.ndarray
    exited: bool = False

    @property
    def drift(self) -> float:
        return float(np.max(np.abs(self.J - self.J[0])))

    @property
    def samples(self) -> list[tuple[float, float, float, float, float]]:
        return list(zip(self.t.tolist(), self.x.tolist(), self.h.tolist(), self.u.tolist(), self.J.tolist()))


def trace_many(
    field: SolutionField,
    family: int,
    x0: Sequence[float],
    t0: float,
    t1: float,
    dt: float,
) -> list[CharCurve]:
    """Trace ``dx/dt = lambda_family`` from several seeds with fixed-step RK4."""
    family = _check_family(family)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if not np.all(field.contains(x0, t0)):
        raise DomainError("start point outside the field domain")
    if t1 > field.t_grid[-1] + 1e-12 * max(1.0, abs(field.t_grid[-1])) or t1 <= t0:
        raise DomainError(f"need t0 < t1 <= {field.t_grid[-1]}, got t0={t0}, t1={t1}")
    t1 = min(t1, float(field.t_grid[-1]))

    nsteps = max(1, math.ceil((t1 - t0) / dt - 1e-9))
    times = t0 + dt * np.arange(nsteps + 1)
    times[-1] = t1

    nseed = x0.size
    xs = np.full((nsteps + 1, nseed), np.nan)
    xs[0] = x0
    last = np.zeros(nseed, dtype=int)
    active = np.ones(nseed, dtype=bool)
    xmin, xmax = field.x_range

    def speed(x, t):
        h, u = field.interpolate(x, t)
        return u + family * np.sqrt(h)

    x = x0.copy()
    for n in range(nsteps):
        if not np.any(active):
            break
        ta, step = times[n], times[n + 1] - times[n]
        idx = np.flatnonzero(active)
        xa = x[idx]
        ok = np.ones(idx.size, dtype=bool)
        stages = []
        for frac, prev_w in ((0.0, 0.0), (0.5, 0.5), (0.5, 0.5), (1.0, 1.0)):
            xs_stage = xa if not stages else xa + prev_w * step * stages[-1]
            inside = (xs_stage >= xmin) & (xs_stage <= xmax)
            ok &= inside
            k = np.zeros_like(xa)
            k[inside] = speed(xs_stage[inside], ta + frac * step)
            stages.append(k)
        k1, k2, k3, k4 = stages
        xn = xa + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        ok &= (xn >= xmin) & (xn <= xmax)
        good = idx[ok]
        x[good] = xn[ok]
        xs[n + 1, good] = xn[ok]
        last[good] = n + 1
        active[idx[~ok]] = False

    curves = []
    for s in range(nseed):
        m = last[s] + 1
        t_s = times[:m]
        x_s = xs[:m, s]
        h, u = field.interpolate(x_s, t_s)
        _, J = _speed_and_invariant(h, u, family)
        exited = bool(last[s] < nsteps)
        curves.append(CharCurve(family, t_s.copy(), x_s.copy(), h, u, J, exited))
    return curves


def trace_characteristic(
    field: SolutionField, family: int, x0: float, t0: float, t1: float, dt: float
) -> CharCurve:
    """Trace one characteristic of ``family`` starting at ``(x0, t0)``.

    The field is interpolated bilinearly; integration is classical RK4 with
    fixed step ``dt`` (the last step is shortened to land on ``t1``).

    Raises:
        DomainError: if the start point lies outside the field.
        ValueError: if ``dt <= 0``.
    """
    return trace_many(field, family, [x0], t0, t1, dt)[0]


def invariant_drift(
    field: SolutionField,
    family: int,
    seeds: Sequence[float],
    t0: float,
    t1: float,
    dt: float,
) -> float:
    """Largest drift of the matching Riemann invariant over all seeds."""
    return max(c.drift for c in trace_many(field, family, seeds, t0, t1, dt))


def _check_edges(values: np.ndarray, name: str):
    for end in (values[: EDGE_CELLS + 1], values[-EDGE_CELLS - 1 :]):
        if np.max(np.abs(end - end[0])) > 1e-10 * max(1.0, abs(end[0])):
            raise DomainError(
                f"initial {name} must be constant within {EDGE_CELLS} cells of each end"
            )


def moc_solve(
    initial: tuple[Callable, Callable],
    domain: tuple[float, float],
    t_end: float,
    nx: int,
    dt: float,
) -> SolutionField:
    """Advance both Riemann invariants along their own characteristics.

    Each step is semi-Lagrangian: the foot of the characteristic arriving at
    every node is located with a midpoint predictor in the frozen old field
    followed by one trapezoidal correction using the predicted new speeds,
    and the invariant is read off the old profile by cubic-spline
    interpolation. Invariants are held constant beyond the domain ends, so
    the initial data must be constant within five cells of each end.

    Args:
        initial: ``(h0, u0)`` callables of ``x`` (numpy arrays).
        domain: ``(x_min, x_max)``.
        t_end: Final time; the step is shrunk so that ``t_end`` is hit exactly.
        nx: Number of grid nodes, including both ends.
        dt: Requested time step.

    Returns:
        A field holding every time level.

    Raises:
        CFLError: if ``dt * max|lambda| / dx > 1`` at any step.
        DryStateError: if the invariants collapse to a dry state.
        BlowUpError: if ``max |h_x|`` exceeds 1e6.
    """
    x_min, x_max = map(float, domain)
    if not x_min < x_max:
        raise ValueError("domain must satisfy x_min < x_max")
    if nx < 2 * EDGE_CELLS + 4:
        raise ValueError(f"nx={nx} too small")
    if not (t_end > 0 and dt > 0):
        raise ValueError("t_end and dt must be positive")
    x = np.linspace(x_min, x_max, nx)
    dx = (x_max - x_min) / (nx - 1)
    nsteps = math.ceil(t_end / dt - 1e-9)
    step = t_end / nsteps

    h0 = np.asarray(initial[0](x), dtype=float) * np.ones(nx)
    u0 = np.asarray(initial[1](x), dtype=float) * np.ones(nx)
    _check_edges(h0, "depth")
    _check_edges(u0, "velocity")
    jm, jp = invariants_from_arrays(h0, u0)
    h, u = states_from_invariant_arrays(jm, jp)

    H = np.empty((nx, nsteps + 1))
    U = np.empty((nx, nsteps + 1))
    H[:, 0], U[:, 0] = h0, u0

    def spline(vals):
        return CubicSpline(x, vals, bc_type="not-a-knot", extrapolate=True)

    def at(sp, pts):
        return sp(np.clip(pts, x_min, x_max))

    for n in range(nsteps):
        lam_m = u - np.sqrt(h)
        lam_p = u + np.sqrt(h)
        courant = step * max(np.max(np.abs(lam_m)), np.max(np.abs(lam_p))) / dx
        if courant > 1.0 + 1e-12:
            raise CFLError(f"Courant number {courant:.4g} > 1 at t={n * step:.6g}")
        new = []
        s_jm, s_jp = spline(jm), spline(jp)
        s_lm, s_lp = spline(lam_m), spline(lam_p)
        feet0 = []
        for s_lam, lam in ((s_lm, lam_m), (s_lp, lam_p)):
            mid = x - 0.5 * step * lam
            feet0.append(x - step * at(s_lam, mid))
        jm_star = at(s_jm, feet0[0])
        jp_star = at(s_jp, feet0[1])
        h_star, u_star = states_from_invariant_arrays(jm_star, jp_star)
        root_star = np.sqrt(h_star)
        for s_lam, s_j, foot, lam_new in (
            (s_lm, s_jm, feet0[0], u_star - root_star),
            (s_lp, s_jp, feet0[1], u_star + root_star),
        ):
            foot = x - 0.5 * step * (lam_new + at(s_lam, foot))
            new.append(at(s_j, foot))
        jm, jp = new
        h, u = states_from_invariant_arrays(jm, jp)
        grad = np.max(np.abs(np.diff(h))) / dx
        if not np.isfinite(grad) or grad > BLOWUP_GRADIENT:
            raise BlowUpError(f"max |h_x| = {grad:.3g} at t={(n + 1) * step:.6g}")
        H[:, n + 1], U[:, n + 1] = h, u

    t_grid = np.linspace(0.0, t_end, nsteps + 1)
    return SolutionField(x, t_grid, H, U)
