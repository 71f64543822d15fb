"""Analytic simple-wave solutions of the shallow-water equations.

A simple wave of family ``a`` (``+1`` or ``-1``) is fixed by a depth profile
``H`` and a constant ``alpha``::

    y = x - (u + a sqrt(h)) t,    u = 2 a sqrt(h) + alpha,    h = H(y)

so the wave speed along each straight characteristic is
``c(y) = 3 a sqrt(H(y)) + alpha``. The same field is invariant under
``d/dt + (u + a sqrt(h)) d/dx`` and, with ``f = 1/H'`` re-expressed through
``h``, under the restricted generator with ``xi = u`` (see
:mod:`charlab.symmetry`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from numpy.polynomial import Chebyshev
from scipy import integrate, optimize

from .errors import DomainError, MultivaluedError, OutOfDomainError
from .field import SolutionField
from .swe import SWState

__all__ = [
    "PROFILE_FLOOR",
    "Profile",
    "constant_profile",
    "sine_profile",
    "profile_from_f",
    "SimpleWave",
    "BreakingReport",
    "make_simple_wave",
    "eval_wave",
    "breaking_time",
    "sample_field",
    "pde_residual",
    "nonclassical_f",
]

PROFILE_FLOOR = 1e-6
ROOT_TOL = 1e-12
BISECT_WIDTH = 1e-8
NEWTON_STEPS = 5
SCAN_POINTS = 20001


@dataclass(frozen=True, eq=False)
class Profile:
    """Depth profile ``H(y)`` with its slope.

    ``H`` and ``dH`` must accept numpy arrays. A profile is either periodic
    (``period`` set; evaluation allowed for every ``y``) or lives on the
    finite interval ``y_domain``.
    """

    H: Callable[[np.ndarray], np.ndarray]
    dH: Callable[[np.ndarray], np.ndarray]
    y_domain: tuple[float, float] = (-math.inf, math.inf)
    period: float | None = None
    name: str = "profile"

    def __post_init__(self):
        lo, hi = self.y_domain
        if not lo < hi:
            raise ValueError(f"empty y_domain {self.y_domain}")
        if self.period is None and not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("a non-periodic profile needs a finite y_domain")

    @property
    def scan_domain(self) -> tuple[float, float]:
        if self.period is not None:
            return 0.0, float(self.period)
        return float(self.y_domain[0]), float(self.y_domain[1])

    @cached_property
    def _scan(self):
        lo, hi = self.scan_domain
        y = np.linspace(lo, hi, SCAN_POINTS)
        return y, np.asarray(self.H(y), dtype=float) * np.ones_like(y)

    @cached_property
    def bounds(self) -> tuple[float, float]:
        """``(min H, max H)`` over the scan domain."""
        y, vals = self._scan
        lo, hi = self.scan_domain
        step = (hi - lo) / (SCAN_POINTS - 1)
        out = []
        for sign, k in ((1.0, int(np.argmin(vals))), (-1.0, int(np.argmax(vals)))):
            a, b = max(lo, y[k] - step), min(hi, y[k] + step)
            best = vals[k]
            if b > a:
                res = optimize.minimize_scalar(
                    lambda s: sign * float(self.H(np.asarray(s))),
                    bounds=(a, b),
                    method="bounded",
                    options={"xatol": 1e-12},
                )
                best = min(sign * best, res.fun) * sign
            out.append(float(best))
        return out[0], out[1]

    @property
    def is_monotone(self) -> bool:
        y, _ = self._scan
        slope = np.asarray(self.dH(y), dtype=float) * np.ones_like(y)
        return bool(np.all(slope > 0) or np.all(slope < 0))

    def inverse(self, h):
        """``y`` with ``H(y) = h`` for a monotone profile on a finite domain."""
        if self.period is not None or not self.is_monotone:
            raise ValueError(f"{self.name} is not invertible")
        h = np.asarray(h, dtype=float)
        lo = np.full(h.shape, float(self.y_domain[0]))
        hi = np.full(h.shape, float(self.y_domain[1]))
        increasing = float(np.mean(self.dH(self._scan[0]))) > 0
        g = (lambda y: self.H(y) - h) if increasing else (lambda y: h - self.H(y))
        if np.any(g(lo) > 0) or np.any(g(hi) < 0):
            raise OutOfDomainError(f"depth outside the range of {self.name}")
        return _bracketed_root(g, lambda y: (1 if increasing else -1) * self.dH(y), lo, hi)


def constant_profile(value: float = 1.0) -> Profile:
    value = float(value)
    return Profile(
        H=lambda y: np.full(np.shape(y), value),
        dH=lambda y: np.zeros(np.shape(y)),
        period=2 * math.pi,
        name=f"constant({value:g})",
    )


def sine_profile(mean: float = 1.0, amplitude: float = 0.1, wavenumber: float = 1.0) -> Profile:
    """``H(y) = mean + amplitude * sin(wavenumber * y)``."""
    return Profile(
        H=lambda y: mean + amplitude * np.sin(wavenumber * y),
        dH=lambda y: amplitude * wavenumber * np.cos(wavenumber * y),
        period=2 * math.pi / wavenumber,
        name=f"sine({mean:g}, {amplitude:g}, {wavenumber:g})",
    )


def profile_from_f(
    f: Callable[[np.ndarray], np.ndarray],
    y0: float,
    H0: float,
    y_domain: tuple[float, float],
    *,
    tol: float = 1e-10,
    max_degree: int = 2048,
) -> Profile:
    """Profile with slope ``1/f``: ``H(y) = H0 + int_{y0}^{y} dz / f(z)``.

    The integral is evaluated by adaptive quadrature at Chebyshev points and
    represented by a Chebyshev interpolant whose degree grows until the tail
    coefficients drop below ``tol / 100``. ``dH`` returns ``1/f`` directly.

    Raises:
        DomainError: if ``f`` vanishes (or changes sign) on ``y_domain`` or
            the resulting profile falls below the depth floor.
    """
    lo, hi = map(float, y_domain)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"y_domain must be a finite interval, got {y_domain}")
    probe = np.linspace(lo, hi, SCAN_POINTS)
    fv = np.asarray(f(probe), dtype=float) * np.ones_like(probe)
    if not np.all(np.isfinite(fv)) or np.min(np.abs(fv)) < 1e-12 or not (
        np.all(fv > 0) or np.all(fv < 0)
    ):
        raise DomainError("f vanishes or is not finite on y_domain")

    def integrand(z):
        return 1.0 / float(f(np.asarray(z)))

    def values(ys):
        return np.array(
            [
                H0 + integrate.quad(integrand, y0, y, epsabs=tol / 100, epsrel=tol / 100, limit=500)[0]
                for y in np.atleast_1d(ys)
            ]
        )

    deg = 16
    while True:
        cheb = Chebyshev.interpolate(values, deg, domain=[lo, hi])
        tail = np.max(np.abs(cheb.coef[-4:]))
        if tail < tol / 100 * max(1.0, abs(H0)) or deg >= max_degree:
            break
        deg *= 2

    def H(y):
        return cheb(np.asarray(y, dtype=float))

    def dH(y):
        return 1.0 / np.asarray(f(np.asarray(y, dtype=float)), dtype=float)

    prof = Profile(H=H, dH=dH, y_domain=(lo, hi), name="profile_from_f")
    if prof.bounds[0] <= PROFILE_FLOOR:
        raise DomainError(f"profile drops to {prof.bounds[0]:g} <= {PROFILE_FLOOR:g}")
    return prof


def _bracketed_root(g, dg, lo, hi):
    """Vectorized bisection to ``BISECT_WIDTH`` then Newton, for increasing ``g``."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    while np.max(hi - lo, initial=0.0) > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        pos = g(mid) > 0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    y = 0.5 * (lo + hi)
    for _ in range(NEWTON_STEPS):
        gy = g(y)
        slope = dg(y)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(slope > 0, gy / slope, 0.0)
        y_new = y - step
        # stay inside the bracket
        lo_w, hi_w = lo - BISECT_WIDTH, hi + BISECT_WIDTH
        y = np.where((y_new >= lo_w) & (y_new <= hi_w), y_new, y)
        if np.max(np.abs(step), initial=0.0) < 1e-15 * (1 + np.max(np.abs(y), initial=0.0)):
            break
    return y


@dataclass(frozen=True)
class BreakingReport:
    t_break: float
    argmin_y: float


@dataclass(frozen=True, eq=False)
class SimpleWave:
    """Simple-wave solution; build with :func:`make_simple_wave`."""

    a: int
    alpha: float
    profile: Profile

    def speed(self, y):
        return 3 * self.a * np.sqrt(self.profile.H(y)) + self.alpha

    def speed_slope(self, y):
        return 1.5 * self.a * self.profile.dH(y) / np.sqrt(self.profile.H(y))

    @cached_property
    def breaking(self) -> BreakingReport:
        return breaking_time(self)

    @cached_property
    def _speed_bounds(self):
        hmin, hmax = self.profile.bounds
        c = sorted((3 * self.a * math.sqrt(hmin) + self.alpha, 3 * self.a * math.sqrt(hmax) + self.alpha))
        return c[0], c[1]

    def characteristic_origin(self, x, t):
        """Foot ``y`` of the straight characteristic through ``(x, t)``.

        Raises:
            OutOfDomainError: if the foot lies outside the profile domain.
            MultivaluedError: if ``(x, t)`` is inside a fold (past breaking).
        """
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        c_lo, c_hi = self._speed_bounds
        pad = 1e-9 * (1.0 + np.abs(t) * (1.0 + abs(c_hi) + abs(c_lo)))
        lo = x - c_hi * t - pad
        hi = x - c_lo * t + pad
        ylo, yhi = self.profile.y_domain
        lo = np.maximum(lo, ylo)
        hi = np.minimum(hi, yhi)

        def g(y):
            return y + self.speed(y) * t - x

        def dg(y):
            return 1.0 + self.speed_slope(y) * t

        if np.any(lo > hi) or np.any(g(lo) > 0) or np.any(g(hi) < 0):
            raise OutOfDomainError("characteristic foot lies outside the profile domain")

        late = t >= self.breaking.t_break
        if np.any(late):
            for xi, ti, a, b in zip(x[late], t[late], lo[late], hi[late]):
                self._check_fold(float(xi), float(ti), float(a), float(b))
        return _bracketed_root(g, dg, lo, hi)

    def _check_fold(self, x, t, lo, hi, n=4001):
        y = np.linspace(lo, hi, n)
        slope = 1.0 + self.speed_slope(y) * t
        X = y + self.speed(y) * t
        decreasing = slope < 0
        if not np.any(decreasing):
            return
        edges = np.flatnonzero(np.diff(decreasing.astype(int)))
        starts = list(np.flatnonzero(decreasing[:1])) + [e + 1 for e in edges if decreasing[e + 1]]
        for s in starts:
            e = s
            while e + 1 < n and decreasing[e + 1]:
                e += 1
            top = X[max(s - 1, 0) : s + 1].max()
            bottom = X[e : min(e + 2, n)].min()
            if bottom <= x <= top:
                raise MultivaluedError(
                    f"(x={x}, t={t}) lies in a fold: three characteristics cross "
                    f"(t_break={self.breaking.t_break:.6g})"
                )

    def state(self, x, t):
        """Vectorized ``(h, u)`` at ``(x, t)``."""
        y = self.characteristic_origin(x, t)
        h = self.profile.H(y) * np.ones_like(y)
        return h, 2 * self.a * np.sqrt(h) + self.alpha


def make_simple_wave(a: int, alpha: float, profile: Profile) -> SimpleWave:
    if a not in (-1, 1):
        raise ValueError(f"wave family must be +1 or -1, got {a}")
    if profile.bounds[0] <= PROFILE_FLOOR:
        raise DomainError(f"profile minimum {profile.bounds[0]:g} <= {PROFILE_FLOOR:g}")
    return SimpleWave(int(a), float(alpha), profile)


def eval_wave(wave: SimpleWave, x: float, t: float) -> SWState:
    """Depth and velocity of ``wave`` at a single point."""
    h, u = wave.state(x, t)
    return SWState(float(h), float(u))


def breaking_time(wave: SimpleWave, n: int = 10_000) -> BreakingReport:
    """First fold time ``1 / max(-c'(y))``.

    ``c'`` is scanned on ``n`` points over the profile's scan domain and the
    best sample is polished with a bounded scalar minimization.
    """
    n = max(int(n), 10_000)
    lo, hi = wave.profile.scan_domain
    y = np.linspace(lo, hi, n)
    slope = wave.speed_slope(y) * np.ones_like(y)
    k = int(np.argmin(slope))
    if not slope[k] < 0:
        return BreakingReport(math.inf, float(y[k]))
    step = (hi - lo) / (n - 1)
    res = optimize.minimize_scalar(
        lambda s: float(wave.speed_slope(np.asarray(s))),
        bounds=(max(lo, y[k] - step), min(hi, y[k] + step)),
        method="bounded",
        options={"xatol": 1e-12},
    )
    best_y, best = (res.x, res.fun) if res.fun < slope[k] else (y[k], slope[k])
    return BreakingReport(float(-1.0 / best), float(best_y))


def sample_field(wave: SimpleWave, x_grid, t_grid) -> SolutionField:
    """Evaluate ``wave`` on every node of the ``x_grid x t_grid`` tensor grid."""
    x_grid = np.asarray(x_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.max() >= wave.breaking.t_break:
        raise MultivaluedError(
            f"t_grid reaches {t_grid.max():g} >= breaking time {wave.breaking.t_break:g}"
        )
    X, T = np.meshgrid(x_grid, t_grid, indexing="ij")
    h, u = wave.state(X, T)
    return SolutionField(x_grid, t_grid, h, u)


def pde_residual(field: SolutionField, points):
    """Shallow-water residuals ``(R_mass, R_momentum)`` at interior points.

    ``R_mass = h_t + u h_x + h u_x`` and ``R_momentum = u_t + u u_x + h_x``,
    with central differences on the field grid.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    h, u, h_x, u_x, h_t, u_t = field.gradients(pts[:, 0], pts[:, 1])
    return h_t + u * h_x + h * u_x, u_t + u * u_x + h_x


def nonclassical_f(wave: SimpleWave):
    """``f(h, u) = 1 / H'(H^{-1}(h))`` on a monotone profile.

    This is the arbitrary function of the restricted nonclassical family that
    reproduces ``wave``; ``u`` is accepted for signature compatibility.
    """
    prof = wave.profile

    def f(h, u=None):
        return 1.0 / prof.dH(prof.inverse(h))

    return f
