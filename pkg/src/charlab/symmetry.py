"""Nonclassical generators ``d/dt + xi d/dx + phi d/dh + psi d/du`` of the
shallow-water system and pointwise residuals of their defining relations.

All residuals are evaluated numerically: analytic partials are used where a
closed form is available, central differences otherwise.

Sign convention for the characteristic (``det(M - xi E) = 0``) branch:
``xi = u - k``, ``phi = k psi`` with ``k = k_sign * sqrt(h)``, so
``k_sign = -1`` is the ``u + sqrt(h)`` generator (V1) and ``k_sign = +1`` is
``u - sqrt(h)`` (V2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import QuasilinearSystem, eval_matrix
from .errors import SingularityError
from .field import SolutionField

__all__ = [
    "SINGULAR_MARGIN",
    "Generator",
    "ABPair",
    "PsiFamily",
    "CoefficientReport",
    "v1",
    "v2",
    "det0_generator",
    "restricted_generator",
    "invariant_surface_residual",
    "eigenvalue_coefficient_check",
    "det0_determining_residual",
    "ab_coefficients",
    "psi_eval",
    "psi_partials",
    "restricted_ansatz_residual",
    "reduced_determining_residual",
    "gradient_relations_residual",
]

SINGULAR_MARGIN = 1e-10

ScalarFn = Callable[..., np.ndarray]


def _zero(x, t, h, u):
    return np.zeros(np.broadcast(x, t, h, u).shape)


@dataclass(frozen=True, eq=False)
class Generator:
    """Coefficients ``(xi, phi, psi)``, each a function of ``(x, t, h, u)``.

    The ``d/dt`` coefficient is normalized to one.
    """

    xi: ScalarFn
    phi: ScalarFn = _zero
    psi: ScalarFn = _zero
    name: str = "generator"


@dataclass(frozen=True)
class ABPair:
    A: float
    B: float


@dataclass(frozen=True, eq=False)
class PsiFamily:
    """``psi = -1 / (3 a t / (2 sqrt(h)) + f(h, u))``.

    ``f_h`` and ``f_u`` are the analytic partials of ``f``; when omitted they
    are replaced by central differences.
    """

    a: int
    f: Callable[[np.ndarray, np.ndarray], np.ndarray]
    f_h: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    f_u: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.a not in (-1, 1):
            raise ValueError(f"a must be +1 or -1, got {self.a}")


@dataclass(frozen=True)
class CoefficientReport:
    max_abs_det: float
    threshold: float
    dets: np.ndarray

    @property
    def verdict(self) -> bool:
        return bool(self.max_abs_det <= self.threshold)


def v1() -> Generator:
    return Generator(xi=lambda x, t, h, u: u + np.sqrt(h), name="V1")


def v2() -> Generator:
    return Generator(xi=lambda x, t, h, u: u - np.sqrt(h), name="V2")


def det0_generator(k_sign: int, psi: ScalarFn) -> Generator:
    """``(xi, phi) = (u - k, k psi)`` with ``k = k_sign sqrt(h)``."""
    if k_sign not in (-1, 1):
        raise ValueError("k_sign must be +1 or -1")
    return Generator(
        xi=lambda x, t, h, u: u - k_sign * np.sqrt(h),
        phi=lambda x, t, h, u: k_sign * np.sqrt(h) * psi(x, t, h, u),
        psi=psi,
        name=f"det0(k_sign={k_sign})",
    )


def restricted_generator(fam: PsiFamily) -> Generator:
    """``xi = u``, ``phi = a sqrt(h) psi`` with ``psi`` from the family."""
    return Generator(
        xi=lambda x, t, h, u: np.asarray(u, dtype=float) * np.ones(np.broadcast(x, t, h, u).shape),
        phi=lambda x, t, h, u: fam.a * np.sqrt(h) * psi_eval(fam, t, h, u),
        psi=lambda x, t, h, u: psi_eval(fam, t, h, u) * np.ones(np.broadcast(x, t, h, u).shape),
        name=f"restricted(a={fam.a})",
    )


def _points_xt(points):
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return pts[:, 0], pts[:, 1]


def invariant_surface_residual(gen: Generator, field: SolutionField, points):
    """``(R_h, R_u) = (h_t + xi h_x - phi, u_t + xi u_x - psi)`` at interior points.

    Raises:
        DomainError: for points within one cell of the field boundary.
    """
    x, t = _points_xt(points)
    h, u, h_x, u_x, h_t, u_t = field.gradients(x, t)
    xi = gen.xi(x, t, h, u)
    return h_t + xi * h_x - gen.phi(x, t, h, u), u_t + xi * u_x - gen.psi(x, t, h, u)


def eigenvalue_coefficient_check(
    system: QuasilinearSystem, xi: Callable, samples: Sequence
) -> CoefficientReport:
    """Is ``xi(U)`` an eigenvalue of ``M(U)`` on every sample?

    The verdict holds when ``max |det(M - xi E)| <= 1e-10 (1 + max ||M||^2)``.
    """
    dets, norm2 = [], 0.0
    for state in samples:
        mat = eval_matrix(system, state)
        lam = float(xi(np.asarray(tuple(state), dtype=float)))
        dets.append(np.linalg.det(mat - lam * np.eye(system.n)))
        norm2 = max(norm2, np.linalg.norm(mat) ** 2)
    dets = np.asarray(dets)
    return CoefficientReport(float(np.max(np.abs(dets))), 1e-10 * (1 + norm2), dets)


def _central(fn, args, k, scale=1e-6):
    """Central difference of ``fn`` in argument ``k``."""
    args = [np.asarray(a, dtype=float) for a in args]
    step = scale * (1 + np.abs(args[k]))
    up = list(args)
    dn = list(args)
    up[k] = args[k] + step
    dn[k] = args[k] - step
    return (fn(*up) - fn(*dn)) / (2 * step)


def det0_determining_residual(psi: ScalarFn, k_sign: int, points, partials=None):
    """Determining-equation residuals ``(R1, R2)`` of the characteristic branch.

    ``R1 = -h psi_h + k psi_u + 3/4 psi`` and
    ``R2 = psi_t + u psi_x + psi psi_u + k psi_x - k psi psi_h`` with
    ``k = k_sign sqrt(h)``.

    Args:
        psi: ``psi(x, t, h, u)``.
        k_sign: ``-1`` for V1, ``+1`` for V2.
        points: rows ``(x, t, h, u)``.
        partials: optional mapping with callables ``"x"``, ``"t"``, ``"h"``,
            ``"u"``; missing ones use central differences with step
            ``1e-6 (1 + |value|)``.
    """
    if k_sign not in (-1, 1):
        raise ValueError("k_sign must be +1 or -1")
    pts = np.asarray(points, dtype=float).reshape(-1, 4)
    x, t, h, u = pts.T
    args = (x, t, h, u)
    partials = partials or {}
    d = {}
    for k, name in enumerate("xthu"):
        fn = partials.get(name)
        d[name] = fn(*args) if fn is not None else _central(psi, args, k)
    p = psi(*args)
    k = k_sign * np.sqrt(h)
    r1 = -h * d["h"] + k * d["u"] + 0.75 * p
    r2 = d["t"] + u * d["x"] + p * d["u"] + k * d["x"] - k * p * d["h"]
    return r1, r2


def ab_coefficients(gen: Generator, point) -> ABPair:
    """``A`` and ``B`` of the non-characteristic branch at ``(x, t, h, u)``.

    Raises:
        SingularityError: if ``|(xi - u)^2 - h| <= 1e-10`` (characteristic xi).
    """
    x, t, h, u = map(float, point)
    xi = float(gen.xi(x, t, h, u))
    phi = float(gen.phi(x, t, h, u))
    psi = float(gen.psi(x, t, h, u))
    s = xi - u
    den = s * s - h
    if abs(den) <= SINGULAR_MARGIN:
        raise SingularityError(
            f"(xi - u)^2 - h = {den:.3g}: xi is a characteristic speed", denominator=den
        )
    return ABPair((s * phi + h * psi) / den, (phi + s * psi) / den)


def _psi_denominator(fam: PsiFamily, t, h, u):
    return 1.5 * fam.a * np.asarray(t, dtype=float) / np.sqrt(h) + fam.f(h, u)


def psi_eval(fam: PsiFamily, t, h, u):
    """``psi = -1 / (3 a t / (2 sqrt(h)) + f(h, u))``.

    Raises:
        SingularityError: if the denominator is within 1e-10 of zero.
    """
    den = _psi_denominator(fam, t, h, u)
    if np.any(np.abs(den) <= SINGULAR_MARGIN):
        bad = np.asarray(den).flat[int(np.argmin(np.abs(den)))]
        raise SingularityError(f"psi denominator {bad:.3g} is singular", denominator=float(bad))
    out = -1.0 / den
    return float(out) if np.ndim(out) == 0 else out


def psi_partials(fam: PsiFamily, t, h, u):
    """Analytic ``(psi, psi_t, psi_h, psi_u)``."""
    t = np.asarray(t, dtype=float)
    h = np.asarray(h, dtype=float)
    u = np.asarray(u, dtype=float)
    den = _psi_denominator(fam, t, h, u)
    if np.any(np.abs(den) <= SINGULAR_MARGIN):
        raise SingularityError("psi denominator is singular")
    f_h = fam.f_h(h, u) if fam.f_h is not None else _central(fam.f, (h, u), 0)
    f_u = fam.f_u(h, u) if fam.f_u is not None else _central(fam.f, (h, u), 1)
    den2 = den * den
    psi = -1.0 / den
    psi_t = 1.5 * fam.a / np.sqrt(h) / den2
    psi_h = (-0.75 * fam.a * t * h**-1.5 + f_h) / den2
    psi_u = f_u / den2
    return psi, psi_t, psi_h, psi_u


def restricted_ansatz_residual(a, t, h, u, psi, psi_t, psi_h, psi_u):
    """Left side of the reduced determining equation for ``xi = u``, ``phi = a sqrt(h) psi``.

    ``D psi + a sqrt(h) (A psi_h + B psi_u) + 3/2 B psi`` with
    ``D = d/dt - h B d/dh - A d/du`` and ``A``, ``B`` taken from the general
    formulas, not from their simplified form.
    """
    h = np.asarray(h, dtype=float)
    root = np.sqrt(h)
    s = 0.0  # xi - u
    phi = a * root * psi
    den = s * s - h
    A = (s * phi + h * psi) / den
    B = (phi + s * psi) / den
    D_psi = psi_t - h * B * psi_h - A * psi_u
    return D_psi + a * root * (A * psi_h + B * psi_u) + 1.5 * B * psi


def reduced_determining_residual(fam: PsiFamily, points):
    """Reduced determining-equation residual of the family at rows ``(t, h, u)``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    t, h, u = pts.T
    psi, psi_t, psi_h, psi_u = psi_partials(fam, t, h, u)
    return restricted_ansatz_residual(fam.a, t, h, u, psi, psi_t, psi_h, psi_u)


def gradient_relations_residual(gen: Generator, field: SolutionField, points):
    """``(u_x + phi/h, h_x + psi)`` with central-difference gradients of ``field``."""
    x, t = _points_xt(points)
    h, u, h_x, u_x, _, _ = field.gradients(x, t)
    return u_x + gen.phi(x, t, h, u) / h, h_x + gen.psi(x, t, h, u)
