"""Quasilinear hyperbolic systems ``U_t + M(U) U_x = 0`` and their eigenstructure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonHyperbolicError

__all__ = [
    "QuasilinearSystem",
    "EigenStructure",
    "HyperbolicityReport",
    "eval_matrix",
    "eigen_structure",
    "check_strict_hyperbolicity",
]

RESIDUAL_RTOL = 1e-10
GAP_RTOL = 1e-10


@dataclass(frozen=True)
class QuasilinearSystem:
    """A 1-D quasilinear system described by its coefficient matrix map.

    Attributes:
        n: Number of components of the state vector.
        matrix: Callable taking a length-``n`` state and returning the ``n x n`` matrix.
        name: Identifier used in reports.
        admissible: Predicate on states; ``True`` inside the domain of validity.
        admissible_desc: Human readable form of ``admissible`` used in error messages.
    """

    n: int
    matrix: Callable[[np.ndarray], np.ndarray]
    name: str
    admissible: Callable[[np.ndarray], bool] = field(default=lambda state: True)
    admissible_desc: str = "any state"

    def __call__(self, state) -> np.ndarray:
        return eval_matrix(self, state)


@dataclass(frozen=True)
class EigenStructure:
    eigenvalues: np.ndarray
    right_eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]
    strictly_hyperbolic: bool

    @property
    def min_gap(self) -> float:
        if len(self.eigenvalues) < 2:
            return float("inf")
        return float(np.min(np.diff(self.eigenvalues)))


@dataclass
class HyperbolicityReport:
    ok: list[bool]
    gaps: list[float]
    errors: dict[int, str]

    @property
    def min_gap(self) -> float:
        finite = [g for g in self.gaps if np.isfinite(g)]
        return min(finite) if finite else float("nan")

    @property
    def all_ok(self) -> bool:
        return all(self.ok)


def _as_state(system: QuasilinearSystem, state) -> np.ndarray:
    vec = np.asarray(tuple(state), dtype=float)
    if vec.shape != (system.n,):
        raise DomainError(
            f"{system.name}: state has {vec.size} components, expected {system.n}"
        )
    return vec


def eval_matrix(system: QuasilinearSystem, state) -> np.ndarray:
    """Return ``M(U)`` for an admissible state.

    Raises:
        DomainError: if the state violates ``system.admissible``.
    """
    vec = _as_state(system, state)
    if not np.all(np.isfinite(vec)) or not system.admissible(vec):
        raise DomainError(
            f"{system.name}: state {vec.tolist()} violates {system.admissible_desc}"
        )
    mat = np.asarray(system.matrix(vec), dtype=float)
    if mat.shape != (system.n, system.n):
        raise ValueError(f"{system.name}: matrix has shape {mat.shape}")
    return mat


def _normalize(vec: np.ndarray) -> np.ndarray:
    vec = vec / np.linalg.norm(vec)
    nonzero = np.flatnonzero(np.abs(vec) > 1e-14)
    if nonzero.size and vec[nonzero[0]] < 0:
        vec = -vec
    return vec


def _eigen_2x2(mat: np.ndarray):
    a, b = mat[0]
    c, d = mat[1]
    mean = 0.5 * (a + d)
    half = 0.5 * (a - d)
    disc = half * half + b * c
    if disc < 0:
        root = np.sqrt(-disc)
        raise NonHyperbolicError(
            f"complex eigenvalues {mean} +- {root}i",
            pair=(complex(mean, -root), complex(mean, root)),
        )
    root = np.sqrt(disc)
    lams = np.array([mean - root, mean + root])
    vecs = np.empty((2, 2))
    for k, lam in enumerate(lams):
        v1 = np.array([b, lam - a])
        v2 = np.array([lam - d, c])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        if np.linalg.norm(v) <= 1e-300:
            # M is a multiple of the identity; any basis works
            v = np.eye(2)[k]
        vecs[:, k] = _normalize(v)
    return lams, vecs


def eigen_structure(matrix) -> EigenStructure:
    """Sorted real eigenvalues and unit right eigenvectors of ``matrix``.

    2x2 matrices use the closed-form quadratic; larger ones go through
    ``numpy.linalg.eig``.

    Raises:
        NonHyperbolicError: if any eigenvalue is complex.
    """
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError("matrix has non-finite entries")
    n = mat.shape[0]
    scale = 1.0 + np.linalg.norm(mat)

    if n == 2:
        lams, vecs = _eigen_2x2(mat)
    else:
        w, v = np.linalg.eig(mat)
        bad = np.abs(w.imag) > 1e-12 * scale
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise NonHyperbolicError(
                f"complex eigenvalue {w[k]}", pair=(complex(w[k]), complex(np.conj(w[k])))
            )
        order = np.argsort(w.real, kind="stable")
        lams = w.real[order]
        vecs = np.column_stack([_normalize(v.real[:, k]) for k in order])

    resid = max(
        np.linalg.norm(mat @ vecs[:, k] - lams[k] * vecs[:, k]) for k in range(n)
    )
    if resid > RESIDUAL_RTOL * scale:
        # defective matrix: eigenvectors are not independent
        return EigenStructure(lams, vecs, False)
    gap_tol = GAP_RTOL * (1.0 + np.max(np.abs(lams)))
    strict = bool(n < 2 or np.all(np.diff(lams) > gap_tol))
    return EigenStructure(lams, vecs, strict)


def check_strict_hyperbolicity(
    system: QuasilinearSystem, samples: Sequence
) -> HyperbolicityReport:
    """Check strict hyperbolicity on every sample.

    Domain and non-hyperbolic errors are recorded per sample instead of raised.
    """
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    ok, gaps, errors = [], [], {}
    for i, state in enumerate(samples):
        try:
            es = eigen_structure(eval_matrix(system, state))
        except (DomainError, NonHyperbolicError) as exc:
            ok.append(False)
            gaps.append(float("nan"))
            errors[i] = str(exc)
            continue
        ok.append(es.strictly_hyperbolic)
        gaps.append(es.min_gap)
    return HyperbolicityReport(ok, gaps, errors)
