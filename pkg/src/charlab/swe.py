"""Shallow-water equations on a flat bottom, nondimensional form.

    h_t + u h_x + h u_x = 0
    u_t + u u_x + h_x   = 0

Gravity is absorbed into the scaling, so the characteristic speeds are
``u -+ sqrt(h)`` and the Riemann invariants are ``u -+ 2 sqrt(h)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import QuasilinearSystem
from .errors import DomainError, DryStateError

__all__ = [
    "DEPTH_FLOOR",
    "SQRT_DEPTH_FLOOR",
    "SWState",
    "InvariantPair",
    "sw_matrix",
    "sw_eigenvalues",
    "riemann_invariants",
    "state_from_invariants",
    "invariants_from_arrays",
    "states_from_invariant_arrays",
]

DEPTH_FLOOR = 1e-12
SQRT_DEPTH_FLOOR = 1e-6


@dataclass(frozen=True)
class SWState:
    h: float
    u: float

    def __post_init__(self):
        if not (np.isfinite(self.h) and np.isfinite(self.u)):
            raise DomainError(f"non-finite state (h={self.h}, u={self.u})")
        if self.h <= DEPTH_FLOOR:
            raise DomainError(f"depth h={self.h} violates h > {DEPTH_FLOOR:g}")

    def __iter__(self):
        return iter((self.h, self.u))


@dataclass(frozen=True)
class InvariantPair:
    """``j_minus = u - 2 sqrt(h)`` and ``j_plus = u + 2 sqrt(h)``."""

    j_minus: float
    j_plus: float

    def __iter__(self):
        return iter((self.j_minus, self.j_plus))


def _admissible(state: np.ndarray) -> bool:
    return bool(state[0] > DEPTH_FLOOR)


def _matrix(state: np.ndarray) -> np.ndarray:
    h, u = state
    return np.array([[u, h], [1.0, u]])


_SYSTEM = QuasilinearSystem(
    n=2,
    matrix=_matrix,
    name="shallow-water",
    admissible=_admissible,
    admissible_desc=f"h > {DEPTH_FLOOR:g}",
)


def sw_matrix() -> QuasilinearSystem:
    """The shallow-water system with state ordering ``(h, u)``."""
    return _SYSTEM


def sw_eigenvalues(state: SWState) -> tuple[float, float]:
    root = np.sqrt(state.h)
    return state.u - root, state.u + root


def riemann_invariants(state: SWState) -> InvariantPair:
    root = 2.0 * np.sqrt(state.h)
    return InvariantPair(state.u - root, state.u + root)


def state_from_invariants(pair: InvariantPair) -> SWState:
    """Invert :func:`riemann_invariants`.

    Raises:
        DryStateError: if ``sqrt(h) = (j_plus - j_minus) / 4`` is below 1e-6.
    """
    root = 0.25 * (pair.j_plus - pair.j_minus)
    if not root > SQRT_DEPTH_FLOOR:
        raise DryStateError(
            f"invariants ({pair.j_minus}, {pair.j_plus}) give sqrt(h)={root} "
            f"<= {SQRT_DEPTH_FLOOR:g}"
        )
    return SWState(root * root, 0.5 * (pair.j_minus + pair.j_plus))


def invariants_from_arrays(h, u):
    """Vectorized ``(j_minus, j_plus)`` for arrays of depth and velocity."""
    root = 2.0 * np.sqrt(np.asarray(h, dtype=float))
    u = np.asarray(u, dtype=float)
    return u - root, u + root


def states_from_invariant_arrays(j_minus, j_plus):
    """Vectorized inverse of :func:`invariants_from_arrays`; returns ``(h, u)``."""
    j_minus = np.asarray(j_minus, dtype=float)
    j_plus = np.asarray(j_plus, dtype=float)
    root = 0.25 * (j_plus - j_minus)
    if not np.all(root > SQRT_DEPTH_FLOOR):
        k = int(np.argmin(root))
        raise DryStateError(
            f"dry state at index {k}: sqrt(h)={root.flat[k]} <= {SQRT_DEPTH_FLOOR:g}"
        )
    return root * root, 0.5 * (j_minus + j_plus)
