"""Characteristic speeds of shallow water and which generator speeds are admissible.

The system matrix M(h, u) = [[u, h], [1, u]] has eigenvalues u -/+ sqrt(h).
A nonclassical generator whose x-coefficient equals one of them lands on the
degenerate (det = 0) branch of the determining equations; every other
candidate gives a nonzero determinant.
"""

import numpy as np

from charlab.cli import XI_CANDIDATES
from charlab.core import check_strict_hyperbolicity, eigen_structure
from charlab.swe import SWState, riemann_invariants, sw_matrix
from charlab.symmetry import eigenvalue_coefficient_check

M = sw_matrix()
state = SWState(h=4.0, u=1.0)
es = eigen_structure(M(state))
print(f"state {state}: eigenvalues {es.eigenvalues}, expected {[1 - 2, 1 + 2]}")
print("right eigenvectors (columns):")
print(es.right_eigenvectors)
jm, jp = riemann_invariants(state)
print(f"Riemann invariants: J- = {jm:g}, J+ = {jp:g}")

rng = np.random.default_rng(0)
samples = list(zip(rng.uniform(0.1, 10, 200), rng.uniform(-5, 5, 200)))
report = check_strict_hyperbolicity(M, samples)
print(f"\nstrictly hyperbolic on {len(samples)} random states: {report.all_ok}, min gap {report.min_gap:.3f}")

print("\nwhich speeds make det(M - xi E) vanish?")
for name, xi in XI_CANDIDATES.items():
    rep = eigenvalue_coefficient_check(M, xi, samples)
    print(f"  xi = {name:<11} max|det| = {rep.max_abs_det:9.3e}  ->  {'eigenvalue' if rep.verdict else 'no'}")
