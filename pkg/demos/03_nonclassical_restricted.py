"""The restricted non-characteristic generator xi = u, phi = a sqrt(h) psi.

With xi = u the determining equation reduces to psi_t = 3a psi^2 / (2 sqrt(h)),
solved by psi = -1 / (3at / (2 sqrt(h)) + f(h, u)). Choosing f = 1/H'(H^-1(h))
makes the simple wave with profile H an invariant solution, so its gradients
obey u_x = -phi/h and h_x = -psi.
"""

import numpy as np

from charlab.solutions import make_simple_wave, nonclassical_f, profile_from_f, sample_field
from charlab.symmetry import (
    PsiFamily,
    gradient_relations_residual,
    invariant_surface_residual,
    reduced_determining_residual,
    restricted_generator,
)

rng = np.random.default_rng(1)
fam = PsiFamily(-1, lambda h, u: h + u, lambda h, u: 1.0 + 0 * h, lambda h, u: 1.0 + 0 * u)
pts = np.column_stack([rng.uniform(0, 1, 2000), rng.uniform(0.5, 2, 2000), rng.uniform(-0.4, 0.4, 2000)])
t, h, u = pts.T
# stay away from the pole of psi, where rounding is amplified
pts = pts[np.abs(-1.5 * t / np.sqrt(h) + h + u) >= 0.5]
print(f"reduced determining residual, f = h + u: {np.max(np.abs(reduced_determining_residual(fam, pts))):.2e}")

# H = 1 + 0.1 tanh(y) comes from f(y) = 10 cosh(y)^2
profile = profile_from_f(lambda y: 10 * np.cosh(y) ** 2, 0.0, 1.0, (-6.0, 6.0))
wave = make_simple_wave(1, 0.0, profile)
gen = restricted_generator(PsiFamily(1, nonclassical_f(wave)))

xc = np.linspace(-2, 2, 101)
probe = np.array([(x, t) for x in xc[25:76:5] for t in (0.2, 0.4, 0.6, 0.8)])
print("\n  nx   invariant surface   gradient relations")
for nx in (101, 201, 401):
    F = sample_field(wave, np.linspace(-2, 2, nx), np.linspace(0, 1, (nx - 1) // 4 + 1))
    surf = max(np.max(np.abs(r)) for r in invariant_surface_residual(gen, F, probe))
    grad = max(np.max(np.abs(r)) for r in gradient_relations_residual(gen, F, probe))
    print(f"{nx:5d}   {surf:17.3e}   {grad:18.3e}")
