"""A right-moving simple wave keeps J- = u - 2 sqrt(h) fixed and carries J+ along its characteristics.

We sample the exact solution on successively finer grids, trace + characteristics
through the sampled field with RK4, and watch the drift of J+ fall at second order.
"""

import math

import numpy as np

from charlab.characteristics import trace_many
from charlab.solutions import make_simple_wave, sample_field, sine_profile

wave = make_simple_wave(a=1, alpha=0.0, profile=sine_profile(1.0, 0.1))
print(f"wave speed range: {wave.speed(np.array([-math.pi / 2, math.pi / 2]))}")

seeds = np.linspace(0, 2 * math.pi, 251)[20:100:10]
prev = None
for nx in (251, 501, 1001):
    F = sample_field(wave, np.linspace(0, 2 * math.pi, nx), np.linspace(0, 1, 2 * nx - 1))
    J_minus = F.u_values - 2 * np.sqrt(F.h_values)
    curves = trace_many(F, +1, seeds, 0.0, 1.0, F.dt / 4)
    drift = max(c.drift for c in curves)
    rate = "" if prev is None else f"  (ratio {prev / drift:.2f})"
    print(f"nx={nx:5d}: max|J- - alpha| = {np.max(np.abs(J_minus)):.1e}, J+ drift = {drift:.3e}{rate}")
    prev = drift

c = curves[3]
print(f"\none characteristic: x goes {c.x[0]:.4f} -> {c.x[-1]:.4f}, J+ stays {c.J[0]:.10f} -> {c.J[-1]:.10f}")
