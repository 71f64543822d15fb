"""When does a smooth simple wave break?

Characteristics of a simple wave are straight lines x = y + c(y) t. They first
cross at t = 1 / max(-c'(y)); beyond that the implicit solution has three roots
in a fold and evaluation refuses to pick one.
"""

import numpy as np

from charlab.errors import MultivaluedError
from charlab.solutions import breaking_time, eval_wave, make_simple_wave, sine_profile

for a, amp in ((1, 0.1), (-1, -0.1), (1, 0.3)):
    wave = make_simple_wave(a, 0.0, sine_profile(1.0, amp))
    rep = breaking_time(wave)
    print(f"a={a:+d}, H = 1 + {amp:+.1f} sin y: t_break = {rep.t_break:.6f} (steepest at y = {rep.argmin_y:.4f})")

wave = make_simple_wave(1, 0.0, sine_profile(1.0, 0.1))
rep = wave.breaking
for factor in (0.9, 0.99, 1.01, 1.1):
    t = factor * rep.t_break
    x = rep.argmin_y + float(wave.speed(rep.argmin_y)) * t
    try:
        s = eval_wave(wave, x, t)
        print(f"t = {factor:.2f} t_break: h = {s.h:.6f}")
    except MultivaluedError:
        print(f"t = {factor:.2f} t_break: multivalued (inside the fold)")
