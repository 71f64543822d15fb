import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charlab.errors import DomainError, MultivaluedError, OutOfDomainError
from charlab.oracle import fv_solve
from charlab.solutions import (
    breaking_time,
    constant_profile,
    eval_wave,
    make_simple_wave,
    pde_residual,
    profile_from_f,
    sample_field,
    sine_profile,
)

from conftest import TWO_PI, observed_order


class TestProfileFromF:
    def test_unit_integrand(self):
        prof = profile_from_f(lambda y: np.ones_like(y), 0.0, 1.0, (-0.9, 5.0))
        y = np.linspace(-0.9, 5.0, 101)
        np.testing.assert_allclose(prof.H(y), 1 + y, atol=1e-10)
        np.testing.assert_array_equal(prof.dH(y), 1.0)

    def test_constant_two(self):
        prof = profile_from_f(lambda y: np.full_like(y, 2.0), 0.0, 1.0, (-1.0, 1.0))
        y = np.linspace(-1, 1, 51)
        np.testing.assert_allclose(prof.H(y), 1 + y / 2, atol=1e-10)

    def test_inverse_cosine_matches_sine(self):
        prof = profile_from_f(lambda y: 1 / (0.1 * np.cos(y)), 0.0, 1.0, (-1.5, 1.5))
        y = np.linspace(-1.5, 1.5, 301)
        np.testing.assert_allclose(prof.H(y), 1 + 0.1 * np.sin(y), atol=1e-10)

    def test_inverse(self, tanh_profile):
        y = np.linspace(-3, 3, 61)
        np.testing.assert_allclose(tanh_profile.inverse(tanh_profile.H(y)), y, atol=1e-9)

    def test_inverse_rejects_out_of_range(self, tanh_profile):
        with pytest.raises(OutOfDomainError):
            tanh_profile.inverse(np.array([1.5]))

    def test_vanishing_f(self):
        with pytest.raises(DomainError):
            profile_from_f(lambda y: y, 0.5, 1.0, (-1.0, 1.0))

    def test_profile_below_floor(self):
        with pytest.raises(DomainError):
            profile_from_f(lambda y: np.ones_like(y), 0.0, 1.0, (-2.0, 1.0))


class TestMakeSimpleWave:
    @pytest.mark.parametrize("a, u, c", [(1, 2.0, 3.0), (-1, -2.0, -3.0)])
    def test_constant_profile(self, a, u, c):
        wave = make_simple_wave(a, 0.0, constant_profile(1.0))
        s = eval_wave(wave, 0.7, 1.3)
        assert (s.h, s.u) == (1.0, u)
        assert wave.speed(0.0) == c

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            make_simple_wave(0, 0.0, constant_profile(1.0))

    def test_profile_floor(self):
        with pytest.raises(DomainError):
            make_simple_wave(1, 0.0, sine_profile(1.0, 1.0))


class TestEvalWave:
    @pytest.mark.parametrize("a, alpha", [(1, 0.0), (-1, 0.5)])
    def test_initial_time_is_profile(self, a, alpha):
        prof = sine_profile(1.0, 0.1)
        wave = make_simple_wave(a, alpha, prof)
        for x in np.linspace(0, TWO_PI, 13):
            s = eval_wave(wave, x, 0.0)
            assert s.h == pytest.approx(float(prof.H(x)), abs=1e-14)
            assert s.u == pytest.approx(2 * a * math.sqrt(prof.H(x)) + alpha, abs=1e-14)

    def test_implicit_residual(self, sine_wave):
        s = eval_wave(sine_wave, 0.0, 0.5)
        c = 3 * math.sqrt(s.h)
        assert abs(s.h - float(sine_wave.profile.H(0.0 - c * 0.5))) <= 1e-12

    def test_against_finite_volume(self, sine_wave):
        prof = sine_wave.profile
        fv = fv_solve(
            (prof.H, lambda x: 2 * np.sqrt(prof.H(x))), (-8.0, 8.0), 0.5, 3201, 0.5, nt_out=2
        )
        h_fv, u_fv = fv.interpolate(np.array([0.0]), np.array([0.5]))
        s = eval_wave(sine_wave, 0.0, 0.5)
        assert abs(h_fv[0] - s.h) <= 2e-3
        assert abs(u_fv[0] - s.u) <= 4e-3

    def test_outside_finite_domain(self, tanh_wave):
        with pytest.raises(OutOfDomainError):
            eval_wave(tanh_wave, -5.9, 1.0)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(-10, 10), st.floats(0, 6.5))
    def test_root_solves_implicit_relation(self, x, t):
        wave = make_simple_wave(1, 0.0, sine_profile(1.0, 0.1))
        s = eval_wave(wave, x, t)
        assert abs(s.h - float(wave.profile.H(x - 3 * math.sqrt(s.h) * t))) <= 1e-12


class TestBreaking:
    def test_constant_profile_never_breaks(self):
        assert breaking_time(make_simple_wave(1, 0.0, constant_profile(2.0))).t_break == math.inf

    def test_against_brute_force(self, sine_wave):
        y = np.linspace(0, TWO_PI, 100_000)
        slope = 1.5 * 0.1 * np.cos(y) / np.sqrt(1 + 0.1 * np.sin(y))
        brute = 1 / np.max(-slope)
        rep = breaking_time(sine_wave)
        assert rep.t_break == pytest.approx(brute, rel=1e-8)
        assert rep.t_break == pytest.approx(6.6583071540688845, rel=1e-12)

    def test_mirror(self):
        plus = make_simple_wave(1, 0.0, sine_profile(1.0, 0.1))
        minus = make_simple_wave(-1, 0.0, sine_profile(1.0, -0.1))
        assert breaking_time(minus).t_break == pytest.approx(breaking_time(plus).t_break, rel=1e-10)

    def test_fold_detected(self, sine_wave):
        rep = sine_wave.breaking
        t = 1.01 * rep.t_break
        x = rep.argmin_y + float(sine_wave.speed(rep.argmin_y)) * t
        with pytest.raises(MultivaluedError):
            eval_wave(sine_wave, x, t)

    def test_before_breaking_is_single_valued(self, sine_wave):
        t = 0.99 * sine_wave.breaking.t_break
        h, _ = sine_wave.state(np.linspace(0, TWO_PI, 2001), np.full(2001, t))
        assert np.all(np.isfinite(h))


class TestSampleField:
    def test_constant_profile(self):
        wave = make_simple_wave(-1, 1.0, constant_profile(2.0))
        F = sample_field(wave, np.linspace(0, 1, 11), np.linspace(0, 1, 5))
        assert np.all(F.h_values == 2.0)
        assert np.all(F.u_values == 1.0 - 2 * math.sqrt(2.0))

    @pytest.mark.parametrize("a, alpha", [(1, 0.0), (-1, 0.3)])
    def test_matching_invariant_is_alpha(self, a, alpha):
        wave = make_simple_wave(a, alpha, sine_profile(1.0, 0.1))
        F = sample_field(wave, np.linspace(0, TWO_PI, 201), np.linspace(0, 2, 41))
        J = F.u_values - 2 * a * np.sqrt(F.h_values)
        assert np.max(np.abs(J - alpha)) <= 1e-10

    def test_past_breaking_rejected(self, sine_wave):
        with pytest.raises(MultivaluedError):
            sample_field(sine_wave, np.linspace(0, 1, 5), np.linspace(0, 7, 5))

    def test_pde_residual_order(self, sine_wave):
        xc = np.linspace(0, TWO_PI, 51)
        tc = np.linspace(0, 1, 11)
        pts = np.array([(x, t) for x in xc[5:46:5] for t in tc[2:9:3]])
        errs, sizes = [], []
        for nx in (51, 101, 201, 401):
            F = sample_field(sine_wave, np.linspace(0, TWO_PI, nx), np.linspace(0, 1, (nx - 1) // 5 + 1))
            errs.append(max(np.max(np.abs(r)) for r in pde_residual(F, pts)))
            sizes.append(1 / (nx - 1))
        assert np.all(np.diff(errs) < 0)
        assert observed_order(sizes, errs) == pytest.approx(2.0, abs=0.3)
