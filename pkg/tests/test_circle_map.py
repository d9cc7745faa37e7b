import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwlmap.circle_map import (RotationEstimate, circle_apply, circle_derivative,
                               detect_rational, fractions_in, lift, lift_displacement,
                               lift_displacements, lift_increment, rotation_number)
from pwlmap.plane_map import MapParams, apply

TWO_PI = 2 * math.pi
slopes = st.floats(-5, 5, allow_nan=False)
angles = st.floats(0, TWO_PI, allow_nan=False)


class TestCircleApply:
    @given(slopes, slopes)
    def test_axis_images(self, a, b):
        p = MapParams(a, b)
        assert circle_apply(p, math.pi / 2) == pytest.approx(math.pi)
        assert circle_apply(p, 1.5 * math.pi) == pytest.approx(0.0, abs=1e-15)

    def test_rotation(self):
        assert circle_apply(MapParams(0, 0), 0.0) == pytest.approx(math.pi / 2)

    @given(slopes, slopes, angles)
    def test_matches_plane_map(self, a, b, t):
        p = MapParams(a, b)
        w = apply(p, (math.cos(t), math.sin(t)))
        s = circle_apply(p, t)
        assert 0.0 <= s < TWO_PI
        d = (s - math.atan2(w.y, w.x) + math.pi) % TWO_PI - math.pi
        assert abs(d) <= 1e-12


class TestLift:
    @given(slopes, slopes)
    def test_normalisation(self, a, b):
        p = MapParams(a, b)
        assert lift_increment(p, 1.5 * math.pi) == pytest.approx(math.pi / 2)
        assert lift_increment(p, math.pi / 2) == pytest.approx(math.pi / 2)

    def test_increment_beyond_pi(self):
        p = MapParams(-10.0, 0.5)
        expected = math.atan2(1, -9) + math.pi / 4  # image of (1, -1) is (-9, 1)
        assert lift_increment(p, -math.pi / 4) == pytest.approx(expected, abs=1e-12)
        assert expected > math.pi

    @given(slopes, slopes, angles)
    def test_increment_reduces_to_circle_map(self, a, b, t):
        p = MapParams(a, b)
        d = lift_increment(p, t)
        r = (t + d - circle_apply(p, t) + math.pi) % TWO_PI - math.pi
        assert abs(r) <= 1e-9

    @settings(max_examples=20, deadline=None)
    @given(slopes, slopes)
    def test_increment_continuous(self, a, b):
        p = MapParams(a, b)
        grid = np.arange(0.0, TWO_PI, 1e-4)
        d = np.array([lift_increment(p, t) for t in grid])
        jumps = np.abs(np.diff(np.append(d, d[0])))
        assert jumps.max() < 0.1

    def test_linear_average(self):
        c = 2 * math.cos(1.0)
        p = MapParams(c, c)
        N = 10**6
        assert lift_displacement(p, 0.3, N) / N == pytest.approx(1.0, abs=TWO_PI * 1e-6)

    def test_lift_composes(self):
        p = MapParams(0.8, -1.7)
        t1 = lift(p, 0.4, 7)
        t2 = lift(p, lift(p, 0.4, 3), 4)
        assert t1 == pytest.approx(t2, abs=1e-12)
        assert lift(p, 0.4, 0) == 0.4

    def test_grid_matches_scalar(self):
        p = MapParams(1.2, -0.3)
        th = np.linspace(0, TWO_PI, 17)
        got = lift_displacements(p, th, 11)
        assert np.allclose(got, [lift_displacement(p, t, 11) for t in th], rtol=0, atol=0)


class TestDerivative:
    def test_rotation(self):
        for t in np.linspace(0, TWO_PI, 9):
            assert circle_derivative(MapParams(0, 0), t) == pytest.approx(1.0)

    def test_brown_at_zero(self):
        assert circle_derivative(MapParams.from_mu_nu(1, 0), 0.0) == pytest.approx(0.5)

    @settings(max_examples=300)
    @given(slopes, slopes, angles)
    def test_central_difference(self, a, b, t):
        h = 1e-6
        if abs(math.cos(t)) < 1e-3:
            return
        p = MapParams(a, b)
        fd = (lift(p, t + h) - lift(p, t - h)) / (2 * h)
        got = circle_derivative(p, t)
        assert got > 0
        assert abs(got - fd) <= 1e-5 * got


class TestRotationNumber:
    def test_quarter(self):
        for t0 in (0.0, 1.3, 4.0):
            est = rotation_number(MapParams(0, 0), t0, 100)
            assert est.value_turns == pytest.approx(0.25, abs=1e-15)
            assert est.error_bound_turns == 1 / 100

    def test_brown(self):
        est = rotation_number(MapParams(1, -1), 0.0, 9 * 10**5)
        assert abs(est.value_turns - 2 / 9) <= 2e-6

    @pytest.mark.parametrize("a,b", [(2, -5), (2.5, 2.5), (3, -1), (7, 0.3)])
    def test_zero_for_large_a(self, a, b):
        assert rotation_number(MapParams(a, b), 0.2, 10**4).value_turns <= 1e-4

    @settings(max_examples=40, deadline=None)
    @given(slopes, slopes, angles)
    def test_swap_symmetry(self, a, b, t):
        N = 2000
        r1 = rotation_number(MapParams(a, b), t, N).value_turns
        r2 = rotation_number(MapParams(b, a), t, N).value_turns
        assert abs(r1 - r2) <= 2 / N
        assert -1 / N <= r1 <= 0.5 + 1 / N

    @settings(max_examples=30, deadline=None)
    @given(slopes, slopes, angles)
    def test_deviation_bound(self, a, b, t):
        p = MapParams(a, b)
        est = rotation_number(p, 0.0, 5000)
        disp = np.cumsum([lift_increment(p, s) for s in _orbit_angles(p, t, 5000)])
        n = np.arange(1, 5001)
        dev = np.abs(disp / (TWO_PI * n) - est.value_turns)
        assert np.all(dev <= 2 / n)

    def test_monotone_in_b(self):
        N = 5000
        bs = np.linspace(-4, 3, 60)
        r = [rotation_number(MapParams(0.4, b), 0.0, N).value_turns for b in bs]
        assert np.all(np.diff(r) <= 2 / N)


def _orbit_angles(p, t, n):
    out = [t]
    for _ in range(n - 1):
        out.append(circle_apply(p, out[-1]))
    return out


def _est(v, bound):
    return RotationEstimate(v, int(round(1 / bound)), bound)


class TestDetectRational:
    def test_quarter(self):
        assert detect_rational(_est(0.2500003, 1e-6), 64) == (1, 4)

    def test_two_ninths(self):
        assert detect_rational(_est(0.2222219, 1e-6), 64) == (2, 9)

    def test_too_wide(self):
        assert detect_rational(_est(0.25, 0.1), 64) is None

    def test_irrational_value(self):
        assert detect_rational(_est(1 / (2 * math.pi), 1e-6), 64) is None

    def test_fractions_in_brute_force(self):
        lo, hi, qmax = 0.2, 0.34, 12
        brute = {Fraction(p, q) for q in range(1, qmax + 1) for p in range(q + 1)
                 if lo <= p / q <= hi}
        got = fractions_in(lo, hi, qmax)
        assert all(math.gcd(p, q) == 1 for p, q in got)
        assert {Fraction(p, q) for p, q in got} == brute and len(got) == len(brute)

    def test_candidate_attached(self):
        est = rotation_number(MapParams(1, -1), 0.0, 9 * 10**5, q_max=64)
        assert est.rational_candidate == (2, 9)
