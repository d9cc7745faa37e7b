import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwlmap.errors import DivergedError, DomainError
from pwlmap.plane_map import (SOFT_LIMIT, MapParams, PlaneVec, Sign, apply, apply_inverse,
                              cocycle_product, companion, convert_parameters,
                              first_coordinates, iterate, iterate_extended, negate, power,
                              reflect_diagonal)

BROWN = MapParams.from_mu_nu(1.0, 0.0)
slopes = st.floats(-5, 5, allow_nan=False)
coords = st.floats(-10, 10, allow_nan=False)


def recurrence(mu, nu, x0, x1, n):
    """Scalar form x_{k+2} = mu|x_{k+1}| + nu x_{k+1} - x_k, in exact arithmetic."""
    xs = [Fraction(x0), Fraction(x1)]
    for _ in range(n):
        xs.append(mu * abs(xs[-1]) + nu * xs[-1] - xs[-2])
    return xs


class TestParams:
    def test_conversion_brown(self):
        p = convert_parameters(1.0, 0.0)
        assert (p.a, p.b) == (1.0, -1.0)

    def test_mu_zero_is_linear(self):
        nu = 2 * math.cos(0.7)
        p = convert_parameters(0.0, nu)
        assert p.a == p.b == nu and p.is_linear

    def test_accessors(self):
        p = MapParams(2.0, -2.0)
        assert (p.mu, p.nu) == (2.0, 0.0)
        assert p.energy == 2.0 - p.nu

    @given(slopes, slopes)
    def test_round_trip(self, a, b):
        p = MapParams(a, b)
        q = MapParams.from_mu_nu(p.mu, p.nu)
        assert q.a == pytest.approx(a, abs=1e-15) and q.b == pytest.approx(b, abs=1e-15)

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            MapParams(float("nan"), 1.0)
        with pytest.raises(DomainError):
            convert_parameters(float("inf"), 0.0)


class TestApply:
    def test_zero_branch(self):
        assert apply(MapParams(1, -1), (0, 1)) == (-1, 0)

    def test_negative_branch(self):
        assert apply(MapParams(3, -2), (-1, 2)) == (0, -1)

    def test_inverse_examples(self):
        assert apply_inverse(MapParams(1, -1), (-1, 0)) == (0, 1)
        assert apply_inverse(MapParams(3, -2), (0, -1)) == (-1, 2)

    def test_brown_nine_steps(self):
        v = PlaneVec(1.0, 0.0)
        for _ in range(9):
            v = apply(BROWN, v)
        assert v == (1.0, 0.0)

    def test_non_finite_point(self):
        with pytest.raises(DomainError):
            apply(BROWN, (float("nan"), 0.0))
        with pytest.raises(DomainError):
            apply_inverse(BROWN, (0.0, float("inf")))

    @settings(max_examples=300)
    @given(slopes, slopes, coords, coords)
    def test_inverse_round_trip(self, a, b, x, y):
        p = MapParams(a, b)
        for f, g in ((apply, apply_inverse), (apply_inverse, apply)):
            w = f(p, g(p, (x, y)))
            scale = max(1.0, math.hypot(x, y), abs(a * x), abs(b * x), abs(a * y), abs(b * y))
            assert math.hypot(w.x - x, w.y - y) <= 1e-12 * scale

    @given(slopes, slopes, coords, coords, st.floats(0, 100))
    def test_homogeneity(self, a, b, x, y, lam):
        p = MapParams(a, b)
        u = apply(p, (lam * x, lam * y))
        w = apply(p, (x, y))
        scale = max(1.0, lam * math.hypot(*w), lam * math.hypot(x, y))
        assert abs(u.x - lam * w.x) <= 1e-12 * scale and abs(u.y - lam * w.y) <= 1e-12 * scale

    @given(slopes, slopes, coords, coords)
    def test_swap_conjugacy(self, a, b, x, y):
        p = MapParams(a, b)
        lhs = apply(p.swapped(), (x, y))
        rhs = negate(apply(p, negate((x, y))))
        if x == 0.0:
            # both branches agree on the y-axis
            assert lhs == pytest.approx(rhs, abs=1e-12)
        else:
            assert lhs == rhs

    @given(slopes, slopes, coords, coords)
    def test_inverse_is_reflected_map(self, a, b, x, y):
        p = MapParams(a, b)
        assert apply_inverse(p, (x, y)) == reflect_diagonal(apply(p, reflect_diagonal((x, y))))


class TestIterate:
    def test_brown_sequence(self):
        orb = iterate(BROWN, (1.0, 0.0), 9)
        assert orb.final == (1.0, 0.0)
        assert list(first_coordinates(orb)) == [1, 1, 0, -1, 1, 2, 1, -1, 0, 1]
        # exact agreement with the scalar recurrence
        xs = recurrence(1, 0, 0, 1, 9)[1:]
        assert [float(x) for x in xs] == list(first_coordinates(orb))

    def test_rotation_quarter(self):
        assert iterate(MapParams(0, 0), (1.0, 0.0), 4).final == (1.0, 0.0)

    def test_divergence_marker(self):
        orb = iterate(MapParams(3, 3), (1.0, 0.0), 50, limit=SOFT_LIMIT)
        assert orb.diverged and orb.steps < 50
        # dominant eigenvalue (3 + sqrt 5)/2 bounds the step count from below
        lam = 0.5 * (3 + math.sqrt(5))
        assert orb.diverged_at >= math.floor(math.log(SOFT_LIMIT) / math.log(lam)) - 2

    def test_overflow_marker(self):
        orb = iterate(MapParams(3, 3), (1.0, 0.0), 2000)
        assert orb.diverged and np.all(np.isfinite(orb.points))

    def test_max_steps(self):
        with pytest.raises(DomainError):
            iterate(BROWN, (1, 0), 11, max_steps=10)

    def test_backward_matches_inverse(self):
        p = MapParams(1.3, -0.4)
        orb = iterate(p, (0.3, -0.8), -20)
        v = PlaneVec(0.3, -0.8)
        for k in range(20):
            v = apply_inverse(p, v)
            assert np.allclose(orb.points[k + 1], v, rtol=1e-12, atol=0)
        assert orb.step_range == (-20, 0)

    def test_signs_one_per_step(self):
        orb = iterate(BROWN, (1.0, 0.0), 9)
        assert len(orb.signs) == 9
        assert str(orb.signs) == "++0-+++-0"
        assert orb.signs[2] is Sign.ZERO

    @given(slopes, slopes, coords, coords)
    def test_forward_consistency(self, a, b, x, y):
        p = MapParams(a, b)
        orb = iterate(p, (x, y), 25)
        for k in range(orb.steps):
            nxt = apply(p, orb.points[k])
            assert np.allclose(orb.points[k + 1], nxt, rtol=1e-12, atol=0)

    @given(slopes, slopes, coords, coords)
    def test_lifted_angles_reduce_to_polar(self, a, b, x, y):
        if math.hypot(x, y) < 1e-6:
            return
        orb = iterate(MapParams(a, b), (x, y), 30, limit=1e100)
        polar = np.arctan2(orb.points[:, 1], orb.points[:, 0])
        d = (orb.lifted_angles - polar + math.pi) % (2 * math.pi) - math.pi
        assert np.all(np.abs(d) <= 1e-9)

    @given(st.floats(-3, 3), st.floats(-3, 3), coords, coords)
    def test_recurrence_equivalence(self, mu, nu, x1, x0):
        p = MapParams.from_mu_nu(mu, nu)
        xs = first_coordinates(iterate(p, (x1, x0), 30, limit=1e100))
        for k in range(len(xs) - 2):
            pred = mu * abs(xs[k + 1]) + nu * xs[k + 1] - xs[k]
            scale = max(1.0, abs(xs[k]), abs(xs[k + 1]) * (abs(mu) + abs(nu)))
            assert abs(xs[k + 2] - pred) <= 1e-12 * scale


class TestCocycle:
    def test_single_factor(self):
        p = MapParams(2.5, -1.5)
        assert np.array_equal(cocycle_product(p, (1.0, 0.3), 1), companion(2.5))

    def test_brown_identity(self):
        # integer product along a nearby orbit inside the sector counterclockwise of (1, 0)
        orb = iterate(BROWN, (1.0, 1e-3), 9)
        M = np.eye(2, dtype=object)
        for x in orb.points[:-1, 0]:
            s = 1 if x >= 0 else -1
            M = np.array([[s, -1], [1, 0]], dtype=object) @ M
        assert (M == np.eye(2)).all()
        assert np.allclose(cocycle_product(BROWN, (1.0, 0.0), 9), np.eye(2), atol=1e-12)

    @settings(max_examples=200)
    @given(slopes, slopes, coords, coords, st.integers(1, 100))
    def test_determinant(self, a, b, x, y, n):
        try:
            M = cocycle_product(MapParams(a, b), (x, y), n)
        except DivergedError:
            return
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        assert abs(det - 1) <= 1e-9 * max(1.0, abs(M[0, 0] * M[1, 1]), abs(M[0, 1] * M[1, 0]))

    @given(slopes, slopes, coords, coords)
    def test_product_reproduces_power(self, a, b, x, y):
        p = MapParams(a, b)
        M = cocycle_product(p, (x, y), 20) if math.hypot(x, y) > 0 else np.eye(2)
        w = power(p, (x, y), 20)
        assert np.allclose(M @ np.array([x, y]), w, rtol=1e-9, atol=1e-9 * max(1.0, np.abs(M).max()))

    def test_divergence_carries_partial(self):
        with pytest.raises(DivergedError) as ei:
            cocycle_product(MapParams(3, 3), (1.0, 0.0), 5000)
        assert ei.value.partial is not None and ei.value.step < 5000


def test_extended_precision_agrees():
    p = MapParams(1.1, -0.7)
    x, y = iterate_extended(p, (0.4, 0.9), 40)
    w = power(p, (0.4, 0.9), 40)
    assert float(x) == pytest.approx(w.x, rel=1e-10)
    assert float(y) == pytest.approx(w.y, rel=1e-10)
    xb, yb = iterate_extended(p, (float(x), float(y)), -40)
    assert (float(xb), float(yb)) == pytest.approx((0.4, 0.9), rel=1e-12)
