"""The circle map induced on rays, its lift and rotation number.

Angles are in radians, rotation numbers in turns. The lift used throughout
is the one with increment pi/2 at angle 3pi/2 (the ray (0, -1) goes to
(1, 0)), which puts every rotation number in [0, 1/2].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .plane_map import MapParams

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RotationEstimate:
    value_turns: float
    iterations: int
    error_bound_turns: float
    rational_candidate: tuple | None = None
    theta0: float = 0.0
    displacement: float = float("nan")

    @property
    def interval(self) -> tuple:
        return (self.value_turns - self.error_bound_turns,
                self.value_turns + self.error_bound_turns)


def circle_apply(params: MapParams, theta: float) -> float:
    """S_ab(theta): polar angle in [0, 2pi) of T_ab(cos theta, sin theta)."""
    X, Y = K.step(params.a, params.b, math.cos(theta), math.sin(theta))
    t = math.atan2(Y, X)
    if t < 0.0:
        t += TWO_PI
    # atan2 can round a tiny negative angle up to exactly 2pi
    return 0.0 if t >= TWO_PI else t


def lift_increment(params: MapParams, theta: float) -> float:
    """delta(theta) = S~(theta) - theta for the normalised lift.

    Shortest-arc unwrapping is wrong here: the increment can exceed pi
    (e.g. a = -10 at theta = -pi/4).
    """
    return K.increment(params.a, params.b, math.cos(theta), math.sin(theta))[0]


def lift(params: MapParams, theta: float, n: int = 1) -> float:
    """S~^{(n)}(theta) on the universal cover (n >= 0)."""
    if n == 0:
        return theta
    disp, _, _ = K.lift_displacement(params.a, params.b, math.cos(theta), math.sin(theta), int(n))
    return theta + disp


def lift_displacement(params: MapParams, theta: float, n: int) -> float:
    """S~^{(n)}(theta) - theta."""
    return K.lift_displacement(params.a, params.b, math.cos(theta), math.sin(theta), int(n))[0]


def lift_displacements(params: MapParams, thetas, n: int) -> np.ndarray:
    thetas = np.ascontiguousarray(thetas, dtype=float)
    return K.lift_displacement_grid(params.a, params.b, thetas, int(n))


def circle_derivative(params: MapParams, theta: float) -> float:
    """dS/dtheta = 1 / (s^2 cos^2 - 2 s cos sin + 1), s the active slope.

    At cos(theta) == 0 both one-sided pieces equal 1.
    """
    c = math.cos(theta)
    s = math.sin(theta)
    slope = params.a if c > 0 else params.b
    return 1.0 / (slope * slope * c * c - 2.0 * slope * c * s + 1.0)


def rotation_number(params: MapParams, theta0: float = 0.0, N: int = 10**6,
                    q_max: int | None = None) -> RotationEstimate:
    """Endpoint Birkhoff estimate of the rotation number, in turns.

    The lift of a circle homeomorphism stays within one turn of n times the
    rotation number, so the estimate carries the rigorous bound 1/N. The
    value is clamped to [0, 1/2], where every rotation number of this family
    lies.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    disp = lift_displacement(params, theta0, N)
    value = min(max(disp / (TWO_PI * N), 0.0), 0.5)
    est = RotationEstimate(value, int(N), 1.0 / N, None, float(theta0), disp)
    if q_max is not None:
        cand = detect_rational(est, q_max)
        est = RotationEstimate(value, int(N), 1.0 / N, cand, float(theta0), disp)
    return est


def fractions_in(lo: float, hi: float, q_max: int) -> list:
    """All reduced p/q (p >= 0, q <= q_max) in the closed interval [lo, hi]."""
    found = []
    for q in range(1, q_max + 1):
        p_lo = max(0, math.ceil(lo * q))
        p_hi = math.floor(hi * q)
        for p in range(p_lo, p_hi + 1):
            if math.gcd(p, q) == 1:
                found.append((p, q))
    return found


def detect_rational(est: RotationEstimate, q_max: int) -> tuple | None:
    """The rational p/q, q <= q_max, that the estimate pins down, if any.

    Exactly one reduced fraction may lie in the error interval, and the
    interval must be narrower than the Farey gap 1/(q q_max) around it.
    A value returned here is only a candidate until a periodic ray of that
    rotation number has been found.
    """
    lo, hi = est.interval
    cands = fractions_in(lo, hi, q_max)
    if len(cands) != 1:
        return None
    p, q = cands[0]
    if hi - lo >= 1.0 / (q * q_max):
        return None
    return p, q

