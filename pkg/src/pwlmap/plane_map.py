"""The plane maps T_ab(x, y) = (F_ab(x) - y, x) and their iterates.

F_ab(x) is ``a`` for x >= 0 and ``b`` for x < 0. The same maps are
parametrised by ``mu = (a - b)/2`` and ``nu = (a + b)/2``, in which form the
first coordinates of an orbit solve x_{n+2} = mu|x_{n+1}| + nu x_{n+1} - x_n.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

from . import _kernels as K
from .errors import DivergedError, DomainError

HARD_LIMIT = 1e300
SOFT_LIMIT = 1e8
MAX_STEPS = 10**8
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class MapParams:
    """Slopes ``a`` (for x >= 0) and ``b`` (for x < 0)."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"non-finite parameters ({self.a}, {self.b})")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def from_mu_nu(cls, mu: float, nu: float) -> "MapParams":
        return cls(nu + mu, nu - mu)

    @property
    def mu(self) -> float:
        return 0.5 * (self.a - self.b)

    @property
    def nu(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def energy(self) -> float:
        """Spectral parameter E = 2 - nu of the Schrodinger-type form."""
        return 2.0 - self.nu

    def swapped(self) -> "MapParams":
        return MapParams(self.b, self.a)

    @property
    def is_linear(self) -> bool:
        return self.a == self.b


def convert_parameters(mu: float, nu: float) -> MapParams:
    if not (math.isfinite(mu) and math.isfinite(nu)):
        raise DomainError(f"non-finite (mu, nu) = ({mu}, {nu})")
    return MapParams.from_mu_nu(mu, nu)


class PlaneVec(NamedTuple):
    x: float
    y: float

    @property
    def modulus(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def angle(self) -> float:
        """Polar angle in [0, 2pi)."""
        t = math.atan2(self.y, self.x)
        return t + 2 * math.pi if t < 0 else t


class Sign(enum.IntEnum):
    NEG = -1
    ZERO = 0
    POS = 1

    def __str__(self):
        return {1: "+", 0: "0", -1: "-"}[int(self)]


class SignWord(tuple):
    """Sequence of Sign symbols; prints as e.g. ``++0-``."""

    def __str__(self):
        return "".join(str(Sign(s)) for s in self)


def _vec(v) -> PlaneVec:
    x, y = float(v[0]), float(v[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"non-finite point ({x}, {y})")
    return PlaneVec(x, y)


def sign_of(x: float, scale: float = 1.0, zero_tol: float = ZERO_TOL) -> Sign:
    """Sign symbol of an x-coordinate; ZERO when |x| <= zero_tol * scale."""
    if abs(x) <= zero_tol * scale:
        return Sign.ZERO
    return Sign.POS if x > 0 else Sign.NEG


def apply(params: MapParams, v) -> PlaneVec:
    """One step of T_ab. The branch at x == 0 is the ``a`` branch."""
    x, y = _vec(v)
    return PlaneVec(*K.step(params.a, params.b, x, y))


def apply_inverse(params: MapParams, v) -> PlaneVec:
    """T_ab^{-1}(x, y) = (y, F_ab(y) y - x)."""
    x, y = _vec(v)
    return PlaneVec(*K.step_inv(params.a, params.b, x, y))


def companion(slope: float) -> np.ndarray:
    return np.array([[slope, -1.0], [1.0, 0.0]])


@dataclass
class OrbitSample:
    """A finite orbit segment.

    ``points[k]`` is T^{k}(start) for forward segments and T^{-k}(start) for
    backward ones. ``signs[k]`` is the sign of the x-coordinate that selects
    the branch of the forward map linking points[k] and points[k+1], so the
    word always has one symbol per step. ``lifted_angles`` are unwrapped
    along the lift normalised by an increment of pi/2 at angle 3pi/2.

    ``diverged_at`` is set when the modulus passed the divergence limit; the
    segment then ends at the last representable point.
    """

    start: PlaneVec
    points: np.ndarray
    signs: SignWord
    lifted_angles: np.ndarray
    step_range: tuple
    diverged_at: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def final(self) -> PlaneVec:
        return PlaneVec(*self.points[-1])

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    @property
    def diverged(self) -> bool:
        return self.diverged_at is not None

    def moduli(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])


def iterate(params: MapParams, v, n: int, limit: float = HARD_LIMIT,
            zero_tol: float = ZERO_TOL, max_steps: int = MAX_STEPS) -> OrbitSample:
    """Orbit segment of |n| steps, forward for n > 0 and backward for n < 0.

    The segment stops early (``diverged_at`` set) once the modulus exceeds
    ``limit``. Classifiers pass the soft limit here; the default only guards
    against overflow.
    """
    v = _vec(v)
    n = int(n)
    if abs(n) > max_steps:
        raise DomainError(f"|n| = {abs(n)} exceeds max_steps = {max_steps}")
    forward = n >= 0
    pts, deltas, done = K.orbit(params.a, params.b, v.x, v.y, abs(n), forward, limit)
    mods = np.hypot(pts[:, 0], pts[:, 1])
    if forward:
        branch_x = pts[:-1, 0]
        scale = mods[:-1]
    else:
        branch_x = pts[1:, 0]
        scale = mods[1:]
    signs = SignWord(sign_of(x, s, zero_tol) for x, s in zip(branch_x, scale))
    lifted = np.empty(len(pts))
    lifted[0] = v.angle
    np.cumsum(deltas, out=lifted[1:])
    lifted[1:] += lifted[0]
    steps = len(pts) - 1
    rng = (0, steps) if forward else (-steps, 0)
    return OrbitSample(
        start=v,
        points=pts,
        signs=signs,
        lifted_angles=lifted,
        step_range=rng,
        diverged_at=done if done < abs(n) else None,
    )


def first_coordinates(orbit: OrbitSample) -> np.ndarray:
    return orbit.points[:, 0].copy()


def power(params: MapParams, v, n: int) -> PlaneVec:
    """T^{(n)}(v) without storing the segment (n may be negative)."""
    v = _vec(v)
    x, y = v
    if n >= 0:
        for _ in range(n):
            x, y = K.step(params.a, params.b, x, y)
    else:
        for _ in range(-n):
            x, y = K.step_inv(params.a, params.b, x, y)
    return PlaneVec(x, y)


def power_many(params: MapParams, pts, n: int) -> np.ndarray:
    pts = np.ascontiguousarray(pts, dtype=float)
    return K.power_many(params.a, params.b, pts, int(n))


def cocycle_product(params: MapParams, v, n: int) -> np.ndarray:
    """M_n(v) = A(x_n) ... A(x_1) with A(s) the companion matrix of slope F(s).

    ``M_n @ v`` is T^{(n)}(v). Where an iterate lies on the y-axis either
    slope gives the same point; the factor used is the one of the sector
    just counterclockwise of it, making M_n the matrix of T^{(n)} on the
    sector that starts at v. Raises DivergedError carrying the partial
    product if the orbit overflows first.
    """
    if n < 1:
        raise DomainError("n must be a positive integer")
    v = _vec(v)
    M, done = K.product_along(params.a, params.b, v.x, v.y, int(n))
    if done < n:
        raise DivergedError(f"orbit overflowed at step {done}", done, partial=M)
    return M


def iterate_extended(params: MapParams, v, n: int, bits: int = 192) -> tuple:
    """T^{(n)}(v) computed with a ``bits``-bit significand.

    Parameters and start point are taken as the exact binary values of the
    doubles passed in, so this isolates accumulated rounding in the orbit
    from rounding in the parameters. Returns mpmath numbers.
    """
    with mpmath.workprec(bits):
        a = mpmath.mpf(params.a)
        b = mpmath.mpf(params.b)
        x = mpmath.mpf(float(v[0]))
        y = mpmath.mpf(float(v[1]))
        if n >= 0:
            for _ in range(n):
                s = a if x >= 0 else b
                x, y = s * x - y, x
        else:
            for _ in range(-n):
                s = a if y >= 0 else b
                x, y = y, s * y - x
        return x, y


def reflect_diagonal(v) -> PlaneVec:
    """R(x, y) = (y, x); conjugates T_ab to its inverse."""
    return PlaneVec(v[1], v[0])


def negate(v) -> PlaneVec:
    return PlaneVec(-v[0], -v[1])


def as_points(vs: Sequence) -> np.ndarray:
    return np.asarray(vs, dtype=float).reshape(-1, 2)
