"""Parameter families with closed-form rotation numbers, the upper-endpoint
witness, and the nu-solver for prescribed periodic rays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circle_map import lift_displacement
from .errors import DomainError, InfeasibleError, SolverError
from .plane_map import MapParams, PlaneVec, power

TWO_PI = 2.0 * math.pi
SOLVER_TOL = 1e-12


def _check_theta(theta):
    if not 0.0 < theta < math.pi:
        raise DomainError(f"theta = {theta} outside (0, pi)")


def rotnum_linear(theta: float) -> float:
    """Rotation number (turns) of the linear map a = b = 2cos(theta)."""
    _check_theta(theta)
    return theta / TWO_PI


def rotnum_family32(n: int, theta: float) -> float:
    """Rotation number for a = 2cos(pi/n), b = 2cos(theta)."""
    if n < 2:
        raise DomainError("n must be >= 2")
    _check_theta(theta)
    return theta / (math.pi + n * theta)


def params_family32(n: int, theta: float) -> MapParams:
    if n < 2:
        raise DomainError("n must be >= 2")
    _check_theta(theta)
    return MapParams(2.0 * math.cos(math.pi / n), 2.0 * math.cos(theta))


def period_family32(n: int, p: int, q: int) -> int:
    """Period of the a = 2cos(pi/n), b = 2cos(2 pi p/q) map."""
    if n < 2:
        raise DomainError("n must be >= 2")
    if q < 1 or p < 1 or math.gcd(p, q) != 1:
        raise DomainError(f"p/q = {p}/{q} must be reduced with p, q >= 1")
    if 2 * p >= q:
        raise DomainError(f"2 pi p/q = 2 pi {p}/{q} not in (0, pi)")
    period = 2 * n * p + q
    return period // 2 if q % 2 == 0 else period


@dataclass(frozen=True)
class FamilyMember:
    params: MapParams
    rotation: tuple
    period: int


def family_ex33(n: int, a: float) -> FamilyMember:
    """Member of the hyperbola ab = 4cos^2(pi/2n), a, b < 0.

    Every such map is periodic with period 4n and rotation number (2n-1)/4n.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if not a < 0.0:
        raise DomainError(f"a = {a} must be negative on this family")
    b = 4.0 * math.cos(math.pi / (2 * n)) ** 2 / a
    return FamilyMember(MapParams(a, b), (2 * n - 1, 4 * n), 4 * n)


def ex33_nu(mu: float, n: int) -> float:
    """The nu < 0 where the fixed-mu line meets the family of ``family_ex33``."""
    if n < 2:
        raise DomainError("n must be >= 2")
    return -math.sqrt(mu * mu + 4.0 * math.cos(math.pi / (2 * n)) ** 2)


@dataclass(frozen=True)
class PeriodicRayWitness:
    theta: float
    n: int
    c: float
    k: float
    v: PlaneVec
    predicted_rotation: tuple
    x: tuple  # x-coordinates x_1..x_n of the first n images of v

    @property
    def multiplier(self) -> float:
        return self.k


def witness_bound(a: float) -> float:
    """Largest b for which ``witness_upper_endpoint`` succeeds."""
    theta, n = _theta_n(a)
    s1 = math.sin(theta)
    sn = math.sin(n * theta)
    sn1 = math.sin((n + 1) * theta)
    if abs(sn1) <= 1e-12:
        raise InfeasibleError(f"a = {a} sits on a resonance sin((n+1)theta) = 0")
    return 2.0 * (sn + s1) / sn1


def _theta_n(a):
    if not -2.0 <= a < 2.0:
        raise DomainError(f"a = {a} outside [-2, 2)")
    theta = math.acos(a / 2.0)
    if math.sin(theta) == 0.0:
        raise InfeasibleError("a = -2 gives sin(theta) = 0")
    n = int(math.floor(math.pi / theta))
    # pi/theta can round just below an integer when a = 2cos(pi/m) exactly
    if 2.0 * math.cos(math.pi / (n + 1)) <= a + 1e-14:
        n += 1
    return theta, n


def witness_upper_endpoint(a: float, b: float, slack: float = 1e-12) -> PeriodicRayWitness:
    """Ray fixed by S^{(n+1)} with rotation number 1/(n+1), a = 2cos(theta).

    The witness v has v_x <= 0 and its next n images lie in the right
    half-plane, so it is an eigenvector of A(a)^n A(b) with eigenvalue k.
    It exists exactly when the trace of that product is at least 2; b may
    exceed the bound by ``slack`` (relative) to absorb rounding in theta.
    """
    theta, n = _theta_n(a)
    bound = witness_bound(a)
    if b > bound + slack * max(1.0, abs(bound)):
        raise InfeasibleError(f"b = {b} above the bound {bound} for a = {a}")
    s1 = math.sin(theta)
    sn = math.sin(n * theta)
    sn1 = math.sin((n + 1) * theta)
    c = max((b * sn1 - 2.0 * sn - 2.0 * s1) / s1, 0.0)
    root = math.sqrt(c * (c + 4.0))
    k = 1.0 + 0.5 * (c + root)
    v = PlaneVec(sn1 / s1, 0.5 * (c - root) + 1.0 + sn / s1)
    xs = tuple((math.sin(m * theta) * k + math.sin((n - m + 1) * theta)) / s1
               for m in range(1, n + 1))
    return PeriodicRayWitness(theta, n, c, k, v, (1, n + 1), xs)


@dataclass(frozen=True)
class SolveResult:
    nu: float
    residual: float
    iterations: int


def solve_nu(mu: float, p: int, q: int, theta: float, tol: float = SOLVER_TOL,
             nu_lo: float | None = None, nu_hi: float | None = None,
             max_expand: int = 60) -> SolveResult:
    """The unique nu making the direction theta periodic with rotation p/q.

    The 4q-step lift displacement at theta is continuous and strictly
    decreasing in nu. At the lower anchor (the periodic family with rotation
    (2q-1)/4q) it equals 2 pi (2q-1), above the target 2 pi 4p; once
    a = mu + nu >= 2 the rotation number is 0 and it is below 2 pi. Bisecting
    between these pins nu to ``tol``; ``residual`` is the q-step defect
    |S~^{(q)}(theta) - theta - 2 pi p| at the returned nu.
    """
    if q < 1 or math.gcd(p, q) != 1 or not 0 < p / q < 0.5:
        raise DomainError(f"p/q = {p}/{q} must be reduced with 0 < p/q < 1/2")
    if not (math.isfinite(mu) and math.isfinite(theta)):
        raise DomainError("mu and theta must be finite")
    target = TWO_PI * 4 * p

    def f(nu):
        return lift_displacement(MapParams.from_mu_nu(mu, nu), theta, 4 * q) - target

    lo = ex33_nu(mu, q) if nu_lo is None else nu_lo
    hi = 3.0 - mu if nu_hi is None else nu_hi
    if not f(lo) > 0.0:
        raise SolverError(f"lower bracket nu = {lo} does not lie above the target")
    step = max(hi - lo, 1.0)
    for _ in range(max_expand):
        if f(hi) < 0.0:
            break
        hi += step
        step *= 2.0
    else:
        raise SolverError(f"no upper bracket found up to nu = {hi}")
    it = 0
    while hi - lo > tol and it < 200:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if fm > 0.0:
            lo = mid
        else:
            hi = mid
        it += 1
    nu = 0.5 * (lo + hi)
    res = abs(lift_displacement(MapParams.from_mu_nu(mu, nu), theta, q) - TWO_PI * p)
    return SolveResult(nu, res, it)


def witness_image(params: MapParams, w: PeriodicRayWitness) -> PlaneVec:
    """T^{(n+1)}(v) for checking the witness by direct iteration."""
    return power(params, w.v, w.n + 1)

