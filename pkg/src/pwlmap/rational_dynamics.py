"""Periodic rays, periodic maps and the rational-rotation trichotomy.

When the rotation number is p/q the circle map has periodic rays, each
carrying a multiplier: the factor by which T^{(q)} stretches the ray. One
orbit of rays means a parabolic map (multiplier 1, all other orbits diverge
linearly), two means a hyperbolic pair (multipliers lambda and 1/lambda),
three or more means T itself has finite order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import _kernels as K
from .circle_map import (RotationEstimate, circle_apply, detect_rational,
                         lift_displacement, lift_displacements, rotation_number)
from .errors import DomainError, PreconditionError
from .plane_map import (HARD_LIMIT, SOFT_LIMIT, MapParams, OrbitSample, PlaneVec,
                        SignWord, iterate, iterate_extended, power, power_many)

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-10
MULT_TOL = 1e-8
GRID_DENSITY = 4096
# rays closer than this (in radians) are treated as the same ray when orbits are grouped
MATCH_TOL = 1e-8


@dataclass(frozen=True)
class PeriodicRay:
    angle: float
    q: int
    p: int
    multiplier: float

    @property
    def direction(self) -> PlaneVec:
        return PlaneVec(math.cos(self.angle), math.sin(self.angle))


@dataclass(frozen=True)
class FiniteOrder:
    period: int
    rotation: tuple
    tag = "F"


@dataclass(frozen=True)
class UniqueParabolic:
    q: int
    p: int
    ray: PeriodicRay
    tag = "P"


@dataclass(frozen=True)
class HyperbolicPair:
    q: int
    p: int
    expanding: PeriodicRay
    contracting: PeriodicRay
    tag = "H"


@dataclass(frozen=True)
class Irrational:
    estimate: RotationEstimate
    tag = "I"


@dataclass(frozen=True)
class Unresolved:
    reason: str
    tag = "U"


DynamicsClass = Union[FiniteOrder, UniqueParabolic, HyperbolicPair, Irrational, Unresolved]


@dataclass(frozen=True)
class PeriodicTypeTag:
    kind: str  # "ONE_ORBIT" or "TWO_ORBITS"
    period_up: int  # period of (0, 1)
    period_down: int  # period of (0, -1)

    ONE_ORBIT = "ONE_ORBIT"
    TWO_ORBITS = "TWO_ORBITS"


def _circ_dist(s, t):
    d = np.abs((np.asarray(s) - t + math.pi) % TWO_PI - math.pi)
    return d


def _angle(x, y):
    t = math.atan2(y, x)
    return t + TWO_PI if t < 0 else t


def _positive_eigenpairs(M):
    """Real eigenpairs (lambda > 0, unit e) of a 2x2 matrix that is not a multiple of I."""
    m11, m12, m21, m22 = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    tr = m11 + m22
    det = m11 * m22 - m12 * m21
    disc = (m11 - m22) ** 2 + 4.0 * m12 * m21
    scale = max(1.0, tr * tr)
    if disc < -1e-14 * scale:
        return []
    sq = math.sqrt(max(disc, 0.0))
    if sq <= 1e-14 * math.sqrt(scale):
        lams = [0.5 * tr]
    else:
        big = 0.5 * (tr + math.copysign(sq, tr))
        lams = [big, det / big]
    out = []
    for lam in lams:
        if lam <= 0.0:
            continue
        e1 = (m12, lam - m11)
        e2 = (lam - m22, m21)
        e = e1 if math.hypot(*e1) >= math.hypot(*e2) else e2
        r = math.hypot(*e)
        if r == 0.0:
            continue
        out.append((lam, (e[0] / r, e[1] / r)))
    return out


def _breakpoints(params: MapParams, q: int) -> np.ndarray:
    """Sorted distinct directions where T^{(q)} stops being linear."""
    a, b = params.a, params.b
    angs = np.concatenate([K.preimage_angles(a, b, 0.0, 1.0, q),
                           K.preimage_angles(a, b, 0.0, -1.0, q)])
    angs = np.sort(angs % TWO_PI)
    keep = [angs[0]]
    for t in angs[1:]:
        if t - keep[-1] > 1e-13:
            keep.append(t)
    if len(keep) > 1 and keep[0] + TWO_PI - keep[-1] <= 1e-13:
        keep.pop()
    return np.array(keep)


def _in_sector(phi, lo, hi, tol):
    t = lo + (phi - lo) % TWO_PI
    return t <= hi + tol or t >= lo + TWO_PI - tol


def _sector_candidates(params, p, q):
    """Fixed directions of S^{(q)} via the linear pieces of T^{(q)}."""
    a, b = params.a, params.b
    bps = _breakpoints(params, q)
    m = len(bps)
    cands = []
    for k in range(m):
        lo = bps[k]
        hi = bps[k + 1] if k + 1 < m else bps[0] + TWO_PI
        mid = 0.5 * (lo + hi)
        M = K.sector_word_matrix(a, b, math.cos(mid), math.sin(mid), q)
        if np.max(np.abs(M - np.eye(2))) <= 1e-9 * max(1.0, np.max(np.abs(M))):
            # the whole sector is fixed: report its edge and interior sample rays
            for frac in (0.0, 0.25, 0.5, 0.75):
                cands.append(((lo + frac * (hi - lo)) % TWO_PI, 1.0))
            continue
        for lam, e in _positive_eigenpairs(M):
            for sgn in (1.0, -1.0):
                phi = _angle(sgn * e[0], sgn * e[1])
                if _in_sector(phi, lo, hi, 1e-12):
                    cands.append((phi, lam))
    return cands


def _grid_candidates(params, p, q, density, angle_tol, flat_tol=1e-9):
    """Fixed directions of S^{(q)} by sign changes of the q-step lift on a grid.

    Runs of samples where the defect is within ``flat_tol`` of zero (a piece
    of circle fixed pointwise) contribute their two ends and midpoint
    instead of a zero per rounding-noise sign flip.
    """
    n = density * q
    thetas = np.linspace(0.0, TWO_PI, n, endpoint=False)
    g = lift_displacements(params, thetas, q) - TWO_PI * p
    flat = np.abs(g) <= flat_tol
    cands = []
    if flat.all():
        # generic sample angles; quarter turns would all sit on the orbit of (0, 1)
        cands = [f * TWO_PI for f in (0.1, 0.37, 0.61, 0.83)]
    else:
        start = int(np.argmin(flat))  # a non-flat sample, so no run wraps past it
        i = 0
        while i < n:
            k = (start + i) % n
            if flat[k]:
                j = i
                while j + 1 < n and flat[(start + j + 1) % n]:
                    j += 1
                for t in {i, (i + j) // 2, j}:
                    cands.append(thetas[(start + t) % n])
                i = j + 1
                continue
            k1 = (k + 1) % n
            if not flat[k1] and g[k] * g[k1] < 0.0:
                cands.append(_bisect(params, p, q, thetas[k], thetas[k] + TWO_PI / n, g[k], angle_tol))
            i += 1
    out = []
    for t in cands:
        img = power(params, (math.cos(t), math.sin(t)), q)
        out.append((t, math.hypot(*img)))
    return out


def _bisect(params, p, q, lo, hi, flo, angle_tol):
    while hi - lo > angle_tol:
        mid = 0.5 * (lo + hi)
        fm = lift_displacement(params, mid, q) - TWO_PI * p
        if fm == 0.0:
            return mid % TWO_PI
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (0.5 * (lo + hi)) % TWO_PI


def _group_orbits(params, cands, q, match_tol):
    """Union candidates that are images of one another under S (or -1 when linear)."""
    n = len(cands)
    angs = np.array([c[0] for c in cands])
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for i in range(n):
        d = _circ_dist(angs, angs[i])
        for j in np.nonzero(d < match_tol)[0]:
            union(i, int(j))
        s = circle_apply(params, angs[i])
        d = _circ_dist(angs, s)
        j = int(np.argmin(d))
        if d[j] < match_tol:
            union(i, j)
        if params.is_linear:
            d = _circ_dist(angs, angs[i] + math.pi)
            j = int(np.argmin(d))
            if d[j] < match_tol:
                union(i, j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def find_periodic_rays(params: MapParams, p: int, q: int, method: str = "sector",
                       density: int = GRID_DENSITY, angle_tol: float = ANGLE_TOL,
                       match_tol: float = MATCH_TOL) -> list:
    """One representative PeriodicRay per periodic orbit of rotation number p/q.

    ``method="sector"`` (default) splits the circle at the directions where
    some iterate crosses the y-axis; on each piece T^{(q)} is one matrix and
    its fixed rays are positive eigenvectors, so tangential (parabolic) fixed
    points are found exactly. ``method="grid"`` scans the q-step lift on
    ``density * q`` angles for sign changes and bisects to ``angle_tol``; it
    cannot see a zero the lift only touches.

    For linear maps (a == b) a ray and its antipode are reported once. A
    piece of circle fixed pointwise contributes several sample rays, so a
    finite-order map always shows at least three orbits. Each returned ray
    winds p times in q steps; an empty list means p/q is not the rotation
    number.
    """
    if q < 1 or math.gcd(p, q) != 1:
        raise DomainError(f"p/q = {p}/{q} must be in lowest terms with q >= 1")
    if not 0 <= p / q <= 0.5:
        raise DomainError(f"p/q = {p}/{q} outside [0, 1/2]")
    if method == "sector":
        cands = _sector_candidates(params, p, q)
    elif method == "grid":
        cands = _grid_candidates(params, p, q, density, angle_tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    good = []
    for phi, lam in cands:
        wind = lift_displacement(params, phi, q) / TWO_PI
        if abs(wind - p) < 0.25:
            good.append((phi, lam))
    if not good:
        return []
    good.sort()
    rays = []
    for members in _group_orbits(params, good, q, match_tol):
        phi, lam = good[min(members)]
        rays.append(PeriodicRay(float(phi), q, p, float(lam)))
    rays.sort(key=lambda r: r.angle)
    return rays


def ray_multiplier(params: MapParams, ray: PeriodicRay) -> float:
    """|T^{(q)}(v)| for the unit vector v on the ray, by direct iteration."""
    return math.hypot(*power(params, ray.direction, ray.q))


def is_finite_order(params: MapParams, p_max: int = 1000, tol: float = 1e-9,
                    angle_tol: float = ANGLE_TOL, mult_tol: float = MULT_TOL,
                    n_check: int = 100, seed: int = 0, bits: int = 192) -> int | None:
    """Smallest n <= p_max with T^{(n)} the identity, or None.

    T is periodic exactly when (0, 1) is, so the orbit of (0, 1) is scanned
    for a return: first to its ray (within ``angle_tol``), then in modulus
    (relative ``tol``). A return with multiplier this close to 1 is re-done
    in ``bits``-bit arithmetic, and finally T^{(n)} must fix ``n_check``
    seeded random points to relative ``tol``.
    """
    if p_max < 1:
        raise DomainError("p_max must be >= 1")
    orb = iterate(params, (0.0, 1.0), p_max, limit=HARD_LIMIT)
    pts = orb.points
    ang = np.arctan2(pts[:, 1], pts[:, 0])
    mods = np.hypot(pts[:, 0], pts[:, 1])
    hits = np.nonzero(_circ_dist(ang, 0.5 * math.pi) <= angle_tol)[0]
    for n in hits:
        if n == 0:
            continue
        lam = mods[n]
        if abs(lam - 1.0) > max(tol, 10 * mult_tol):
            continue
        x, y = iterate_extended(params, (0.0, 1.0), int(n), bits=bits)
        if abs(float(x)) > tol or abs(float(y) - 1.0) > tol:
            continue
        rng = np.random.default_rng(seed)
        sample = rng.uniform(-1.0, 1.0, size=(n_check, 2))
        img = power_many(params, sample, int(n))
        err = np.hypot(*(img - sample).T) / np.hypot(*sample.T)
        if np.all(err <= tol):
            return int(n)
        return None
    return None


def _classify_rays(params, rays, p, q, mult_tol, finite_check):
    if len(rays) >= 3:
        period = finite_check()
        if period is not None:
            return FiniteOrder(period, (p, q))
    elif len(rays) == 1:
        r = rays[0]
        if abs(r.multiplier - 1.0) < mult_tol:
            period = finite_check()
            if period is not None:
                return FiniteOrder(period, (p, q))
            return UniqueParabolic(q, p, r)
        return Unresolved(f"single periodic orbit with multiplier {r.multiplier!r}")
    exp = max(rays, key=lambda r: r.multiplier)
    con = min(rays, key=lambda r: r.multiplier)
    if exp.multiplier <= 1.0 + mult_tol:
        if len(rays) == 2 and abs(con.multiplier - 1.0) < mult_tol:
            if _circ_dist(exp.angle, con.angle) < math.sqrt(mult_tol):
                # two eigenrays about to merge: the parabolic boundary
                return UniqueParabolic(q, p, exp)
        return Unresolved(f"{len(rays)} periodic orbits, all multipliers close to 1")
    if abs(exp.multiplier * con.multiplier - 1.0) > 1e-9:
        return Unresolved(
            f"multipliers {exp.multiplier!r}, {con.multiplier!r} are not reciprocal")
    return HyperbolicPair(q, p, exp, con)


def classify(params: MapParams, q_max: int = 64, N: int = 10**6, theta0: float = 0.0,
             estimate: RotationEstimate | None = None, method: str = "sector",
             mult_tol: float = MULT_TOL, angle_tol: float = ANGLE_TOL,
             tol: float = 1e-9) -> DynamicsClass:
    """Which of the rational-rotation behaviours (if any) the map shows.

    The rotation number is estimated with N iterates (or taken from
    ``estimate``); a rational candidate with q <= q_max counts only once a
    periodic ray of that rotation number is found. An unconfirmed candidate
    is reported as Irrational; inconsistent numerics come back as
    Unresolved rather than raising.
    """
    est = estimate if estimate is not None else rotation_number(params, theta0, N)
    cand = detect_rational(est, q_max)
    if cand is None:
        return Irrational(est)
    p, q = cand
    try:
        rays = find_periodic_rays(params, p, q, method=method, angle_tol=angle_tol)
    except (FloatingPointError, ZeroDivisionError) as exc:
        return Unresolved(f"ray search failed: {exc}")
    if not rays:
        return Irrational(est)

    def finite_check():
        return is_finite_order(params, 2 * q, tol=tol, angle_tol=angle_tol, mult_tol=mult_tol)

    return _classify_rays(params, rays, p, q, mult_tol, finite_check)


@dataclass
class Growth:
    """Modulus history of one orbit direction."""

    direction: str
    steps: int
    max_modulus: float
    min_modulus: float
    final_modulus: float
    exceeded_at: int | None
    kind: str  # "exponential", "linear", "contracting", "bounded"


def _growth(params, v, N, forward, threshold, contraction):
    mods = K.modulus_track(params.a, params.b, v[0], v[1], N, forward)
    m0 = mods[0]
    over = np.nonzero(mods > threshold * m0)[0]
    exceeded = int(over[0]) if len(over) else None
    mn = float(mods.min())
    if exceeded is not None:
        kind = "exponential"
        mods = mods[: exceeded + 1]
    elif mn < contraction * m0:
        kind = "contracting"
    else:
        k = len(mods) - 1
        kind = "bounded"
        if k >= 8 and mods[-1] > 10 * m0:
            lo = k // 4
            slope = math.log(mods[k] / mods[lo]) / math.log(k / lo)
            if 0.8 <= slope <= 1.2:
                kind = "linear"
            elif slope > 1.2:
                kind = "exponential"
    return Growth("forward" if forward else "backward", len(mods) - 1,
                  float(mods.max()), mn, float(mods[-1]), exceeded, kind)


@dataclass
class DivergenceReport:
    cls: str
    forward: Growth
    backward: Growth
    exceptional: dict = field(default_factory=dict)
    consistent: bool = True
    reason: str = ""


def orbit_divergence_check(params: MapParams, cls: DynamicsClass, v, N: int = 10**4,
                           threshold: float = SOFT_LIMIT,
                           contraction: float = 1e-6) -> DivergenceReport:
    """Check the orbit behaviour a parabolic or hyperbolic class predicts.

    Parabolic: the generic orbit of v grows linearly in both directions.
    Hyperbolic: it passes ``threshold`` both ways, and the orbits over the
    expanding and contracting rays fall below ``contraction`` backward and
    forward respectively while diverging the other way. Anything else gives
    ``consistent=False`` with a reason.
    """
    if not isinstance(cls, (UniqueParabolic, HyperbolicPair)):
        raise PreconditionError("divergence check needs a parabolic or hyperbolic class")
    v = PlaneVec(float(v[0]), float(v[1]))
    fw = _growth(params, v, N, True, threshold, contraction)
    bw = _growth(params, v, N, False, threshold, contraction)
    rep = DivergenceReport(type(cls).__name__, fw, bw)
    problems = []
    if isinstance(cls, UniqueParabolic):
        for g in (fw, bw):
            if g.kind not in ("linear", "exponential"):
                problems.append(f"{g.direction} orbit is {g.kind}")
        ray = cls.ray.direction
        for fwd in (True, False):
            g = _growth(params, ray, N, fwd, threshold, contraction)
            rep.exceptional[f"ray_{g.direction}"] = g
        if fw.kind == "exponential" or bw.kind == "exponential":
            problems.append("generic orbit grows exponentially at a parabolic map")
    else:
        for g in (fw, bw):
            if g.kind != "exponential":
                problems.append(f"{g.direction} orbit is {g.kind}, expected divergence")
        checks = (("contracting", cls.contracting, True), ("expanding", cls.expanding, False))
        for name, ray, shrink_forward in checks:
            g_shrink = _growth(params, ray.direction, N, shrink_forward, threshold, contraction)
            g_grow = _growth(params, ray.direction, N, not shrink_forward, threshold, contraction)
            rep.exceptional[f"{name}_{g_shrink.direction}"] = g_shrink
            rep.exceptional[f"{name}_{g_grow.direction}"] = g_grow
            if g_shrink.min_modulus >= contraction:
                problems.append(f"{name} ray does not contract {g_shrink.direction}")
            if g_grow.kind != "exponential":
                problems.append(f"{name} ray does not diverge {g_grow.direction}")
    if problems:
        rep.consistent = False
        rep.reason = "; ".join(problems)
    return rep


@dataclass
class LambdaRelations:
    lam: float
    case: str  # "positive", "negative-first", "negative-second"
    relations: dict
    holds: bool


def _close(u, v, tol):
    return math.hypot(u[0] - v[0], u[1] - v[1]) <= tol * max(1.0, math.hypot(*v))


def lambda_relations_check(params: MapParams, n: int, tol: float = 1e-9,
                           angle_tol: float = ANGLE_TOL) -> LambdaRelations:
    """Verify the identities forced when S^{(n)} sends (0, 1) or (0, -1) to the y-axis.

    With T^{(n)}(0, 1) = (0, lam) (or T^{(n)}(0, -1) = (0, -1/lam)):
    lam > 0 gives T^{(n)}(0, -1) = (0, -1/lam), T^{(n)}(-1, 0) = (-lam, 0),
    T^{(n)}(1, 0) = (1/lam, 0); lam < 0 forces lam = -1.
    """
    up = power(params, (0.0, 1.0), n)
    down = power(params, (0.0, -1.0), n)
    if abs(up.x) <= angle_tol * abs(up.y) and up.y != 0.0:
        lam = up.y
        first = True
    elif abs(down.x) <= angle_tol * abs(down.y) and down.y != 0.0:
        lam = -1.0 / down.y
        first = False
    else:
        raise PreconditionError(
            f"S^({n}) maps neither (0, 1) nor (0, -1) onto the y-axis")
    left = power(params, (-1.0, 0.0), n)
    right = power(params, (1.0, 0.0), n)
    if lam > 0:
        rel = {
            "T^n(0,1) = (0,lam)": _close(up, (0.0, lam), tol),
            "T^n(0,-1) = (0,-1/lam)": _close(down, (0.0, -1.0 / lam), tol),
            "T^n(-1,0) = (-lam,0)": _close(left, (-lam, 0.0), tol),
            "T^n(1,0) = (1/lam,0)": _close(right, (1.0 / lam, 0.0), tol),
        }
        case = "positive"
    else:
        rel = {"lam = -1": abs(lam + 1.0) <= tol}
        if first:
            rel["T^n(0,1) = (0,-1)"] = _close(up, (0.0, -1.0), tol)
            rel["T^n(-1,0) = (1,0)"] = _close(left, (1.0, 0.0), tol)
            case = "negative-first"
        else:
            rel["T^n(0,-1) = (0,1)"] = _close(down, (0.0, 1.0), tol)
            rel["T^n(1,0) = (-1,0)"] = _close(right, (-1.0, 0.0), tol)
            case = "negative-second"
    return LambdaRelations(float(lam), case, rel, all(rel.values()))


def periodic_type(params: MapParams, p_max: int = 1000, tol: float = 1e-9) -> PeriodicTypeTag:
    """Whether (0, 1) and (0, -1) share a periodic orbit of a finite-order map."""
    period = is_finite_order(params, p_max, tol=tol)
    if period is None:
        raise PreconditionError("map is not of finite order (within p_max)")
    up = iterate(params, (0.0, 1.0), period).points
    hit = np.hypot(up[:, 0], up[:, 1] + 1.0) <= tol
    if hit.any():
        return PeriodicTypeTag(PeriodicTypeTag.ONE_ORBIT, period, period)
    down = iterate(params, (0.0, -1.0), period).points
    ret = np.nonzero(np.hypot(down[1:, 0], down[1:, 1] + 1.0) <= tol)[0]
    period_down = int(ret[0]) + 1 if len(ret) else period
    return PeriodicTypeTag(PeriodicTypeTag.TWO_ORBITS, period, period_down)


def symbolic_word(orbit: OrbitSample) -> SignWord:
    """Sign itinerary of the x-coordinates along the segment, one symbol per step."""
    return SignWord(orbit.signs)
