"""Bounded orbits and the invariant circles they trace out.

A bounded orbit with irrational rotation number fills out an invariant
circle, so sorting its points by polar angle gives the circle as a radial
profile r(phi). Such circles are symmetric under (x, y) -> (y, x), i.e.
r(phi) = r(pi/2 - phi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels as K
from .errors import DomainError, PreconditionError, SparseCoverageError
from .plane_map import MapParams, iterate, power_many

TWO_PI = 2.0 * math.pi
MAX_GAP = TWO_PI / 100


@dataclass(frozen=True)
class Bounded:
    min_modulus: float
    max_modulus: float
    steps: int
    tag = "bounded"


@dataclass(frozen=True)
class Diverged:
    at_step: int
    tag = "diverged"


@dataclass(frozen=True)
class Contracted:
    at_step: int
    tag = "contracted"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    tag = "inconclusive"


BoundednessReport = Union[Bounded, Diverged, Contracted, Inconclusive]


def boundedness_probe(params: MapParams, v, N: int, C: float) -> BoundednessReport:
    """Follow v forward N steps while |v|/C <= |T^k v| <= C|v|."""
    x, y = float(v[0]), float(v[1])
    r = math.hypot(x, y)
    if not (math.isfinite(r) and r > 0.0):
        raise DomainError("v must be finite and nonzero")
    if not C > 1.0 or N < 1:
        raise DomainError("need C > 1 and N >= 1")
    status, k, mn, mx = K.modulus_probe(params.a, params.b, x, y, int(N), C * r, r / C)
    if status == 1:
        return Diverged(int(k))
    if status == 2:
        return Contracted(int(k))
    if status == 3:
        return Inconclusive(f"non-finite modulus at step {k}")
    return Bounded(float(mn), float(mx), int(N))


@dataclass
class InvariantCircleProfile:
    """Radial profile r(phi) sampled at strictly increasing angles in [0, 2pi)."""

    angles: np.ndarray
    radii: np.ndarray
    symmetry_defect: float = 0.0
    closure_defect: float = 0.0

    @property
    def samples(self) -> np.ndarray:
        return np.column_stack([self.angles, self.radii])

    def radius_at(self, phi) -> np.ndarray:
        """Piecewise-linear periodic interpolation of the profile."""
        return np.interp(np.mod(phi, TWO_PI), self.angles, self.radii, period=TWO_PI)

    def points(self) -> np.ndarray:
        return np.column_stack([self.radii * np.cos(self.angles),
                                self.radii * np.sin(self.angles)])


def _max_gap(angles):
    if len(angles) == 0:
        return TWO_PI
    gaps = np.diff(angles)
    wrap = angles[0] + TWO_PI - angles[-1]
    return float(max(gaps.max(initial=0.0), wrap))


def profile_from_points(pts) -> InvariantCircleProfile:
    """Sort points by angle into a profile; repeated angles keep the first radius."""
    pts = np.asarray(pts, dtype=float)
    ang = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), TWO_PI)
    rad = np.hypot(pts[:, 0], pts[:, 1])
    order = np.argsort(ang, kind="stable")
    ang, rad = ang[order], rad[order]
    keep = np.concatenate([[True], np.diff(ang) > 0.0])
    prof = InvariantCircleProfile(ang[keep], rad[keep])
    prof.closure_defect = _max_gap(prof.angles)
    return prof


def symmetry_defect(profile: InvariantCircleProfile) -> float:
    """max_i |r(phi_i) - r(pi/2 - phi_i)| with r interpolated on the profile."""
    mirrored = profile.radius_at(0.5 * math.pi - profile.angles)
    return float(np.max(np.abs(profile.radii - mirrored)))


def build_circle(params: MapParams, v, N: int, max_gap: float = MAX_GAP,
                 C: float = 1e6) -> InvariantCircleProfile:
    """Profile of the orbit of v (N steps) as a candidate invariant circle.

    The orbit must stay within a factor C of |v| and leave no angular gap
    wider than ``max_gap``; a periodic orbit, for example, is rejected with
    SparseCoverageError.
    """
    rep = boundedness_probe(params, v, N, C)
    if not isinstance(rep, Bounded):
        raise PreconditionError(f"orbit is not bounded: {rep}")
    orb = iterate(params, v, N)
    prof = profile_from_points(orb.points)
    if prof.closure_defect > max_gap:
        raise SparseCoverageError(
            f"largest angular gap {prof.closure_defect:.3g} exceeds {max_gap:.3g}"
            f" ({len(prof.angles)} distinct angles)")
    prof.symmetry_defect = symmetry_defect(prof)
    return prof


def invariance_defect(params: MapParams, profile: InvariantCircleProfile) -> float:
    """Largest relative radial mismatch between T(profile) and the profile."""
    img = power_many(params, profile.points(), 1)
    ang = np.arctan2(img[:, 1], img[:, 0])
    rad = np.hypot(img[:, 0], img[:, 1])
    return float(np.max(np.abs(rad - profile.radius_at(ang)) / rad))


def quadratic_form(theta: float, v) -> float:
    """Q(x, y) = x^2 + y^2 - 2cos(theta) xy, invariant under a = b = 2cos(theta)."""
    x, y = float(v[0]), float(v[1])
    return x * x + y * y - 2.0 * math.cos(theta) * x * y


def linear_ellipse_oracle(theta: float, v, angles=None,
                          n_samples: int = 4096) -> InvariantCircleProfile:
    """The exact invariant ellipse Q = Q(v) of the linear map a = b = 2cos(theta).

    Sampled at ``angles`` when given, otherwise at ``n_samples`` equally
    spaced angles.
    """
    if not 0.0 < theta < math.pi:
        raise DomainError(f"theta = {theta} outside (0, pi): |a| >= 2 has no invariant ellipse")
    level = quadratic_form(theta, v)
    if not level > 0.0:
        raise DomainError("v must be nonzero")
    if angles is None:
        angles = np.linspace(0.0, TWO_PI, n_samples, endpoint=False)
    angles = np.asarray(angles, dtype=float)
    radii = np.sqrt(level / (1.0 - math.cos(theta) * np.sin(2.0 * angles)))
    prof = InvariantCircleProfile(angles, radii, closure_defect=_max_gap(angles))
    prof.symmetry_defect = symmetry_defect(prof)
    return prof

