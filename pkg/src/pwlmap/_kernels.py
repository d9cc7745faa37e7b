"""Compiled inner loops.

Everything here works on raw floats and arrays so it can be jitted; the
public modules wrap these with validation and result types.
"""
import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi


@njit(cache=True)
def step(a, b, x, y):
    s = a if x >= 0.0 else b
    return s * x - y, x


@njit(cache=True)
def step_inv(a, b, x, y):
    s = a if y >= 0.0 else b
    return y, s * y - x


@njit(cache=True)
def increment(a, b, x, y):
    """Lift increment at (x, y) and the image point.

    The right closed half-plane maps into the upper closed half-plane and the
    left open half-plane into the lower open one; that pins the image angle's
    representative and makes the increment continuous in the angle.
    """
    X, Y = step(a, b, x, y)
    if x >= 0.0:
        src = math.atan2(y, x)
        # Y + 0.0 turns a -0.0 (from x == -0.0) into +0.0 so atan2 stays in [0, pi]
        img = math.atan2(Y + 0.0, X)
    else:
        src = math.atan2(y, x)
        if src < 0.0:
            src += TWO_PI
        img = math.atan2(Y, X) + TWO_PI
    return img - src, X, Y


@njit(cache=True)
def lift_displacement(a, b, x, y, n):
    """Sum of n lift increments starting from direction (x, y).

    Returns (displacement, x_final, y_final) with the final point on the
    unit circle.
    """
    r = math.hypot(x, y)
    x /= r
    y /= r
    total = 0.0
    for _ in range(n):
        d, X, Y = increment(a, b, x, y)
        total += d
        r = math.hypot(X, Y)
        x = X / r
        y = Y / r
    return total, x, y


@njit(cache=True)
def lift_displacement_grid(a, b, thetas, n):
    out = np.empty(thetas.shape[0])
    for i in range(thetas.shape[0]):
        out[i] = lift_displacement(a, b, math.cos(thetas[i]), math.sin(thetas[i]), n)[0]
    return out


@njit(cache=True)
def orbit(a, b, x, y, n, forward, limit):
    """Orbit segment of n steps (forward or backward).

    Returns (points, deltas, done). ``deltas[k]`` is the lift increment of
    the forward map between points[k] and points[k+1] (taken with the sign
    of the direction of travel). ``done < n`` means the modulus passed
    ``limit`` (or stopped being finite) at step ``done``.
    """
    pts = np.empty((n + 1, 2))
    deltas = np.empty(n)
    pts[0, 0] = x
    pts[0, 1] = y
    done = n
    for k in range(n):
        if forward:
            d, X, Y = increment(a, b, x, y)
        else:
            X, Y = step_inv(a, b, x, y)
            d, _, _ = increment(a, b, X, Y)
            d = -d
        m = math.hypot(X, Y)
        if not (m <= limit):
            done = k
            break
        pts[k + 1, 0] = X
        pts[k + 1, 1] = Y
        deltas[k] = d
        x = X
        y = Y
    return pts[: done + 1], deltas[:done], done


@njit(cache=True)
def product_along(a, b, x, y, n):
    """Cocycle product along the forward orbit of (x, y).

    Returns (M, done) where M is row-major 2x2 and ``done < n`` flags an
    overflow at that step (M is then the partial product). On the y-axis
    the factor is the one of the neighbouring sector counterclockwise of
    the ray, so M is the matrix of T^n on the sector starting at (x, y).
    """
    m11, m12, m21, m22 = 1.0, 0.0, 0.0, 1.0
    done = n
    for k in range(n):
        if x > 0.0:
            s = a
        elif x < 0.0:
            s = b
        else:
            # the slope does not move the point here; take the factor of the
            # sector just counterclockwise of the ray so M is a sector matrix
            s = b if y > 0.0 else a
        # left-multiply by [[s, -1], [1, 0]]
        n11 = s * m11 - m21
        n12 = s * m12 - m22
        m21, m22 = m11, m12
        m11, m12 = n11, n12
        X, Y = s * x - y, x
        if not (math.hypot(X, Y) <= 1e300):
            done = k + 1
            break
        x, y = X, Y
    M = np.empty((2, 2))
    M[0, 0] = m11
    M[0, 1] = m12
    M[1, 0] = m21
    M[1, 1] = m22
    return M, done


@njit(cache=True)
def sector_word_matrix(a, b, x, y, n):
    """Matrix of T^n on the sector containing the direction (x, y).

    Unlike ``product_along`` the direction is renormalised each step; only
    the sign pattern matters for the matrix.
    """
    m11, m12, m21, m22 = 1.0, 0.0, 0.0, 1.0
    r = math.hypot(x, y)
    x /= r
    y /= r
    for _ in range(n):
        s = a if x >= 0.0 else b
        n11 = s * m11 - m21
        n12 = s * m12 - m22
        m21, m22 = m11, m12
        m11, m12 = n11, n12
        X, Y = s * x - y, x
        r = math.hypot(X, Y)
        x = X / r
        y = Y / r
    M = np.empty((2, 2))
    M[0, 0] = m11
    M[0, 1] = m12
    M[1, 0] = m21
    M[1, 1] = m22
    return M


@njit(cache=True)
def preimage_angles(a, b, x, y, n):
    """Angles in [0, 2pi) of the directions T^{-j}(x, y), j = 0..n-1."""
    out = np.empty(n)
    for j in range(n):
        t = math.atan2(y, x)
        if t < 0.0:
            t += TWO_PI
        out[j] = t
        x, y = step_inv(a, b, x, y)
        r = math.hypot(x, y)
        x /= r
        y /= r
    return out


@njit(cache=True)
def power_many(a, b, pts, n):
    """Apply T n times to every row of pts."""
    out = np.empty_like(pts)
    for i in range(pts.shape[0]):
        x = pts[i, 0]
        y = pts[i, 1]
        for _ in range(n):
            x, y = step(a, b, x, y)
        out[i, 0] = x
        out[i, 1] = y
    return out


@njit(cache=True)
def modulus_probe(a, b, x, y, n, hi, lo):
    """Track the modulus for n forward steps.

    Returns (status, step, min_modulus, max_modulus) with status 0 = stayed
    within [lo, hi], 1 = exceeded hi, 2 = fell below lo, 3 = non-finite.
    """
    m = math.hypot(x, y)
    mn = m
    mx = m
    for k in range(1, n + 1):
        x, y = step(a, b, x, y)
        m = math.hypot(x, y)
        if not math.isfinite(m):
            return 3, k, mn, mx
        if m < mn:
            mn = m
        if m > mx:
            mx = m
        if m > hi:
            return 1, k, mn, mx
        if m < lo:
            return 2, k, mn, mx
    return 0, n, mn, mx


@njit(cache=True)
def modulus_track(a, b, x, y, n, forward):
    """Moduli |T^{+-k}(x, y)| for k = 0..n (stops early on overflow)."""
    out = np.empty(n + 1)
    out[0] = math.hypot(x, y)
    for k in range(1, n + 1):
        if forward:
            x, y = step(a, b, x, y)
        else:
            x, y = step_inv(a, b, x, y)
        m = math.hypot(x, y)
        if not (m <= 1e300):
            return out[:k]
        out[k] = m
    return out
