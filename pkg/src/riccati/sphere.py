"""The compactified vector field on the Poincaré sphere.

A finite point ``(x, y)`` sits on the sphere at ``(x, y, 1) / sqrt(1 + x^2 + y^2)``.
With ``P~ = Z^2 P(X/Z, Y/Z)``, ``Q~ = Z^2 Q(X/Z, Y/Z)`` and ``W = X P~ + Y Q~``
the compactified field is

    F = (P~ - X W, Q~ - Y W, -Z W),

a polynomial field on R^3 tangent to the unit sphere, with the equator
``Z = 0`` invariant and ``F(-p) = F(p)`` (antipodal points carry reversed
time).  Orthogonal projection of the upper hemisphere onto the plane
``Z = 0`` is the Poincaré disk, so disk coordinates are just ``(X, Y)``.
"""
from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

# monomials x^i y^j of a degree-2 field, in the order of the coefficient vector;
# on the sphere each becomes X^i Y^j Z^(2-i-j)
MONOMIALS = ((2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0))


def coefficients(P: dict, Q: dict) -> np.ndarray:
    """Pack ``P`` and ``Q`` ({(i, j): coeff}) into the 12-vector used by the kernels."""
    out = np.zeros(12)
    for k, m in enumerate(MONOMIALS):
        out[k] = P.get(m, 0.0)
        out[6 + k] = Q.get(m, 0.0)
    return out


@njit(cache=True)
def field(c, X, Y, Z):
    XX = X * X
    XY = X * Y
    YY = Y * Y
    XZ = X * Z
    YZ = Y * Z
    ZZ = Z * Z
    Pt = c[0] * XX + c[1] * XY + c[2] * YY + c[3] * XZ + c[4] * YZ + c[5] * ZZ
    Qt = c[6] * XX + c[7] * XY + c[8] * YY + c[9] * XZ + c[10] * YZ + c[11] * ZZ
    W = X * Pt + Y * Qt
    return Pt - X * W, Qt - Y * W, -Z * W


def field_vec(c: np.ndarray, p) -> np.ndarray:
    return np.array(field(c, float(p[0]), float(p[1]), float(p[2])))


def jacobian(c: np.ndarray, p) -> np.ndarray:
    """3x3 derivative of the sphere field at ``p``."""
    X, Y, Z = (float(v) for v in p)
    mono = np.array([X * X, X * Y, Y * Y, X * Z, Y * Z, Z * Z])
    dmono = np.array([
        [2 * X, 0, 0], [Y, X, 0], [0, 2 * Y, 0],
        [Z, 0, X], [0, Z, Y], [0, 0, 2 * Z],
    ], dtype=float)
    Pt, Qt = c[:6] @ mono, c[6:] @ mono
    dP, dQ = c[:6] @ dmono, c[6:] @ dmono
    W = X * Pt + Y * Qt
    dW = np.array([Pt, Qt, 0.0]) + X * dP + Y * dQ
    J = np.empty((3, 3))
    J[0] = dP - X * dW - np.array([W, 0.0, 0.0])
    J[1] = dQ - Y * dW - np.array([0.0, W, 0.0])
    J[2] = -Z * dW - np.array([0.0, 0.0, W])
    return J


def from_affine(x: float, y: float) -> np.ndarray:
    n = math.sqrt(1.0 + x * x + y * y)
    return np.array([x / n, y / n, 1.0 / n])


def to_affine(p) -> tuple[float, float]:
    X, Y, Z = p
    if Z <= 0.0:
        raise ValueError("point at or beyond infinity has no affine image")
    return (X / Z, Y / Z)


def from_direction(dx: float, dy: float) -> np.ndarray:
    """Point on the equator in the direction ``(dx, dy)``."""
    n = math.hypot(dx, dy)
    return np.array([dx / n, dy / n, 0.0])


def tangent_frame(E) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal tangent basis (e1, e2) at ``E`` with e1 x e2 = E.

    On the equator e1 runs counter-clockwise along it and e2 points north.
    """
    E = np.asarray(E, dtype=float)
    if abs(E[2]) < 1e-12:
        e1 = np.array([-E[1], E[0], 0.0])
        e1 /= np.linalg.norm(e1)
        return e1, np.array([0.0, 0.0, 1.0])
    e1 = np.array([1.0, 0.0, 0.0]) - E[0] * E
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(E, e1)
    return e1, e2


def offset(E, e1, e2, radius: float, theta: float) -> np.ndarray:
    """Point at geodesic distance ``radius`` from ``E`` in tangent direction ``theta``."""
    w = math.cos(theta) * e1 + math.sin(theta) * e2
    return math.cos(radius) * np.asarray(E) + math.sin(radius) * w


def disk_angle(p) -> float:
    """Polar angle of a point's disk projection, in [0, 2 pi)."""
    return math.atan2(p[1], p[0]) % (2 * math.pi)
