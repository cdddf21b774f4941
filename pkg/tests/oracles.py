"""Independent reference computations used by the module and acceptance tests.

None of these import the package internals they check: the Newton solver
works on the raw polynomial field, the chart fields are obtained by
numerically pushing the affine field forward, and the eigenvalue and
infinite-point formulas are written out from the closed forms.
"""
import math

import numpy as np

X_DOT = {
    "I": (lambda x: x * (x + 1), lambda x: 2 * x + 1),
    "II": (lambda x: x * x, lambda x: 2 * x),
    "III": (lambda x: x, lambda x: np.ones_like(x)),
    "IV": (lambda x: np.ones_like(x), lambda x: np.zeros_like(x)),
    "V": (lambda x: x * x + 1, lambda x: 2 * x),
}


def affine_field(family, params, x, y):
    a, b, c, d, e = params
    return X_DOT[family][0](x), y * y + (a * x + b) * y + c * x * x + d * x + e


def newton_roots(family, params, lo=-5.0, hi=5.0, n=50, iters=200, tol=1e-12):
    """Distinct zeros of the affine field found from an ``n`` x ``n`` grid of seeds."""
    a, b, c, d, e = params
    P, dP = X_DOT[family]
    g = np.linspace(lo, hi, n)
    x, y = (v.ravel().astype(float) for v in np.meshgrid(g, g))
    with np.errstate(all="ignore"):
        for _ in range(iters):
            px, dpx = P(x), dP(x)
            dx = np.where(dpx != 0, -px / np.where(dpx != 0, dpx, 1), 0.0)
            q = y * y + (a * x + b) * y + c * x * x + d * x + e
            qx = a * y + 2 * c * x + d
            qy = 2 * y + a * x + b
            dy = np.where(qy != 0, -(q + qx * dx) / np.where(qy != 0, qy, 1), 0.0)
            x, y = x + dx, y + dy
        fx, fy = affine_field(family, params, x, y)
        ok = np.isfinite(x) & np.isfinite(y) & (np.abs(fx) < tol) & (np.abs(fy) < tol)
    roots = []
    for px, py in zip(x[ok], y[ok]):
        if all(math.hypot(px - rx, py - ry) > 1e-5 for rx, ry in roots):
            roots.append((float(px), float(py)))
    return roots


def finite_closed_form(family, params):
    """``(x, y, eigenvalues)`` for each simple finite equilibrium, upper point first."""
    a, b, c, d, e = params
    out = []
    lines = []
    if family in ("I", "II", "III"):
        lines.append((0.0, b, b * b - 4 * e, {"I": 1.0, "II": 0.0, "III": 1.0}[family]))
    if family == "I":
        lines.append((-1.0, b - a, (b - a) ** 2 - 4 * (c - d + e), -1.0))
    for x0, B, D, lam in lines:
        if D <= 0:
            continue
        r = math.sqrt(D)
        # upper root has d(y')/dy = +sqrt(D), lower -sqrt(D)
        out.append((x0, (-B + r) / 2, (lam, r)))
        out.append((x0, (-B - r) / 2, (lam, -r)))
    return out


def chart_pushforward(family, params, chart, u, v):
    """Chart field at ``(u, v)`` obtained by pushing the affine field forward.

    U and V charts share the coordinate functions (``(y/x, 1/x)`` or
    ``(x/y, 1/y)``), V charts covering the half plane where ``v < 0``.  The
    derivative of the chart map along the field is taken by a complex step,
    and the result is scaled by ``|v|`` (degree 2 normalisation, which keeps
    the time direction in both halves).
    """
    if chart.endswith("1"):
        x, y = 1 / v, u / v
        to_chart = lambda x, y: (y / x, 1 / x)
    else:
        x, y = u / v, 1 / v
        to_chart = lambda x, y: (x / y, 1 / y)
    fx, fy = affine_field(family, params, x, y)
    h = 1e-30
    du, dv = (w.imag / h for w in to_chart(complex(x, h * fx), complex(y, h * fy)))
    return du * abs(v), dv * abs(v)


def infinite_expectation(family, params):
    """Equator discriminant and the first eigenvalue at the U1 roots.

    The roots ``u`` of the equator polynomial carry eigenvalues
    ``(lam, +-sqrt(D))``: ``lam = -1`` for x' of degree 2, ``0`` otherwise.
    """
    a, b, c, d, e = params
    if family in ("III", "IV"):
        return a * a - 4 * c, 0.0
    return (a - 1) ** 2 - 4 * c, -1.0


def transcribed_chart(family, chart, params, u, v):
    """Closed-form U1/U2 chart systems as transcribed from the literature
    (``q`` and ``p`` as written there).  Kept verbatim, typos included, so
    that disagreements can be reported."""
    a, b, c, d, e = params
    q = -u * (1 + (a - 1) * u + c * u * u)
    v_u2 = -v * (1 + a * u + c * u * u) - v * v * (b + d * u) - e * v ** 3
    if chart == "U1":
        if family == "I":
            return v * ((b - 1) * u + d) + e * v * v + u * u + (a - 1) * u + c, -(v + v * v)
        if family == "II":
            return v * ((d + b * u) + e * v) + u * u + (a - 1) * u + c, -v
        if family == "III":
            return v * (u * (b - 1) + d + e * v) + u * u + a * u + c, -v * v
        if family == "IV":
            return v * (d + b * u + (e - u) * v) + u * u + a * u + c, -v ** 3
        return v * ((d + b * u) + v * (e - u)) + u * u + (a - 1) * u + c, -(v + v ** 3)
    if family == "I":
        return v * (v * u * e - u * (d * u + b - 1)) + q, v_u2
    if family == "II":
        return (-v * (u * (d + b * u) + v * u * e) + q,
                -v * (c + d * u + c * u * u) - v * v * (b + d * u) - e * v ** 3)
    if family == "III":
        return v * (-v * (e * u) - u * (-1 + b + d * u)) + q, v_u2
    return v * (v * (1 - e * u) - u * (b + d * u)) + q, v_u2
