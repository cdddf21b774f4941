"""Poincaré compactification: chart fields, chart maps and infinite equilibria.

Chart fields are generated from ``P`` and ``Q`` by the standard formulas

    U1:  u' = v^2 (-u P + Q),  v' = -v^3 P    at (x, y) = (1/v, u/v)
    U2:  u' = v^2 (P - u Q),   v' = -v^3 Q    at (x, y) = (u/v, 1/v)

and the ``V`` charts carry the same expressions multiplied by -1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import sphere
from .algebra import Poly1, SignPolicy, TOLERANT, discriminants, roots_quadratic
from .equilibria import (Equilibrium, LocalType, directions_on_sphere,
                         homogeneous_directions, local_type)
from .errors import InconsistentLocalType, OutOfDomain
from .normalform import NormalForm

CHARTS = ("U1", "U2", "V1", "V2")


class BiPoly:
    """Bivariate polynomial ``sum c[i, j] u^i v^j``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], float] | None = None):
        self.terms = {k: float(v) for k, v in (terms or {}).items() if v != 0.0}

    def __call__(self, u: float, v: float) -> float:
        return sum(c * u ** i * v ** j for (i, j), c in self.terms.items())

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0.0) + c
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -c for k, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"BiPoly({dict(sorted(self.terms.items()))})"

    def scaled(self, s: float) -> "BiPoly":
        return BiPoly({k: s * c for k, c in self.terms.items()})

    def diff(self, var: int) -> "BiPoly":
        out = {}
        for (i, j), c in self.terms.items():
            if var == 0 and i:
                out[(i - 1, j)] = out.get((i - 1, j), 0.0) + i * c
            elif var == 1 and j:
                out[(i, j - 1)] = out.get((i, j - 1), 0.0) + j * c
        return BiPoly(out)

    def restrict_v0(self) -> Poly1:
        """The univariate polynomial ``u -> self(u, 0)``."""
        deg = max((i for (i, j) in self.terms if j == 0), default=0)
        return Poly1([self.terms.get((i, 0), 0.0) for i in range(deg + 1)])

    @property
    def degree(self) -> int:
        return max((i + j for (i, j) in self.terms), default=-1)


@dataclass(frozen=True)
class ChartField:
    chart: str
    u_dot: BiPoly
    v_dot: BiPoly

    def __call__(self, u: float, v: float) -> tuple[float, float]:
        return (self.u_dot(u, v), self.v_dot(u, v))

    def jacobian(self, u: float, v: float) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.u_dot.diff(0)(u, v), self.u_dot.diff(1)(u, v)),
                (self.v_dot.diff(0)(u, v), self.v_dot.diff(1)(u, v)))


def _pushforward(P: Mapping, Q: Mapping, first: bool) -> tuple[BiPoly, BiPoly]:
    u_dot: dict[tuple[int, int], float] = {}
    v_dot: dict[tuple[int, int], float] = {}

    def add(dst, key, c):
        dst[key] = dst.get(key, 0.0) + c

    # x^i y^j at (1/v, u/v) is u^j v^-(i+j); at (u/v, 1/v) it is u^i v^-(i+j)
    for (i, j), c in P.items():
        upow = j if first else i
        vpow = 2 - i - j
        if first:
            add(u_dot, (upow + 1, vpow), -c)
        else:
            add(u_dot, (upow, vpow), c)
        if first:
            add(v_dot, (upow, vpow + 1), -c)
    for (i, j), c in Q.items():
        upow = j if first else i
        vpow = 2 - i - j
        if first:
            add(u_dot, (upow, vpow), c)
        else:
            add(u_dot, (upow + 1, vpow), -c)
            add(v_dot, (upow, vpow + 1), -c)
    return BiPoly(u_dot), BiPoly(v_dot)


def chart_field(nf: NormalForm, chart: str) -> ChartField:
    if chart not in CHARTS:
        raise ValueError(f"unknown chart {chart!r}")
    u_dot, v_dot = _pushforward(nf.P, nf.Q, chart.endswith("1"))
    if chart.startswith("V"):
        u_dot, v_dot = -u_dot, -v_dot
    return ChartField(chart, u_dot, v_dot)


def sphere_coefficients(nf: NormalForm) -> np.ndarray:
    return sphere.coefficients(nf.P, nf.Q)


@dataclass(frozen=True)
class DiskPoint:
    """A point of the Poincaré disk in affine or chart coordinates.

    ``chart`` is ``"affine"`` or one of U1, U2, V1, V2.  The point ``(u, v)``
    of a V chart is the antipode of the point ``(u, v)`` of the matching U
    chart, which is what makes the V field the U field times -1.  Points of
    the disk have ``v >= 0`` in U charts and ``v <= 0`` in V charts, and
    ``v = 0`` is the circle at infinity.
    """

    chart: str
    coords: tuple[float, float]

    @classmethod
    def affine(cls, x: float, y: float) -> "DiskPoint":
        return cls("affine", (float(x), float(y)))

    @property
    def at_infinity(self) -> bool:
        return self.chart != "affine" and self.coords[1] == 0.0

    def sphere(self) -> np.ndarray:
        a, b = self.coords
        if self.chart == "affine":
            return sphere.from_affine(a, b)
        u, v = a, b
        vec = {"U1": (1.0, u, v), "U2": (u, 1.0, v)}[self.chart.replace("V", "U")]
        arr = np.array(vec) / math.sqrt(1.0 + u * u + v * v)
        return -arr if self.chart[0] == "V" else arr

    def disk(self) -> tuple[float, float]:
        p = self.sphere()
        return (float(p[0]), float(p[1]))

    @classmethod
    def from_sphere(cls, p, chart: str) -> "DiskPoint":
        X, Y, Z = (float(t) for t in p)
        if chart == "affine":
            if Z <= 0.0:
                raise OutOfDomain("point at infinity has no affine image")
            return cls.affine(X / Z, Y / Z)
        k = {"U1": X, "V1": -X, "U2": Y, "V2": -Y}[chart]
        if k <= 0.0:
            raise OutOfDomain(f"point outside chart {chart}")
        if chart.endswith("1"):
            return cls(chart, (Y / X, Z / X))
        return cls(chart, (X / Y, Z / Y))


def chart_transition(p: DiskPoint, target: str) -> tuple[DiskPoint, float]:
    """Express ``p`` in ``target`` coordinates.

    Returns the new point and the factor ``dt_source / dt_target`` between
    the time variables of the two chart fields at that point.  Chart fields
    are the affine field times ``|v|`` (the ``v^(d-1)`` normalisation with
    ``d = 2``), so the factor is positive and trajectories glue after this
    change of time.  It is zero or infinite on the circle at infinity.
    """
    s = p.sphere()
    q = DiskPoint.from_sphere(s, target)

    def speed(ch):
        if ch == "affine":
            return 1.0
        k = abs(s[0]) if ch.endswith("1") else abs(s[1])
        return abs(s[2]) / k

    src = speed(p.chart)
    return q, (speed(target) / src) if src > 0 else math.inf


def equator_polynomial(nf: NormalForm) -> Poly1:
    """``p(u) = u'(u, 0)`` in U1: its roots are the equator equilibria off the y axis."""
    return chart_field(nf, "U1").u_dot.restrict_v0()


def _equator_discriminant(nf: NormalForm, policy: SignPolicy):
    dis = discriminants(nf.params)
    exact = policy.mode == "strict" and dis.exact is not None
    if nf.family in ("III", "IV"):
        return dis.exact[3] if exact else dis.dI2
    return dis.exact[2] if exact else dis.dI1


def infinite_equilibria(nf: NormalForm, policy: SignPolicy = TOLERANT, *, radius: float = 1e-3,
                        samples: int = 720) -> list[Equilibrium]:
    """n, s and the roots of ``p(u)`` in U1 with their antipodes in V1.

    The larger root is ``u1`` and the smaller ``u2``; ``v1``, ``v2`` are the
    diametrically opposite points, and a double root gives ``u12``/``v12``.
    """
    coef = sphere_coefficients(nf)
    out = []
    u1f, u2f = chart_field(nf, "U1"), chart_field(nf, "U2")

    def make(label, chart, loc, jac, point, dirs=None):
        ep, lt, h, full, half = local_type(coef, point, jac, infinite=True, radius=radius,
                                           samples=samples, directions=dirs)
        return Equilibrium(loc, chart, ep, lt, label, tuple(float(t) for t in point), h,
                           label.endswith("12"), full, half)

    out.append(make("n", "U2", (0.0, 0.0), u2f.jacobian(0.0, 0.0), np.array([0.0, 1.0, 0.0])))
    neg = tuple(tuple(-t for t in row) for row in u2f.jacobian(0.0, 0.0))
    out.append(make("s", "V2", (0.0, 0.0), neg, np.array([0.0, -1.0, 0.0])))
    p = equator_polynomial(nf)
    s = policy.sign(_equator_discriminant(nf, policy))
    if s < 0:
        return out
    if s == 0:
        roots = [("12", -p.coeff(1) / (2.0 * p.coeff(2)))]
    else:
        lo, hi = roots_quadratic(p, SignPolicy(0.0, "strict")).roots
        roots = [("1", hi), ("2", lo)]
    for idx, u0 in roots:
        jac = u1f.jacobian(u0, 0.0)
        if idx == "12":
            jac = ((0.0, jac[0][1]), jac[1])
        pt = np.array([1.0, u0, 0.0]) / math.hypot(1.0, u0)
        du, dv = None, None
        if all(abs(t) <= 1e-12 for row in jac for t in row):
            phis = homogeneous_directions(*_quadratic_part(u1f, u0))
            if phis is not None:
                du = directions_on_sphere(phis, lambda s, t: DiskPoint("U1", (u0 + s, t)).sphere(), pt)
                dv = directions_on_sphere(phis, lambda s, t: DiskPoint("V1", (u0 + s, t)).sphere(), -pt)
        out.append(make("u" + idx, "U1", (u0, 0.0), jac, pt, du))
        negj = tuple(tuple(-t for t in row) for row in jac)
        out.append(make("v" + idx, "V1", (u0, 0.0), negj, -pt, dv))
    return out


def _quadratic_part(cf: ChartField, u0: float) -> tuple[dict, dict]:
    """Degree-two Taylor coefficients of a chart field at ``(u0, 0)``."""
    out = []
    for f in (cf.u_dot, cf.v_dot):
        out.append({
            (2, 0): 0.5 * f.diff(0).diff(0)(u0, 0.0),
            (1, 1): f.diff(0).diff(1)(u0, 0.0),
            (0, 2): 0.5 * f.diff(1).diff(1)(u0, 0.0),
        })
    return out[0], out[1]


def classify_infinite(nf: NormalForm, eq: Equilibrium, policy: SignPolicy = TOLERANT) -> LocalType:
    """Local type of an infinite equilibrium, checked against the family's expected types."""
    lt = eq.local_type
    fam = nf.family
    if eq.label in ("n", "s"):
        want = LocalType.STABLE_NODE if eq.label == "n" else LocalType.UNSTABLE_NODE
        if lt is not want:
            raise InconsistentLocalType(f"{eq.label} classified as {lt.value}")
        return lt
    if eq.merged:
        if not lt.is_saddle_node:
            raise InconsistentLocalType(f"{eq.label}: double root classified as {lt.value}")
        return lt
    if fam == "III":
        expected = {LocalType.SEMI_HYPERBOLIC_SADDLE_NODE}
    elif eq.label in ("u1", "v1"):
        expected = {LocalType.SADDLE}
    elif eq.label == "u2":
        expected = {LocalType.STABLE_NODE}
    else:
        expected = {LocalType.UNSTABLE_NODE}
    if lt not in expected:
        raise InconsistentLocalType(f"{eq.label} classified as {lt.value}, expected {sorted(t.value for t in expected)}")
    return lt


def all_equilibria(nf: NormalForm, policy: SignPolicy = TOLERANT, **kw) -> list[Equilibrium]:
    from .equilibria import finite_equilibria
    return finite_equilibria(nf, policy, **kw) + infinite_equilibria(nf, policy, **kw)
