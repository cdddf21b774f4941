"""Finite equilibria, their local types, and a numerical sector analysis."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import sphere
from .algebra import (Eigenpair, Poly1, SignPolicy, TOLERANT, discriminants,
                      eig2, roots_quadratic)
from .errors import InconsistentLocalType
from .normalform import NormalForm


class LocalType(str, Enum):
    SADDLE = "Saddle"
    STABLE_NODE = "StableNode"
    UNSTABLE_NODE = "UnstableNode"
    SEMI_HYPERBOLIC_SADDLE_NODE = "SemiHyperbolicSaddleNode"
    NILPOTENT_SADDLE_NODE = "NilpotentSaddleNode"
    DEGENERATE_SADDLE_NODE = "DegenerateSaddleNode"

    @property
    def is_node(self) -> bool:
        return self in (LocalType.STABLE_NODE, LocalType.UNSTABLE_NODE)

    @property
    def is_saddle_node(self) -> bool:
        return self.value.endswith("SaddleNode")


@dataclass(frozen=True)
class SectorReport:
    """Characteristic directions and sectors on a small circle around a point.

    ``directions`` holds ``(theta, radial_sign)`` in increasing ``theta``;
    ``sectors[i]`` is the sector between ``directions[i]`` and the next one,
    encoded as ``h`` (hyperbolic), ``e`` (elliptic), ``a`` / ``r``
    (parabolic, attracting / repelling).
    """

    directions: tuple[tuple[float, int], ...]
    sectors: tuple[str, ...]
    cyclic: bool = True

    @property
    def word(self) -> str:
        return "".join(self.sectors)

    @property
    def n_hyperbolic(self) -> int:
        return self.sectors.count("h")

    def separatrices(self) -> list[tuple[float, int]]:
        """Directions bounding at least one hyperbolic sector."""
        out = []
        n = len(self.directions)
        for i, (theta, sgn) in enumerate(self.directions):
            before = self.sectors[i - 1] if (self.cyclic or i > 0) else None
            after = self.sectors[i] if i < len(self.sectors) else None
            if "h" in (before, after):
                out.append((theta, sgn))
        return out

    def topological_type(self) -> str:
        """Coarse class: saddle, node+ (attracting), node-, saddle-node, or the raw word."""
        w = self.word
        if set(w) <= {"a"} and w:
            return "node+"
        if set(w) <= {"r"} and w:
            return "node-"
        if w and set(w) <= {"h"} and len(w) == 4:
            return "saddle"
        if self.n_hyperbolic == 2 and "e" not in w and len(set(w) - {"h"}) == 1:
            return "saddle-node"
        return w


def _canonical_word(word: str, cyclic: bool) -> str:
    """Smallest rotation/reflection of a sector word (reflection only if linear)."""
    if not word:
        return word
    if not cyclic:
        return min(word, word[::-1])
    cands = []
    for w in (word, word[::-1]):
        cands.extend(w[i:] + w[:i] for i in range(len(w)))
    return min(cands)


def _merge(sectors: list[str], dirs: list[tuple[float, int]], cyclic: bool):
    """Merge adjacent parabolic sectors of the same kind (their shared direction is inner)."""
    changed = True
    while changed and len(sectors) > 1:
        changed = False
        n = len(sectors)
        rng = range(n) if cyclic else range(1, n)
        for i in rng:
            j = i - 1
            if sectors[j] == sectors[i] and sectors[i] in "ar":
                del sectors[i]
                del dirs[i]
                changed = True
                break
    return sectors, dirs


def _field_many(coef: np.ndarray, P: np.ndarray) -> np.ndarray:
    X, Y, Z = P[:, 0], P[:, 1], P[:, 2]
    mono = np.stack((X * X, X * Y, Y * Y, X * Z, Y * Z, Z * Z))
    Pt = coef[:6] @ mono
    Qt = coef[6:] @ mono
    W = X * Pt + Y * Qt
    return np.stack((Pt - X * W, Qt - Y * W, -Z * W), axis=1)


def sector_analysis(coef: np.ndarray, E, *, radius: float = 1e-3, samples: int = 720,
                    half: bool = False, refine=(), width: float = 0.05,
                    dense: int = 2000, directions=None) -> SectorReport:
    """Sectors of the sphere field around the equilibrium ``E``.

    With ``half=True`` (``E`` on the equator) only the northern half circle
    ``theta in [0, pi]`` is examined; both equator directions are then
    characteristic by invariance of the equator.  ``directions`` replaces
    the search by a known list of characteristic angles.
    """
    E = np.asarray(E, dtype=float)
    e1, e2 = sphere.tangent_frame(E)
    cr, sr = math.cos(radius), math.sin(radius)

    def comps(theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        ct, st = np.cos(theta)[:, None], np.sin(theta)[:, None]
        w = ct * e1 + st * e2
        t = -st * e1 + ct * e2
        F = _field_many(coef, cr * E + sr * w)
        return np.einsum("ij,ij->i", F, w), np.einsum("ij,ij->i", F, t)

    if half:
        thetas = np.linspace(0.0, math.pi, samples + 1)[1:-1]
    else:
        thetas = np.linspace(0.0, 2 * math.pi, samples, endpoint=False) + 0.5 * math.pi / samples
    if len(refine):
        # nilpotent points hide thin sectors next to the kernel direction
        extra = [np.linspace(t - width, t + width, dense) % (2 * math.pi) for t in refine]
        thetas = np.unique(np.concatenate([thetas] + extra))
        if half:
            thetas = thetas[(thetas > 0.0) & (thetas < math.pi)]
    if directions is not None:
        roots = sorted(float(t) % (2 * math.pi) for t in directions)
        if half:
            roots = [t for t in roots if 1e-9 < t < math.pi - 1e-9]
        return _build_report(comps, roots, half)
    rad, ang = comps(thetas)
    m = len(thetas)
    idx = np.arange(m if not half else m - 1)
    nxt = (idx + 1) % m
    exact = idx[ang[idx] == 0.0]
    brk = idx[ang[idx] * ang[nxt] < 0]
    roots = [float(thetas[i]) for i in exact]
    if len(brk):
        lo = thetas[brk].copy()
        hi = thetas[nxt[brk]].copy()
        hi = np.where(hi < lo, hi + 2 * math.pi, hi)
        flo = ang[brk].copy()
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = comps(mid)[1]
            same = (fm > 0) == (flo > 0)
            lo = np.where(same, mid, lo)
            flo = np.where(same, fm, flo)
            hi = np.where(same, hi, mid)
        roots.extend(float(r) for r in (0.5 * (lo + hi)) % (2 * math.pi))
    if not roots and not half:
        # the field is radial all around (a star node) or spirals (never here)
        if np.all(rad > 0) or np.all(rad < 0):
            s = 1 if rad[0] > 0 else -1
            return SectorReport(((0.0, s),), ("r" if s > 0 else "a",), cyclic=True)
        return SectorReport((), ("f",), cyclic=True)
    return _build_report(comps, sorted(roots), half)


def _build_report(comps, roots: list[float], half: bool) -> SectorReport:
    if half:
        roots = [0.0] + roots + [math.pi]
    if not roots:
        return SectorReport((), ("f",), cyclic=True)
    rs = comps(np.array(roots))[0]
    dirs = [(th, 1 if r > 0 else (-1 if r < 0 else 0)) for th, r in zip(roots, rs)]
    sectors = []
    n = len(dirs)
    count = n if not half else n - 1
    mids = []
    for i in range(count):
        t0 = dirs[i][0]
        t1 = dirs[(i + 1) % n][0]
        if t1 <= t0:
            t1 += 2 * math.pi
        mids.append(0.5 * (t0 + t1))
    rots = comps(np.array(mids))[1] if mids else []
    for i in range(count):
        s0 = dirs[i][1]
        s1 = dirs[(i + 1) % n][1]
        src, dst = (s0, s1) if rots[i] > 0 else (s1, s0)
        if s0 == s1:
            sectors.append("a" if s0 < 0 else "r")
        elif src < 0 < dst:
            sectors.append("h")
        else:
            sectors.append("e")
    sectors, dirs = _merge(sectors, dirs, cyclic=not half)
    return SectorReport(tuple(dirs), tuple(sectors), cyclic=not half)


@dataclass(frozen=True)
class Equilibrium:
    location: tuple[float, float]
    chart: str
    eigen: Eigenpair
    local_type: LocalType
    label: str
    point: tuple[float, float, float]
    hyperbolicity: str = "hyperbolic"
    merged: bool = False
    sectors: SectorReport | None = field(default=None, compare=False)
    half_sectors: SectorReport | None = field(default=None, compare=False)

    @property
    def infinite(self) -> bool:
        return self.chart != "affine"

    @property
    def disk(self) -> tuple[float, float]:
        return (self.point[0], self.point[1])

    def signature(self) -> str:
        """Sector word of the part of the neighbourhood visible in the disk."""
        rep = self.half_sectors if self.infinite else self.sectors
        if rep is None:
            return self.local_type.value
        return _canonical_word(rep.word, rep.cyclic)


def hyperbolicity(ep: Eigenpair, tol: float = 1e-9) -> str:
    if not ep.is_real:
        return "hyperbolic" if abs(ep.lambda1.real) > tol else "center"
    zeros = sum(abs(v) <= tol for v in ep.values())
    return ("hyperbolic", "semi-hyperbolic", "nilpotent")[zeros]


def type_from_eigen(ep: Eigenpair, tol: float = 1e-9) -> LocalType | None:
    """Local type of a hyperbolic point; ``None`` when the linear part is not enough."""
    if not ep.is_real:
        return None
    l1, l2 = ep.values()
    if abs(l1) <= tol or abs(l2) <= tol:
        return None
    if l1 * l2 < 0:
        return LocalType.SADDLE
    return LocalType.STABLE_NODE if l1 < 0 else LocalType.UNSTABLE_NODE


def homogeneous_directions(P2: dict, Q2: dict, tol: float = 1e-9) -> list[float] | None:
    """Angles where the homogeneous quadratic field ``(P2, Q2)`` is radial.

    These are the real zeros of the cubic form ``cos Q2 - sin P2``; a
    double zero is a tangential characteristic direction.  ``None`` when the
    form vanishes identically.
    """
    p = lambda i, j: float(P2.get((i, j), 0.0))
    q = lambda i, j: float(Q2.get((i, j), 0.0))
    # g(m) for m = tan(phi), constant term first
    g = [q(2, 0), q(1, 1) - p(2, 0), q(0, 2) - p(1, 1), -p(0, 2)]
    scale = max(abs(v) for v in g)
    if scale == 0.0:
        return None
    g = [v / scale for v in g]
    while abs(g[-1]) <= tol:
        g.pop()
    out = []
    if len(g) < 4:
        out.append(0.5 * math.pi)
    if len(g) > 1:
        for r in np.roots(g[::-1]):
            if abs(r.imag) <= 1e-6 * (1.0 + abs(r.real)):
                out.append(math.atan(r.real))
    out = sorted(set(round(t, 9) for t in out))
    return sorted([t % (2 * math.pi) for t in out] + [(t + math.pi) % (2 * math.pi) for t in out])


def directions_on_sphere(phis, to_sphere, E, eps: float = 1e-7) -> list[float]:
    """Map chart angles to angles in the sphere tangent frame at ``E``."""
    E = np.asarray(E, dtype=float)
    e1, e2 = sphere.tangent_frame(E)
    out = []
    for phi in phis:
        d = to_sphere(eps * math.cos(phi), eps * math.sin(phi)) - E
        out.append(math.atan2(np.dot(d, e2), np.dot(d, e1)) % (2 * math.pi))
    return out


def local_type(coef: np.ndarray, point, jac, *, infinite: bool, radius: float = 1e-3,
               samples: int = 720, tol: float = 1e-9, directions=None):
    """Eigenpair, local type, hyperbolicity and sector reports at an equilibrium.

    ``jac`` is the 2x2 Jacobian in the chart the point is reported in;
    ``directions`` (sphere-frame angles) bypasses the search for
    characteristic directions.
    """
    ep = eig2(jac)
    h = hyperbolicity(ep, tol)
    lt = type_from_eigen(ep, tol)
    if lt is not None and lt.is_node:
        # one parabolic sector; improper nodes have a tangential direction
        # that a sign-change search cannot see, so do not sample
        s = -1 if lt is LocalType.STABLE_NODE else 1
        code = "a" if s < 0 else "r"
        full = SectorReport(((0.0, s),), (code,), cyclic=True)
        half = SectorReport(((0.0, s), (math.pi, s)), (code,), cyclic=False) if infinite else None
        return ep, lt, h, full, half
    refine = _kernel_directions(coef, point) if h != "hyperbolic" else ()
    kw = dict(radius=radius, samples=samples, refine=refine, directions=directions)
    full = sector_analysis(coef, point, **kw)
    half = sector_analysis(coef, point, half=True, **kw) if infinite else None
    if lt is None:
        kind = full.topological_type()
        if kind == "saddle":
            lt = LocalType.SADDLE
        elif kind == "node+":
            lt = LocalType.STABLE_NODE
        elif kind == "node-":
            lt = LocalType.UNSTABLE_NODE
        elif kind == "saddle-node":
            if h == "semi-hyperbolic":
                lt = LocalType.SEMI_HYPERBOLIC_SADDLE_NODE
            elif any(abs(float(v)) > tol for row in jac for v in row):
                lt = LocalType.NILPOTENT_SADDLE_NODE
            else:
                lt = LocalType.DEGENERATE_SADDLE_NODE
        elif h == "nilpotent":
            # both eigenvalues vanish: keep the asserted saddle-node label and
            # let the caller decide whether the sector word is acceptable
            linear = any(abs(float(v)) > tol for row in jac for v in row)
            lt = LocalType.NILPOTENT_SADDLE_NODE if linear else LocalType.DEGENERATE_SADDLE_NODE
        else:
            raise InconsistentLocalType(f"sector word {full.word!r} at {tuple(point)} is not a saddle, node or saddle-node")
    return ep, lt, h, full, half


def _kernel_directions(coef: np.ndarray, point) -> tuple[float, ...]:
    """Angles (tangent frame) of the kernel of the linearisation, or all of
    its eigen-directions when it vanishes."""
    E = np.asarray(point, dtype=float)
    e1, e2 = sphere.tangent_frame(E)
    B = np.column_stack((e1, e2))
    J = B.T @ sphere.jacobian(coef, E) @ B
    if np.max(np.abs(J)) < 1e-12:
        return ()
    _, _, vt = np.linalg.svd(J)
    k = vt[-1]
    t = math.atan2(k[1], k[0]) % (2 * math.pi)
    return (t, (t + math.pi) % (2 * math.pi))


def finite_points(nf: NormalForm, policy: SignPolicy = TOLERANT) -> list[tuple[str, float, float, bool]]:
    """Closed-form finite equilibria as ``(label, x, y, merged)``."""
    a, b, c, d, e = nf.params
    if nf.family in ("IV", "V"):
        return []
    out = []
    lines = [(0.0, Poly1((e, b, 1.0)), "q")]
    if nf.family == "I":
        # y^2 + (b - a) y + (c - d + e) on x = -1
        lines.append((-1.0, Poly1((c - d + e, b - a, 1.0)), "p"))
    dis = discriminants(nf.params)
    exact = {"q": dis.exact[0] if dis.exact else None, "p": dis.exact[1] if dis.exact else None}
    for x0, poly, name in lines:
        # decide the collision case on the exact discriminant in strict mode
        val = exact[name] if policy.mode == "strict" and exact[name] is not None else poly.coeff(1) ** 2 - 4 * poly.coeff(0)
        s = policy.sign(val)
        if s < 0:
            continue
        if s == 0:
            out.append((f"{name}12", x0, -poly.coeff(1) / 2.0, True))
            continue
        lo, hi = roots_quadratic(poly, SignPolicy(0.0, "strict")).roots
        out.append((f"{name}1", x0, hi, False))
        out.append((f"{name}2", x0, lo, False))
    return out


def finite_equilibria(nf: NormalForm, policy: SignPolicy = TOLERANT, *, radius: float = 1e-3,
                      samples: int = 720) -> list[Equilibrium]:
    """All finite equilibria with eigenvalues and local types.

    On each vertical invariant line the upper point carries index 1 and the
    lower one index 2 (``q1``/``q2`` on ``x = 0``, ``p1``/``p2`` on
    ``x = -1``); a double root is reported once as ``q12`` or ``p12``.
    """
    from .compactify import sphere_coefficients

    coef = sphere_coefficients(nf)
    out = []
    for label, x, y, merged in finite_points(nf, policy):
        jac = nf.jacobian(x, y)
        dirs = None
        E = sphere.from_affine(x, y)
        if merged:
            # the double root makes d/dy vanish exactly
            jac = (jac[0], (jac[1][0], 0.0))
            if all(abs(v) <= 1e-12 for row in jac for v in row):
                # linear part zero: the field is its own quadratic part here
                quad = lambda F: {k: v for k, v in F.items() if sum(k) == 2}
                phis = homogeneous_directions(quad(nf.P), quad(nf.Q))
                if phis is not None:
                    dirs = directions_on_sphere(
                        phis, lambda s, t, x=x, y=y: sphere.from_affine(x + s, y + t), E)
        ep, lt, h, full, _ = local_type(coef, E, jac, infinite=False,
                                        radius=radius, samples=samples, directions=dirs)
        out.append(Equilibrium((x, y), "affine", ep, lt, label, tuple(sphere.from_affine(x, y)),
                               h, merged, full, None))
    return out


def classify_finite(nf: NormalForm, eq: Equilibrium, policy: SignPolicy = TOLERANT) -> LocalType:
    """Local type of ``eq``, cross-checked against the types the theory predicts.

    Points with a single zero eigenvalue must show the saddle-node sector
    signature (two hyperbolic sectors and one parabolic sector); points
    whose linear part vanishes on the double root of family II must be
    nilpotent (or linearly zero) saddle-nodes.
    """
    lt = eq.local_type
    if eq.hyperbolicity == "semi-hyperbolic" and lt is not LocalType.SEMI_HYPERBOLIC_SADDLE_NODE:
        raise InconsistentLocalType(f"{eq.label}: semi-hyperbolic point classified as {lt.value}")
    if eq.hyperbolicity == "nilpotent" and not lt.is_saddle_node:
        raise InconsistentLocalType(f"{eq.label}: nilpotent point classified as {lt.value}")
    if nf.family == "III" and lt is LocalType.STABLE_NODE:
        raise InconsistentLocalType(f"{eq.label}: family III admits no stable node")
    return lt
