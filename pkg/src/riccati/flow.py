"""Trajectories on the Poincaré sphere and the separatrix skeleton.

Integration runs on the compactified field (see :mod:`riccati.sphere`),
reparametrised by arc length, with a Dormand-Prince 5(4) pair.  Working on
the sphere removes the need to switch charts near infinity: the field is
polynomial there and the equator is invariant.  A trajectory stops when it
enters a parabolic sector that absorbs it in the integration direction,
when it comes within ``r_conv`` of any equilibrium, or when the arc-length
budget runs out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import sphere
from .compactify import DiskPoint, all_equilibria, sphere_coefficients
from .equilibria import Equilibrium, LocalType
from .errors import RiccatiError, StepFailure
from .normalform import NormalForm
from .sphere import njit

_SECTOR_CODE = {"h": 0, "a": 1, "r": 2, "e": 3, "f": 3}

# status codes returned by the kernel
CAPTURED, CONVERGED, BUDGET, FAILED, OVERFLOW, CONNECTED = 0, 1, 2, 3, 4, 5

# Dormand-Prince 5(4)
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40


class Termination(str, Enum):
    REACHED_EQUILIBRIUM = "ReachedEquilibrium"
    LEFT_TIME_BUDGET = "LeftTimeBudget"
    STEP_FAILURE = "StepFailure"


class UnresolvedLimit(RiccatiError):
    pass


@njit(cache=True)
def _rhs(c, p, sgn, out):
    fx, fy, fz = sphere.field(c, p[0], p[1], p[2])
    n = math.sqrt(fx * fx + fy * fy + fz * fz)
    if n == 0.0:
        out[0] = 0.0
        out[1] = 0.0
        out[2] = 0.0
        return 0.0
    s = sgn / n
    out[0] = fx * s
    out[1] = fy * s
    out[2] = fz * s
    return n


@njit(cache=True)
def _sector_at(i, theta, sec_start, sec_theta, sec_code):
    lo, hi = sec_start[i], sec_start[i + 1]
    n = hi - lo
    if n == 0:
        return 3
    # sector j spans [theta_j, theta_{j+1}); the last one wraps around
    for j in range(n - 1):
        if sec_theta[lo + j] <= theta < sec_theta[lo + j + 1]:
            return sec_code[lo + j]
    return sec_code[hi - 1]


@njit(cache=True)
def _run(c, p0, sgn, rtol, atol, h0, hmax, max_arc, max_steps,
         eqs, frames, sec_start, sec_theta, sec_code, src, normal, use_normal,
         upper, r_cap, r_conv, out):
    """Integrate from ``p0``; samples are written into ``out`` (rows)."""
    y = p0.copy()
    k1 = np.empty(3)
    k2 = np.empty(3)
    k3 = np.empty(3)
    k4 = np.empty(3)
    k5 = np.empty(3)
    k6 = np.empty(3)
    k7 = np.empty(3)
    yt = np.empty(3)
    yn = np.empty(3)
    cap = out.shape[0]
    stride = 1
    nout = 0
    out[0, 0] = y[0]
    out[0, 1] = y[1]
    out[0, 2] = y[2]
    nout = 1
    arc = 0.0
    h = h0
    m = eqs.shape[0]
    left_src = src < 0
    if _rhs(c, y, sgn, k1) == 0.0:
        return nout, FAILED, -1, arc
    steps = 0
    while steps < max_steps:
        steps += 1
        if arc >= max_arc:
            return nout, BUDGET, -1, arc
        for i in range(3):
            yt[i] = y[i] + h * A21 * k1[i]
        _rhs(c, yt, sgn, k2)
        for i in range(3):
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
        _rhs(c, yt, sgn, k3)
        for i in range(3):
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
        _rhs(c, yt, sgn, k4)
        for i in range(3):
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
        _rhs(c, yt, sgn, k5)
        for i in range(3):
            yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
        _rhs(c, yt, sgn, k6)
        for i in range(3):
            yn[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
        _rhs(c, yn, sgn, k7)
        err = 0.0
        for i in range(3):
            e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            sc = atol + rtol * max(abs(y[i]), abs(yn[i]))
            err += (e / sc) ** 2
        err = math.sqrt(err / 3.0)
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            if h < 1e-14:
                return nout, FAILED, -1, arc
            continue
        # accept: project back onto the sphere (and the invariant circle)
        if use_normal:
            d = yn[0] * normal[0] + yn[1] * normal[1] + yn[2] * normal[2]
            for i in range(3):
                yn[i] -= d * normal[i]
        if upper and yn[2] < 0.0:
            yn[2] = 0.0
        nr = math.sqrt(yn[0] * yn[0] + yn[1] * yn[1] + yn[2] * yn[2])
        for i in range(3):
            y[i] = yn[i] / nr
        arc += h
        fac = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
        h = min(h * fac, hmax)
        if steps % stride == 0:
            if nout == cap:
                # keep every other sample and halve the sampling rate
                for j in range(cap // 2):
                    out[j, 0] = out[2 * j, 0]
                    out[j, 1] = out[2 * j, 1]
                    out[j, 2] = out[2 * j, 2]
                nout = cap // 2
                stride *= 2
            out[nout, 0] = y[0]
            out[nout, 1] = y[1]
            out[nout, 2] = y[2]
            nout += 1
        moving = _rhs(c, y, sgn, k1)
        # limit detection
        for q in range(m):
            dx = y[0] - eqs[q, 0]
            dy = y[1] - eqs[q, 1]
            dz = y[2] - eqs[q, 2]
            dist = math.sqrt(dx * dx + dy * dy + dz * dz)
            if q == src and not left_src:
                if dist > r_cap:
                    left_src = True
                continue
            if dist <= r_conv:
                out[nout - 1, 0] = eqs[q, 0]
                out[nout - 1, 1] = eqs[q, 1]
                out[nout - 1, 2] = eqs[q, 2]
                return nout, CONVERGED, q, arc
            if dist <= r_cap and use_normal:
                # confined to an invariant circle through the equilibrium and
                # heading for it: the 1-D flow cannot pass it
                on = abs(eqs[q, 0] * normal[0] + eqs[q, 1] * normal[1] + eqs[q, 2] * normal[2])
                if on < 1e-9 and dx * k1[0] + dy * k1[1] + dz * k1[2] < 0.0:
                    if nout < cap:
                        nout += 1
                    out[nout - 1, 0] = eqs[q, 0]
                    out[nout - 1, 1] = eqs[q, 1]
                    out[nout - 1, 2] = eqs[q, 2]
                    return nout, CONNECTED, q, arc
            if dist <= r_cap:
                a1 = dx * frames[q, 0] + dy * frames[q, 1] + dz * frames[q, 2]
                a2 = dx * frames[q, 3] + dy * frames[q, 4] + dz * frames[q, 5]
                th = math.atan2(a2, a1) % (2.0 * math.pi)
                code = _sector_at(q, th, sec_start, sec_theta, sec_code)
                if (sgn > 0 and code == 1) or (sgn < 0 and code == 2):
                    if nout < cap:
                        nout += 1
                    out[nout - 1, 0] = eqs[q, 0]
                    out[nout - 1, 1] = eqs[q, 1]
                    out[nout - 1, 2] = eqs[q, 2]
                    return nout, CAPTURED, q, arc
        if moving == 0.0:
            return nout, FAILED, -1, arc
    return nout, OVERFLOW, -1, arc


@dataclass(frozen=True)
class IntegratorOptions:
    rtol: float = 1e-9
    atol: float = 1e-12
    h0: float = 1e-7
    hmax: float = 0.05
    max_arc: float = 1e3
    max_steps: int = 1_000_000
    r_capture: float = 1e-3
    r_converge: float = 1e-7
    max_samples: int = 4096


DEFAULT_OPTIONS = IntegratorOptions()


class EquilibriumTable:
    """Packed equilibrium data for the kernel: positions, frames and sectors."""

    def __init__(self, equilibria: list[Equilibrium]):
        self.equilibria = list(equilibria)
        m = len(self.equilibria)
        self.points = np.zeros((m, 3))
        self.frames = np.zeros((m, 6))
        starts = [0]
        thetas: list[float] = []
        codes: list[int] = []
        for i, eq in enumerate(self.equilibria):
            E = np.array(eq.point)
            e1, e2 = sphere.tangent_frame(E)
            self.points[i] = E
            self.frames[i, :3] = e1
            self.frames[i, 3:] = e2
            rep = eq.sectors
            if rep is not None:
                thetas.extend(t for t, _ in rep.directions)
                codes.extend(_SECTOR_CODE[s] for s in rep.sectors)
            starts.append(len(thetas))
        self.sec_start = np.array(starts, dtype=np.int64)
        self.sec_theta = np.array(thetas, dtype=float)
        self.sec_code = np.array(codes, dtype=np.int64)

    def index(self, label: str) -> int:
        for i, eq in enumerate(self.equilibria):
            if eq.label == label:
                return i
        raise KeyError(label)


@dataclass
class Trajectory:
    samples: np.ndarray
    times: np.ndarray
    direction: int
    termination: Termination
    limit: str | None = None
    arc_length: float = 0.0
    on_invariant_circle: bool = False

    @property
    def alpha_limit(self) -> str | None:
        return self.limit if self.direction < 0 else None

    @property
    def omega_limit(self) -> str | None:
        return self.limit if self.direction > 0 else None

    def disk_points(self) -> np.ndarray:
        return self.samples[:, :2]


def invariant_circle(coef: np.ndarray, a, b, tol: float = 1e-10):
    """Normal of the great circle through ``a`` and ``b`` when it is invariant, else ``None``.

    ``b`` may also be a tangent vector at ``a``.  Great circles are the
    images of straight lines (or the equator).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    N = np.cross(a, b)
    nn = np.linalg.norm(N)
    if nn < 1e-14:
        return None
    N /= nn
    u = a - np.dot(a, N) * N
    u /= np.linalg.norm(u)
    w = np.cross(N, u)
    for phi in np.linspace(0.3, 2 * math.pi - 0.3, 7):
        p = math.cos(phi) * u + math.sin(phi) * w
        F = sphere.field_vec(coef, p)
        if abs(np.dot(F, N)) > tol * (1.0 + np.linalg.norm(F)):
            return None
    return N


def _known_circle(nf: NormalForm, p: np.ndarray):
    for x0 in nf.invariant_lines:
        N = np.array([1.0, 0.0, -x0]) / math.hypot(1.0, x0)
        if abs(np.dot(p, N)) < 1e-12:
            return N
    if abs(p[2]) < 1e-12:
        return np.array([0.0, 0.0, 1.0])
    return None


def _integrate_sphere(coef, table: EquilibriumTable, p0, sgn: int, opts: IntegratorOptions,
                      src: int = -1, normal=None):
    out = np.empty((opts.max_samples, 3))
    use = normal is not None
    N = np.asarray(normal, dtype=float) if use else np.zeros(3)
    upper = p0[2] >= 0.0
    n, status, hit, arc = _run(coef, np.asarray(p0, dtype=float), float(sgn), opts.rtol, opts.atol,
                               opts.h0, opts.hmax, opts.max_arc, opts.max_steps, table.points,
                               table.frames, table.sec_start, table.sec_theta, table.sec_code, src,
                               N, use, upper, opts.r_capture, opts.r_converge, out)
    return out[:n].copy(), status, hit, arc


def _trajectory(samples, status, hit, arc, sgn, table, on_circle) -> Trajectory:
    times = np.concatenate(([0.0], np.cumsum(np.linalg.norm(np.diff(samples, axis=0), axis=1))))
    # equal consecutive samples (the final snap) would break strict monotonicity
    keep = np.concatenate(([True], np.diff(times) > 0))
    samples, times = samples[keep], times[keep]
    if status in (CAPTURED, CONVERGED, CONNECTED):
        term, lim = Termination.REACHED_EQUILIBRIUM, table.equilibria[hit].label
    elif status == FAILED:
        term, lim = Termination.STEP_FAILURE, None
    else:
        term, lim = Termination.LEFT_TIME_BUDGET, None
    return Trajectory(samples, times, sgn, term, lim, arc, on_circle)


def integrate(nf: NormalForm, start: DiskPoint, direction: str = "forward", budget: float = 1e3, *,
              equilibria: list[Equilibrium] | None = None, options: IntegratorOptions = DEFAULT_OPTIONS,
              raise_on_failure: bool = False) -> Trajectory:
    """Trajectory of ``nf`` through ``start`` in the given time direction.

    Samples are points of the sphere; their first two coordinates are the
    position in the Poincaré disk.  The arc-length budget is in disk units.
    """
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    sgn = 1 if direction == "forward" else -1
    coef = sphere_coefficients(nf)
    eqs = equilibria if equilibria is not None else all_equilibria(nf)
    table = EquilibriumTable(eqs)
    p0 = start.sphere()
    for eq in eqs:
        if np.linalg.norm(p0 - np.array(eq.point)) < 1e-8:
            raise ValueError(f"start point is the equilibrium {eq.label}")
    N = _known_circle(nf, p0)
    opts = IntegratorOptions(**{**options.__dict__, "max_arc": budget})
    samples, status, hit, arc = _integrate_sphere(coef, table, p0, sgn, opts, normal=N)
    if status == FAILED and raise_on_failure:
        raise StepFailure("adaptive step collapsed below 1e-14")
    return _trajectory(samples, status, hit, arc, sgn, table, N is not None)


# -- separatrix skeleton -------------------------------------------------------

@dataclass
class Edge:
    source: str | None
    target: str | None
    kind: str  # "separatrix", "connection", "equator" or "line"
    owner: str | None = None
    theta: float | None = None
    trajectory: Trajectory | None = field(default=None, repr=False)
    on_line: bool = False

    @property
    def resolved(self) -> bool:
        return self.source is not None and self.target is not None


@dataclass
class SeparatrixSkeleton:
    nodes: list[Equilibrium]
    edges: list[Edge]
    equator_order: list[str]
    portrait: int | None = None
    unresolved: list[str] = field(default_factory=list)

    def node(self, label: str) -> Equilibrium:
        for eq in self.nodes:
            if eq.label == label:
                return eq
        raise KeyError(label)

    def separatrices(self) -> list[Edge]:
        return [e for e in self.edges if e.kind in ("separatrix", "connection")]

    def edge_multiset(self) -> list[tuple[str, str, str]]:
        return sorted((e.source or "?", e.target or "?", e.kind) for e in self.edges if e.kind != "line")


def _eigen_angles(coef: np.ndarray, E: np.ndarray, tol: float = 1e-9) -> list[tuple[float, bool]]:
    """Eigendirections of the tangent linearisation as ``(angle, is_center)``."""
    e1, e2 = sphere.tangent_frame(E)
    B = np.column_stack((e1, e2))
    JT = B.T @ sphere.jacobian(coef, E) @ B
    w, V = np.linalg.eig(JT)
    if np.max(np.abs(np.imag(w))) > tol:
        return []
    scale = max(1.0, float(np.max(np.abs(JT))))
    out = []
    for k in range(2):
        v = np.real(V[:, k])
        t = math.atan2(v[1], v[0])
        center = abs(w[k]) <= tol * scale
        out += [(t % (2 * math.pi), center), ((t + math.pi) % (2 * math.pi), center)]
    return out


def _seed_directions(eq: Equilibrium, coef: np.ndarray) -> list[tuple[float, int, bool]]:
    """``(theta, radial_sign, slow)`` of the separatrices leaving ``eq`` into the disk.

    ``slow`` marks separatrices tangent to a zero eigenvalue (or at a point
    with nilpotent or vanishing linear part).  The field there is of order
    ``r^2`` or smaller, so they are seeded farther out than the others.
    """
    rep = eq.sectors
    if rep is None:
        return []
    dirs = rep.separatrices()
    E = np.array(eq.point)
    angles = _eigen_angles(coef, E)
    hyperbolic = eq.hyperbolicity == "hyperbolic"
    out = []
    for th, sg in dirs:
        if eq.hyperbolicity in ("nilpotent", "degenerate") or not angles:
            out.append((th, sg, True))
            continue
        best, center = min(angles, key=lambda a: abs(math.remainder(a[0] - th, 2 * math.pi)))
        if hyperbolic:
            # snap to the eigendirection of the linearisation
            out.append((best, sg, False))
        elif center or abs(math.remainder(best - th, 2 * math.pi)) > 0.2:
            out.append((th, sg, True))
        else:
            out.append((best, sg, False))
    if eq.infinite:
        out = [d for d in out if math.sin(d[0]) > 1e-6]
    return out


def _equator_arcs(coef: np.ndarray, eqs: list[Equilibrium]) -> tuple[list[Edge], list[str]]:
    inf = sorted((e for e in eqs if e.infinite), key=lambda e: sphere.disk_angle(e.point))
    order = [e.label for e in inf]
    edges = []
    k = len(inf)
    for i in range(k):
        a, b = inf[i], inf[(i + 1) % k]
        ta = sphere.disk_angle(a.point)
        tb = sphere.disk_angle(b.point)
        if tb <= ta:
            tb += 2 * math.pi
        mid = 0.5 * (ta + tb)
        p = np.array([math.cos(mid), math.sin(mid), 0.0])
        F = sphere.field_vec(coef, p)
        tang = -p[1] * F[0] + p[0] * F[1]
        if tang > 0:
            edges.append(Edge(a.label, b.label, "equator"))
        else:
            edges.append(Edge(b.label, a.label, "equator"))
    return edges, order


# Offsets tried when a slow separatrix cannot be followed from ``slow_delta``.
# Near some nilpotent points at infinity the separatrix is so strongly
# attracting that an explicit step from close by needs ~1e9 steps; seeds
# farther out relax onto it at once.
SLOW_RETRIES = (1e-2, 3e-2, 1e-1)


def _pair_connections(edges: list[Edge]) -> None:
    """Keep ``connection`` only for orbits traced as a separatrix from both ends.

    A direct landing on a point that has no matching separatrix of its own
    back to the source is a landing inside a parabolic sector.
    """
    count: dict[tuple, int] = {}
    for e in edges:
        if e.kind == "connection":
            key = (e.source, e.target, e.owner)
            count[key] = count.get(key, 0) + 1
    for e in edges:
        if e.kind != "connection":
            continue
        other = e.target if e.owner == e.source else e.source
        if count.get((e.source, e.target, other), 0) == 0 or other == e.owner:
            e.kind = "separatrix"


def trace_separatrices(nf: NormalForm, equilibria: list[Equilibrium] | None = None, *,
                       delta: float = 1e-6, slow_delta: float = 1e-3,
                       options: IntegratorOptions = DEFAULT_OPTIONS) -> SeparatrixSkeleton:
    """Trace every separatrix into the disk and assemble the skeleton.

    Seeds sit at distance ``delta`` from the equilibrium along each
    direction that bounds a hyperbolic sector; outgoing directions are
    integrated forward and incoming ones backward.  Center-type directions
    use ``slow_delta`` instead: orbits near such a separatrix converge to it
    in the integration direction, so the larger offset costs no accuracy.
    Seeds on an invariant straight line are kept on it exactly.
    """
    coef = sphere_coefficients(nf)
    eqs = equilibria if equilibria is not None else all_equilibria(nf)
    table = EquilibriumTable(eqs)
    edges: list[Edge] = []
    unresolved = []
    for i, eq in enumerate(eqs):
        E = np.array(eq.point)
        e1, e2 = sphere.tangent_frame(E)
        for th, sg, slow in _seed_directions(eq, coef):
            if sg == 0:
                continue
            ladder = (slow_delta,) + SLOW_RETRIES if slow else (delta,)
            for r in ladder:
                p0 = sphere.offset(E, e1, e2, r, th)
                # the tangent gives a well-conditioned normal, p0 - E does not
                N = invariant_circle(coef, E, math.cos(th) * e1 + math.sin(th) * e2)
                samples, status, hit, arc = _integrate_sphere(coef, table, p0, sg, options, src=i, normal=N)
                if status in (CAPTURED, CONVERGED, CONNECTED):
                    break
            samples = np.vstack((E, samples))
            traj = _trajectory(samples, status, hit, arc, sg, table, N is not None)
            lim = traj.limit
            if lim is None:
                unresolved.append(f"{eq.label}@{th:.4f}")
            src, dst = (eq.label, lim) if sg > 0 else (lim, eq.label)
            # landing on the limit point along one of its own separatrices
            # (rather than inside a parabolic sector) is a connection
            kind = "connection" if status in (CONVERGED, CONNECTED) else "separatrix"
            edges.append(Edge(src, dst, kind, eq.label, th, traj, N is not None))
    _pair_connections(edges)
    arcs, order = _equator_arcs(coef, eqs)
    edges.extend(arcs)
    return SeparatrixSkeleton(list(eqs), edges, order, None, unresolved)


def sample_orbits(nf: NormalForm, equilibria: list[Equilibrium], grid: int = 8, *,
                  options: IntegratorOptions = DEFAULT_OPTIONS) -> list[Trajectory]:
    """Forward and backward orbits through a ``grid`` x ``grid`` lattice of disk points."""
    coef = sphere_coefficients(nf)
    table = EquilibriumTable(equilibria)
    out = []
    if grid <= 0:
        return out
    ticks = np.linspace(-0.9, 0.9, grid) if grid > 1 else np.array([0.0])
    for X in ticks:
        for Y in ticks:
            r2 = X * X + Y * Y
            if r2 >= 0.95:
                continue
            p0 = np.array([X, Y, math.sqrt(1.0 - r2)])
            if min(np.linalg.norm(p0 - table.points[i]) for i in range(len(equilibria))) < 1e-3:
                continue
            for sg in (1, -1):
                s, status, hit, arc = _integrate_sphere(coef, table, p0, sg, options)
                out.append(_trajectory(s, status, hit, arc, sg, table, False))
    return out


@njit(cache=True)
def _returns(s, near, leave):
    n = s.shape[0]
    m = s.shape[1]
    tang = s[1:] - s[:-1]
    norms = np.empty(n - 1)
    for k in range(n - 1):
        norms[k] = math.sqrt(tang[k, 0] ** 2 + tang[k, 1] ** 2 + tang[k, 2] ** 2)
    near2, leave2 = near * near, leave * leave
    count = 0
    for i in range(n - 1):
        if norms[i] == 0.0:
            continue
        left = False
        for k in range(i + 1, n - 1):
            d2 = 0.0
            for c in range(m):
                d2 += (s[k, c] - s[i, c]) ** 2
            if not left:
                left = d2 > leave2
            elif d2 < near2 and norms[k] > 0.0:
                dot = tang[i, 0] * tang[k, 0] + tang[i, 1] * tang[k, 1] + tang[i, 2] * tang[k, 2]
                if dot / (norms[i] * norms[k]) > 0.9:
                    count += 1
                    break
    return count


def return_detections(traj: Trajectory, near: float = 1e-4, leave: float = 1e-2) -> int:
    """Count returns of a trajectory to an earlier sample with aligned tangent.

    A return needs the curve to have left the ``leave`` neighbourhood of the
    earlier sample and to come back within ``near`` moving the same way.
    """
    s = np.ascontiguousarray(traj.samples, dtype=np.float64)
    if len(s) < 3:
        return 0
    return int(_returns(s, near, leave))
