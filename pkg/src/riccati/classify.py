"""Portrait identification: table rows, the first-row subcase test, line
contact analysis and skeleton matching against a catalog of representatives.
"""
from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism as iso

from . import __version__
from .algebra import STRICT, TOLERANT, Discriminants, Poly1, SignPolicy, as_fraction, discriminants, roots_quadratic
from .compactify import all_equilibria
from .equilibria import finite_points
from .errors import (AmbiguousMatch, CatalogGap, ImpossibleCase, LemmaViolation, NoMatch)
from .fixtures import Fixture, load_fixtures
from .flow import SeparatrixSkeleton, trace_separatrices
from .normalform import FAMILIES, NormalForm

# discriminants each family's table branches on, in column order
TABLE_KEYS = {
    "I": ("dI1", "dF1", "dF2"),
    "II": ("dI1", "dF1"),
    "III": ("dI2", "dF1"),
    "IV": ("dI2",),
    "V": ("dI1",),
}

P, Z, N = 1, 0, -1

_ROWS = {
    "I": [
        ((P, P, P), (1, 2, 3, 4, 5)), ((P, P, Z), (6, 7, 8, 9)), ((P, P, N), (10,)),
        ((P, Z, P), (11, 12, 13, 14)), ((P, Z, Z), (15, 16)), ((P, Z, N), (17,)),
        ((P, N, P), (18,)), ((P, N, Z), (19,)), ((P, N, N), (20,)),
        ((Z, P, P), (21, 22, 23)), ((Z, P, Z), (24, 25)), ((Z, P, N), (26,)),
        ((Z, Z, P), (27,)), ((Z, Z, Z), (28,)), ((Z, Z, N), (29,)),
        ((Z, N, P), (30,)), ((Z, N, Z), (31,)), ((Z, N, N), (32,)),
        ((N, P, P), (33,)), ((N, P, Z), (34,)), ((N, P, N), (35,)),
        ((N, Z, P), (36,)), ((N, Z, Z), (37,)), ((N, Z, N), (38,)),
        ((N, N, P), (39,)), ((N, N, Z), (40,)), ((N, N, N), (41,)),
    ],
    "II": [
        ((P, P), (42, 43, 44)), ((P, Z), (45, 46, 47)), ((P, N), (48,)),
        ((Z, P), (49, 50, 51)), ((Z, Z), (52, 53, 54)), ((Z, N), (55,)),
        ((N, P), (56,)), ((N, Z), (57, 58)), ((N, N), (41,)),
    ],
    "III": [
        ((P, P), (59, 60, 61)), ((P, Z), (62, 63, 64)), ((P, N), (65,)),
        ((Z, P), (66, 67)), ((Z, Z), (68, 69)), ((Z, N), (32,)),
        ((N, P), (35,)), ((N, Z), (38,)), ((N, N), (41,)),
    ],
    "IV": [((P,), (70, 71)), ((Z,), (72, 73, 74)), ((N,), (41,))],
    "V": [((P,), (70, 71)), ((Z,), (72, 73, 74)), ((N,), (41,))],
}

# The P38 row of the first table as printed: one condition on dI1 appears
# twice and dF1 is missing.  The row used for lookup is the corrected
# (dI1 < 0, dF1 = 0, dF2 < 0), the only pattern left free by the others.
P38_PRINTED = (("dI1", N), ("dF2", Z), ("dI1", N))


@dataclass(frozen=True)
class PortraitId:
    id: int
    families: tuple[str, ...] = ()

    def __post_init__(self):
        if not 1 <= self.id <= 74:
            raise ValueError("portrait ids run from 1 to 74")

    def __str__(self) -> str:
        return f"P{self.id}"


@dataclass(frozen=True)
class TableRow:
    family: str
    pattern: tuple[tuple[str, int], ...]
    candidates: tuple[int, ...]

    @property
    def index(self) -> int:
        return [r.pattern for r in TABLES[self.family]].index(self.pattern) + 1

    def matches(self, signs: dict[str, int]) -> bool:
        return all(signs[k] == s for k, s in self.pattern)

    def describe(self) -> str:
        sym = {P: ">0", Z: "=0", N: "<0"}
        return ", ".join(f"{k}{sym[s]}" for k, s in self.pattern)


TABLES: dict[str, list[TableRow]] = {
    fam: [TableRow(fam, tuple(zip(TABLE_KEYS[fam], pat)), cands) for pat, cands in rows]
    for fam, rows in _ROWS.items()
}


def portrait_families(pid: int) -> tuple[str, ...]:
    return tuple(f for f in FAMILIES if any(pid in r.candidates for r in TABLES[f]))


def table_row(family: str, d: Discriminants, policy: SignPolicy = TOLERANT) -> TableRow:
    signs = d.signs(policy)
    hits = [r for r in TABLES[family] if r.matches(signs)]
    assert len(hits) == 1, "table rows partition the sign patterns"
    return hits[0]


# -- first row of the first table -------------------------------------------

@dataclass(frozen=True)
class Line:
    """The line ``y = slope * x + intercept``, or ``x = intercept`` when the
    slope is infinite.  Points are parametrised by ``x`` (by ``y`` on a
    vertical line)."""

    slope: float
    intercept: float
    role: str
    anchors: tuple[str, ...] = ()

    @classmethod
    def vertical(cls, x0: float, role: str = "line") -> "Line":
        return cls(math.inf, float(x0), role)

    @property
    def is_vertical(self) -> bool:
        return math.isinf(self.slope)

    def __call__(self, x: float, y: float) -> float:
        if self.is_vertical:
            return x - self.intercept
        return y - self.slope * x - self.intercept

    def point(self, t: float) -> tuple[float, float]:
        if self.is_vertical:
            return (self.intercept, t)
        return (t, self.slope * t + self.intercept)


@dataclass(frozen=True)
class SubcaseEvidence:
    r1_q1: float
    r2_p2: float
    case: int
    lhs: float | None = None
    rhs: float | None = None

    @property
    def slope_difference(self) -> float | None:
        return None if self.lhs is None else self.lhs - self.rhs


def _sqrt_disc(d: Discriminants, i: int) -> float:
    return math.sqrt(max(d.as_tuple()[i], 0.0))


def first_row_lines(params: Sequence[float], d: Discriminants | None = None) -> dict[str, Line]:
    """The lines r1 (through p1 in the direction u1), r2 (through q2 in the
    direction u1) and S (through p1 and q2) of a first-row system."""
    a, b, c, dd, e = (float(v) for v in params)
    d = d or discriminants(params)
    sF1, sF2, sI1 = _sqrt_disc(d, 0), _sqrt_disc(d, 1), _sqrt_disc(d, 2)
    u1 = (1.0 - a + sI1) / 2.0
    k1 = (1.0 - b + sI1 + sF2) / 2.0
    k2 = (-b - sF1) / 2.0
    m = (-a - sF1 - sF2) / 2.0
    return {
        "r1": Line(u1, k1, "r1", ("v1", "p1", "u1")),
        "r2": Line(u1, k2, "r2", ("v1", "q2", "u1")),
        "S": Line(m, k2, "S", ("p1", "q2")),
    }


def subcase_family_i_row1(params: Sequence[float], d: Discriminants | None = None,
                          policy: SignPolicy = STRICT) -> tuple[int, SubcaseEvidence]:
    """Portrait P1..P5 of a family I system with all three discriminants positive.

    The sides of q1 with respect to r1 and of p2 with respect to r2 give
    four cases: (-,-) is P1, (+,+) is P2, (+,-) cannot happen and (-,+) is
    settled by comparing the slope of S with the direction u2.
    """
    a, b, c, dd, e = (float(v) for v in params)
    d = d or discriminants(params)
    sF1, sF2, sI1 = _sqrt_disc(d, 0), _sqrt_disc(d, 1), _sqrt_disc(d, 2)
    # r1(q1) and r2(p2) reduce to these closed forms
    r1q1 = (sF1 - 1.0 - sI1 - sF2) / 2.0
    r2p2 = (1.0 + sI1 + sF1 - sF2) / 2.0
    s1, s2 = _sign(r1q1), _sign(r2p2)
    if s1 < 0 and s2 < 0:
        return 1, SubcaseEvidence(r1q1, r2p2, 1)
    if s1 > 0 and s2 > 0:
        return 2, SubcaseEvidence(r1q1, r2p2, 2)
    if s1 > 0 and s2 < 0:
        raise ImpossibleCase(f"r1(q1) = {r1q1:g} > 0 and r2(p2) = {r2p2:g} < 0 together")
    if s1 == 0 or s2 == 0:
        raise ImpossibleCase(f"equilibrium on a dividing line: r1(q1) = {r1q1:g}, r2(p2) = {r2p2:g}")
    lhs = -a - sF1 - sF2
    rhs = 1.0 - a - sI1
    diff = _slope_difference(params, d, policy)
    pid = 3 if diff < 0 else (4 if diff == 0 else 5)
    return pid, SubcaseEvidence(r1q1, r2p2, 4, lhs, rhs)


def _sign(x: float, eps: float = 1e-12) -> int:
    return 0 if abs(x) <= eps else (1 if x > 0 else -1)


def _slope_difference(params, d: Discriminants, policy: SignPolicy) -> int:
    """Sign of ``(-a - sqrt dF1 - sqrt dF2) - (1 - a - sqrt dI1)``.

    In strict mode this is decided exactly: the sign of
    ``sqrt dI1 - sqrt dF1 - sqrt dF2 - 1`` follows from squaring twice.
    """
    if policy.mode == "strict" and d.exact is not None:
        F1, F2, I1 = d.exact[0], d.exact[1], d.exact[2]
        return _sign_sqrt_sum(I1, F1, F2)
    val = _sqrt_disc(d, 2) - _sqrt_disc(d, 0) - _sqrt_disc(d, 1) - 1.0
    return policy.sign(val)


def _sign_sqrt_sum(I1, F1, F2) -> int:
    """Exact sign of ``sqrt(I1) - (sqrt(F1) + sqrt(F2) + 1)`` for non-negative rationals."""
    # compare A = I1 with B^2 = (sqrt F1 + sqrt F2 + 1)^2 = t + 2 w,
    # where t = F1 + F2 + 1 and w = sqrt(F1 F2) + sqrt F1 + sqrt F2
    from fractions import Fraction

    def isqrt_frac(x: Fraction):
        n, dd = x.numerator, x.denominator
        rn, rd = math.isqrt(n), math.isqrt(dd)
        return Fraction(rn, rd) if rn * rn == n and rd * rd == dd else None

    roots = [isqrt_frac(Fraction(v)) for v in (F1, F2)]
    if all(r is not None for r in roots):
        diff_sq = Fraction(I1) - (roots[0] + roots[1] + 1) ** 2
        return (diff_sq > 0) - (diff_sq < 0)
    # irrational square roots: equality is non-generic, fall back to floats
    val = math.sqrt(I1) - math.sqrt(F1) - math.sqrt(F2) - 1.0
    return _sign(val, 1e-12)


# -- contact analysis ---------------------------------------------------------

@dataclass(frozen=True)
class ContactReport:
    line: Line
    integral: bool
    contacts: tuple[tuple[float, float], ...]
    # crossing sign (+1 upward through the line, -1 downward) on each open
    # segment between consecutive contact points, left to right
    crossings: tuple[int, ...]
    breakpoints: tuple[float, ...] = ()


def transversality(nf: NormalForm, line: Line) -> Poly1:
    """``T(x) = field . normal`` along ``y = m x + k`` with normal ``(-m, 1)``,
    or ``T(y) = x'`` along a vertical line.

    It is a polynomial of degree at most 2 in the line parameter.
    """
    xs = (-1.0, 0.0, 1.0)
    vals = []
    for x in xs:
        px, py = nf.field(*line.point(x))
        vals.append(px if line.is_vertical else py - line.slope * px)
    # interpolate through three nodes
    c0 = vals[1]
    c2 = (vals[0] + vals[2]) / 2.0 - vals[1]
    c1 = (vals[2] - vals[0]) / 2.0
    return Poly1((c0, c1, c2))


def line_contact_analysis(nf: NormalForm, line: Line, *, max_contacts: int | None = None,
                          tol: float = 1e-9) -> ContactReport:
    """Contact points of ``nf`` with ``line`` and the crossing direction between them.

    Raises :class:`LemmaViolation` when more contact points are found than
    ``max_contacts`` allows.
    """
    T = transversality(nf, line)
    scale = 1.0 + max((abs(v) for v in T.coeffs), default=0.0)
    if all(abs(v) <= tol * scale for v in T.coeffs):
        return ContactReport(line, True, (), (), ())
    T = Poly1([0.0 if abs(v) <= tol * scale else v for v in T.coeffs])
    if T.degree == 0:
        xs = []
    else:
        rs = roots_quadratic(T, SignPolicy(tol * scale))
        xs = [] if rs.is_complex else sorted(set(rs.roots))
    if max_contacts is not None and len(xs) > max_contacts:
        raise LemmaViolation(f"{len(xs)} contact points on {line.role}, at most {max_contacts} allowed")
    probes = []
    if not xs:
        probes = [0.0]
    else:
        probes.append(xs[0] - 1.0)
        probes += [(u + v) / 2.0 for u, v in zip(xs, xs[1:])]
        probes.append(xs[-1] + 1.0)
    crossings = tuple(int(np.sign(T(x))) for x in probes)
    return ContactReport(line, False, tuple(line.point(x) for x in xs), crossings, tuple(xs))


def line_through(p: tuple[float, float], q: tuple[float, float], role: str = "line") -> Line:
    if p[0] == q[0]:
        if p[1] == q[1]:
            raise ValueError("the two points coincide")
        return Line.vertical(p[0], role)
    m = (q[1] - p[1]) / (q[0] - p[0])
    return Line(m, p[1] - m * p[0], role)


# -- skeleton graphs ------------------------------------------------------------

def summarize(skel: SeparatrixSkeleton) -> dict:
    """Plain-data form of a skeleton, as stored in the catalog."""
    nodes = [{"label": e.label, "infinite": e.infinite, "type": e.local_type.value,
              "signature": e.signature(), "disk": [round(float(e.disk[0]), 9), round(float(e.disk[1]), 9)]}
             for e in skel.nodes]
    edges = [{"source": e.source, "target": e.target, "kind": e.kind, "owner": e.owner}
             for e in skel.edges if e.kind != "line"]
    edges.sort(key=lambda e: (e["kind"], e["owner"] or "", e["source"] or "?", e["target"] or "?"))
    return {"nodes": nodes, "edges": edges, "equator": list(skel.equator_order),
            "unresolved": list(skel.unresolved)}


def skeleton_graph(summary: dict) -> nx.MultiDiGraph:
    G = nx.MultiDiGraph()
    for n in summary["nodes"]:
        G.add_node(n["label"], sig=("inf" if n["infinite"] else "fin", n["signature"]))
    k = 0
    for e in summary["edges"]:
        s, t = e["source"], e["target"]
        # every unresolved end is its own unmatched vertex
        if s is None:
            s = f"?{k}"
            k += 1
            G.add_node(s, sig=("unresolved", ""))
        if t is None:
            t = f"?{k}"
            k += 1
            G.add_node(t, sig=("unresolved", ""))
        G.add_edge(s, t, kind=e["kind"])
    return G


def _cyclic_equal(a: list, b: list) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    for seq in (b, b[::-1]):
        for r in range(n):
            if all(a[i] == seq[(i + r) % n] for i in range(n)):
                return True
    return False


def skeletons_match(s1: dict, s2: dict) -> bool:
    """Labelled-graph isomorphism that also preserves the cyclic order of the
    equator up to rotation and reflection."""
    G1, G2 = skeleton_graph(s1), skeleton_graph(s2)
    if (G1.number_of_nodes(), G1.number_of_edges()) != (G2.number_of_nodes(), G2.number_of_edges()):
        return False
    nm = iso.categorical_node_match("sig", None)
    em = iso.categorical_multiedge_match("kind", None)
    gm = iso.MultiDiGraphMatcher(G1, G2, node_match=nm, edge_match=em)
    for mapping in gm.isomorphisms_iter():
        if _cyclic_equal([mapping[v] for v in s1["equator"]], list(s2["equator"])):
            return True
    return False


# -- catalog -------------------------------------------------------------------

CATALOG_SCHEMA = 1
SEARCH_SECONDS = 60.0


def fixture_form(fx: Fixture, params=None) -> NormalForm:
    # two printed tuples break the side condition; NormalForm does not check it
    return NormalForm(fx.family, tuple(params if params is not None else fx.params))


def trace_summary(nf: NormalForm, policy: SignPolicy = STRICT) -> dict:
    eqs = all_equilibria(nf, policy)
    return summarize(trace_separatrices(nf, eqs))


@dataclass
class CatalogEntry:
    pid: int
    family: str
    params: tuple[float, ...] | None
    skeleton: dict | None
    source: str  # "fixture", "search" or "gap"
    note: str = ""

    def to_json(self) -> dict:
        return {"id": self.pid, "family": self.family, "params": list(self.params) if self.params else None,
                "source": self.source, "note": self.note, "skeleton": self.skeleton}

    @classmethod
    def from_json(cls, d: dict) -> "CatalogEntry":
        return cls(d["id"], d["family"], tuple(d["params"]) if d["params"] else None,
                   d["skeleton"], d["source"], d.get("note", ""))


@dataclass
class Catalog:
    entries: dict[int, CatalogEntry]
    version: str = __version__
    schema: int = CATALOG_SCHEMA

    def skeleton(self, pid: int) -> dict:
        e = self.entries.get(pid)
        if e is None or e.skeleton is None:
            raise CatalogGap(f"P{pid}: no representative in the catalog"
                             + (f" ({e.note})" if e is not None and e.note else ""))
        return e.skeleton

    def gaps(self) -> list[int]:
        return sorted(k for k, e in self.entries.items() if e.skeleton is None)

    def to_json(self) -> dict:
        return {"schema": self.schema, "version": self.version,
                "entries": [self.entries[k].to_json() for k in sorted(self.entries)]}

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n")
        tmp.replace(path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Catalog":
        data = json.loads(Path(path).read_text())
        if data.get("schema") != CATALOG_SCHEMA:
            raise ValueError(f"catalog schema {data.get('schema')} is not {CATALOG_SCHEMA}")
        entries = {d["id"]: CatalogEntry.from_json(d) for d in data["entries"]}
        return cls(entries, data.get("version", ""), data["schema"])


def default_catalog_path() -> Path:
    env = os.environ.get("RICCATI_CATALOG")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "riccati" / f"catalog-v{CATALOG_SCHEMA}-{__version__}.json"


def _differs_from(summary: dict, others: Iterable[dict]) -> bool:
    if summary["unresolved"]:
        return False
    return not any(skeletons_match(summary, o) for o in others)


def _in_row(family: str, prm, pid: int) -> bool:
    return pid in table_row(family, discriminants(prm), STRICT).candidates


def _search(family: str, path, pid: int, others: list[dict], deadline: float, samples: int = 41):
    """Scan a 1-parameter path for a skeleton unlike any of ``others``.

    ``path(t)`` maps ``t`` in [0, 1] to parameters; points outside the table
    row of ``pid`` are skipped.  The scan visits a coarse grid, then bisects
    between neighbouring grid points whose skeletons differ.  Transitions
    are often a single connection, so every hit and every bisection limit
    is also tried rounded to a few decimals, and the shortest distinct
    rounding is preferred.
    """
    seen = {}

    def evaluate(prm):
        prm = tuple(float(v) for v in prm)
        if prm not in seen:
            s = None
            if _in_row(family, prm, pid):
                try:
                    s = trace_summary(NormalForm(family, prm))
                except Exception:  # noqa: BLE001 - a failed probe is just skipped
                    s = None
            seen[prm] = s
        return seen[prm]

    def distinct(prm):
        s = evaluate(prm)
        return s is not None and _differs_from(s, others)

    free = [abs(u - v) > 0 for u, v in zip(path(0.0), path(1.0))]

    def rounded(prm):
        # only the coordinates that move along the path are rounded
        for nd in range(0, 9):
            q = tuple(round(v, nd) if f else v for v, f in zip(prm, free))
            if distinct(q):
                return q, seen[tuple(float(v) for v in q)]
        return None

    k = free.index(True)
    x0, x1 = path(0.0)[k], path(1.0)[k]

    def shortest(lo, hi):
        # the point of [lo, hi] whose moving coordinate has the fewest decimals
        a, b = sorted((x0 + lo * (x1 - x0), x0 + hi * (x1 - x0)))
        for nd in range(0, 9):
            x = math.ceil(a * 10 ** nd - 1e-9) / 10 ** nd
            if x <= b:
                prm = path((x - x0) / (x1 - x0))
                return tuple(float(round(v, nd)) if f else float(v) for v, f in zip(prm, free))
        return None

    def probe(t):
        prm = tuple(round(v, 12) for v in path(t))
        return prm, evaluate(prm)

    ts = [float(t) for t in np.linspace(0.0, 1.0, samples)]
    for t in ts:
        if time.monotonic() > deadline:
            return None
        prm, s = probe(t)
        if s is not None and _differs_from(s, others):
            return rounded(prm) or (prm, s)
    for t0, t1 in zip(ts, ts[1:]):
        a, b = probe(t0)[1], probe(t1)[1]
        if a is None or b is None or skeletons_match(a, b):
            continue
        lo, hi = t0, t1
        for _ in range(40):
            if time.monotonic() > deadline:
                return None
            short = shortest(lo, hi)
            if short is not None and distinct(short):
                return short, seen[short]
            mid = 0.5 * (lo + hi)
            prm, s = probe(mid)
            if s is None:
                break
            if _differs_from(s, others):
                return rounded(prm) or (prm, s)
            if skeletons_match(s, a):
                lo = mid
            else:
                hi = mid
        hit = rounded(path(0.5 * (lo + hi)))
        if hit is not None:
            return hit
    return None


def _decimal_path(p, q, t: float, digits: int = 10):
    """Point of the segment ``p -> q`` computed in decimal arithmetic.

    Exact-decimal inputs keep linear relations such as ``c - d + e = 0``
    exactly under the strict sign policy.
    """
    from decimal import Decimal

    tt = Decimal(repr(round(t, digits)))
    return tuple(float(Decimal(repr(float(a))) + tt * (Decimal(repr(float(b))) - Decimal(repr(float(a)))))
                 for a, b in zip(p, q))


def _search_paths(fixtures: dict[int, Fixture]):
    """Continuation paths for the portraits printed without a usable tuple."""
    p7, p9 = np.array(fixtures[7].params, float), np.array(fixtures[9].params, float)
    return {
        # dF2 = 0 stays exact along the segment (c - d + e is constant)
        8: ("I", lambda t: _decimal_path(p7, p9, t), (6, 7, 9)),
        # d free in (1, 1, 0.2, d, 0.2)
        61: ("III", lambda t: (1.0, 1.0, 0.2, -20.0 + 40.0 * t, 0.2), (59, 60)),
        # a free in (a, 2, 0.2, 1, 1); dI2 > 0 needs |a| > sqrt(0.8)
        64: ("III", lambda t: (-20.0 + 40.0 * t, 2.0, 0.2, 1.0, 1.0), (62, 63)),
    }


def build_catalog(fixtures: Sequence[Fixture] | None = None, *, search: bool = True,
                  search_seconds: float = SEARCH_SECONDS, workers: int = 1) -> Catalog:
    """Trace every complete fixture and look for the missing representatives."""
    fixtures = list(fixtures if fixtures is not None else load_fixtures())
    by_id = {f.id: f for f in fixtures}
    complete = [f for f in fixtures if f.complete]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            summaries = list(ex.map(_fixture_summary, complete))
    else:
        summaries = [_fixture_summary(f) for f in complete]
    entries = {f.id: CatalogEntry(f.id, f.family, tuple(f.params), s, "fixture")
               for f, s in zip(complete, summaries)}
    deadline = time.monotonic() + search_seconds
    for pid, (fam, path, rivals) in _search_paths(by_id).items():
        if pid in entries:
            continue
        note = by_id[pid].reason if pid in by_id else ""
        found = None
        if search:
            others = [entries[r].skeleton for r in rivals if r in entries]
            found = _search(fam, path, pid, others, deadline)
        if found is None:
            entries[pid] = CatalogEntry(pid, fam, None, None, "gap",
                                        note + ("; continuation search found no distinct skeleton" if search else ""))
        else:
            prm, s = found
            entries[pid] = CatalogEntry(pid, fam, prm, s, "search", note)
    return Catalog(entries)


def _fixture_summary(f: Fixture) -> dict:
    return trace_summary(fixture_form(f))


_CATALOG: Catalog | None = None


def canonical_catalog(path: str | os.PathLike | None = None, *, rebuild: bool = False, **kw) -> Catalog:
    """The catalog, read from its cache file or built (and cached) on demand."""
    global _CATALOG
    if _CATALOG is not None and path is None and not rebuild:
        return _CATALOG
    p = Path(path) if path is not None else default_catalog_path()
    cat = None
    if p.exists() and not rebuild:
        try:
            cat = Catalog.load(p)
        except (ValueError, KeyError, json.JSONDecodeError):
            cat = None
    if cat is None:
        cat = build_catalog(**kw)
        try:
            cat.save(p)
        except OSError:
            pass
    if path is None:
        _CATALOG = cat
    return cat


# -- classification ----------------------------------------------------------

@dataclass
class Classification:
    portrait: int
    row: TableRow
    method: str  # "table", "subcase" or "skeleton"
    discriminants: Discriminants
    subcase: SubcaseEvidence | None = None
    matched: tuple[int, ...] = ()
    skeleton: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def portrait_id(self) -> PortraitId:
        return PortraitId(self.portrait, portrait_families(self.portrait))

    def evidence(self) -> dict:
        out = {"row": self.row.index, "family": self.row.family, "conditions": self.row.describe(),
               "candidates": [f"P{c}" for c in self.row.candidates], "method": self.method}
        if self.subcase is not None:
            sc = self.subcase
            out["subcase"] = {"r1(q1)": sc.r1_q1, "r2(p2)": sc.r2_p2, "case": sc.case}
            if sc.lhs is not None:
                out["subcase"].update({"lhs": sc.lhs, "rhs": sc.rhs})
        if self.matched:
            out["matched"] = [f"P{c}" for c in self.matched]
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def classify(nf: NormalForm, policy: SignPolicy = STRICT, *, catalog: Catalog | None = None) -> Classification:
    """Phase portrait of ``nf`` with the evidence that selected it."""
    d = discriminants(nf.params)
    row = table_row(nf.family, d, policy)
    if len(row.candidates) == 1:
        return Classification(row.candidates[0], row, "table", d)
    notes = []
    if nf.family == "I" and row.candidates == (1, 2, 3, 4, 5):
        try:
            pid, ev = subcase_family_i_row1(nf.params, d, policy)
            return Classification(pid, row, "subcase", d, subcase=ev)
        except ImpossibleCase as ex:
            notes.append(f"subcase test inconclusive: {ex}")
    catalog = catalog or canonical_catalog()
    summary = trace_summary(nf, policy)
    if summary["unresolved"]:
        raise NoMatch(f"unresolved separatrices {summary['unresolved']}; cannot match row {row.describe()}")
    matched, gaps = [], []
    for c in row.candidates:
        try:
            ref = catalog.skeleton(c)
        except CatalogGap as ex:
            gaps.append(str(ex))
            continue
        if skeletons_match(summary, ref):
            matched.append(c)
    if len(matched) > 1:
        raise AmbiguousMatch(f"skeleton matches {', '.join(f'P{c}' for c in matched)}", matched)
    if not matched:
        extra = list(gaps)
        if nf.family == "IV" and row.candidates == (72, 73, 74):
            # x' = 1 makes the points at infinity nilpotent (v' = -v^3) rather
            # than semi-hyperbolic as for x' = x^2 + 1; some of these systems
            # have fewer separatrices at infinity than any of P72-P74
            extra.append("family IV with dI2=0 can realise a portrait outside P72-P74 "
                         "(nilpotent points at infinity)")
        raise NoMatch(f"skeleton matches none of {', '.join(f'P{c}' for c in row.candidates)}"
                      + (f"; {'; '.join(extra)}" if extra else ""))
    notes += gaps
    return Classification(matched[0], row, "skeleton", d, matched=tuple(matched), skeleton=summary, notes=notes)


def finite_point_map(nf: NormalForm, policy: SignPolicy = STRICT) -> dict[str, tuple[float, float]]:
    return {lab: (x, y) for lab, x, y, _ in finite_points(nf, policy)}
