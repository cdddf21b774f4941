"""SVG drawing of a portrait on the Poincaré disk.

Points are taken from the sphere samples (the disk is the projection of the
upper hemisphere), written with four decimals and with y negated so that the
picture has the usual mathematical orientation inside the viewBox
``-1.05 -1.05 2.1 2.1``.  Output is a pure function of the input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable
from xml.sax.saxutils import escape

import numpy as np

from .equilibria import LocalType
from .flow import Edge, SeparatrixSkeleton, Trajectory

VIEWBOX = "-1.05 -1.05 2.1 2.1"


@dataclass(frozen=True)
class RenderSpec:
    size_px: int = 800
    orbit_grid: int = 8
    orbit_width: float = 0.003
    separatrix_width: float = 0.007
    equator_width: float = 0.006
    glyph_radius: float = 0.022
    arrow_size: float = 0.028
    show_labels: bool = True

    def __post_init__(self):
        if self.size_px <= 0:
            raise ValueError("size_px must be positive")
        if self.orbit_grid < 0:
            raise ValueError("orbit_grid must be non-negative")


def _num(v: float) -> str:
    s = f"{v:.4f}"
    return "0.0000" if s == "-0.0000" else s


def _xy(p) -> str:
    return f"{_num(p[0])},{_num(-p[1])}"


def _clip(pts: np.ndarray) -> np.ndarray:
    r = np.hypot(pts[:, 0], pts[:, 1])
    scale = np.where(r > 1.0, 1.0 / np.maximum(r, 1e-300), 1.0)
    return pts * scale[:, None]


def _path_data(pts: np.ndarray) -> str | None:
    words = []
    last = None
    for p in _clip(pts):
        w = _xy(p)
        if w != last:
            words.append(w)
            last = w
    if len(words) < 2:
        return None
    return "M" + " L".join(words)


def _arrow(pts: np.ndarray, forward: bool, size: float) -> str | None:
    """Triangle at the arc-length midpoint pointing in the time direction."""
    pts = _clip(pts)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    total = float(seg.sum())
    if total < 4 * size:
        return None
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    i = int(np.searchsorted(cum, 0.5 * total))
    i = min(max(i, 1), len(pts) - 1)
    t = pts[i] - pts[i - 1]
    if not forward:
        t = -t
    nt = math.hypot(t[0], t[1])
    if nt == 0.0:
        return None
    t = t / nt
    n = np.array([-t[1], t[0]])
    p = pts[i]
    tip = p + 0.6 * size * t
    b1 = p - 0.4 * size * t + 0.35 * size * n
    b2 = p - 0.4 * size * t - 0.35 * size * n
    return f"M{_xy(tip)} L{_xy(b1)} L{_xy(b2)} Z"


def _glyph(eq, r: float) -> str:
    x, y = eq.disk
    cx, cy = _num(x), _num(-y)
    t = eq.local_type
    label = escape(eq.label)
    head = f'<g class="glyph {t.value}" data-label="{label}">'
    if t == LocalType.SADDLE:
        d = r * 0.9
        body = (f'<path d="M{_num(x - d)},{_num(-y - d)} L{_num(x + d)},{_num(-y + d)} '
                f'M{_num(x - d)},{_num(-y + d)} L{_num(x + d)},{_num(-y - d)}" '
                f'stroke="#000" stroke-width="{_num(r / 3)}"/>')
    elif t == LocalType.STABLE_NODE:
        body = f'<circle cx="{cx}" cy="{cy}" r="{_num(r)}" fill="#000"/>'
    elif t == LocalType.UNSTABLE_NODE:
        body = (f'<circle cx="{cx}" cy="{cy}" r="{_num(r)}" fill="#fff" stroke="#000" '
                f'stroke-width="{_num(r / 3)}"/>')
    else:
        # saddle-nodes: half-filled disc, with a square outline when the
        # linear part is nilpotent or zero
        shape = (f'<rect x="{_num(x - r)}" y="{_num(-y - r)}" width="{_num(2 * r)}" '
                 f'height="{_num(2 * r)}"' if t != LocalType.SEMI_HYPERBOLIC_SADDLE_NODE
                 else f'<circle cx="{cx}" cy="{cy}" r="{_num(r)}"')
        body = (f'{shape} fill="#fff" stroke="#000" stroke-width="{_num(r / 3)}"/>'
                f'<path d="M{_num(x)},{_num(-y - r)} A{_num(r)},{_num(r)} 0 0 1 {_num(x)},{_num(-y + r)} Z" '
                f'fill="#000"/>')
    return head + body + "</g>"


def _equator_arc(skel: SeparatrixSkeleton, i: int, e: Edge, size: float) -> tuple[str, str]:
    """Path and arrow of the ``i``-th equator arc.

    Arc ``i`` runs counterclockwise from ``equator_order[i]`` to the next
    point; the arrow follows the edge direction.
    """
    order = skel.equator_order
    a = skel.node(order[i]).disk
    b = skel.node(order[(i + 1) % len(order)]).disk
    ta = math.atan2(a[1], a[0])
    span = (math.atan2(b[1], b[0]) - ta) % (2 * math.pi) or 2 * math.pi
    ts = ta + span * np.linspace(0.0, 1.0, max(8, int(span * 40)))
    pts = np.column_stack((np.cos(ts), np.sin(ts)))
    forward = e.source == order[i]
    return _path_data(pts), _arrow(pts, forward, size)


def render_disk(skeleton: SeparatrixSkeleton, extra_orbits: Iterable[Trajectory] = (),
                spec: RenderSpec = RenderSpec()) -> str:
    """SVG text of the skeleton over a set of sample orbits.

    Layers, bottom to top: equator, sample orbits, separatrices, glyphs,
    labels.  Separatrices on invariant lines and edges with an unresolved
    end are dashed.
    """
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.size_px}" '
           f'height="{spec.size_px}" viewBox="{VIEWBOX}">',
           '<rect x="-1.05" y="-1.05" width="2.1" height="2.1" fill="#fff"/>',
           f'<circle class="equator" cx="0" cy="0" r="1" fill="none" stroke="#000" '
           f'stroke-width="{_num(spec.equator_width)}"/>']

    out.append(f'<g class="orbits" fill="none" stroke="#8c8c8c" stroke-width="{_num(spec.orbit_width)}">')
    heads = []
    for tr in extra_orbits:
        pts = tr.disk_points()
        d = _path_data(pts)
        if d is None:
            continue
        out.append(f'<path d="{d}"/>')
        a = _arrow(pts, tr.direction > 0, 0.7 * spec.arrow_size)
        if a:
            heads.append(f'<path d="{a}"/>')
    out.append("</g>")
    out.append('<g class="orbit-arrows" fill="#8c8c8c" stroke="none">')
    out.extend(heads)
    out.append("</g>")

    heads = []
    arcs = [e for e in skeleton.edges if e.kind == "equator"]
    if arcs and len(arcs) == len(skeleton.equator_order):
        out.append(f'<g class="equator-arcs" fill="none" stroke="#000" '
                   f'stroke-width="{_num(spec.equator_width)}">')
        for i, e in enumerate(arcs):
            d, a = _equator_arc(skeleton, i, e, spec.arrow_size)
            out.append(f'<path d="{d}"/>')
            if a:
                heads.append(f'<path class="equator-arrow" fill="#000" d="{a}"/>')
        out.append("</g>")
    out.append(f'<g class="separatrices" fill="none" stroke="#b22222" stroke-width="{_num(spec.separatrix_width)}">')
    for e in skeleton.edges:
        if e.kind == "equator":
            continue
        if e.trajectory is None:
            continue
        pts = e.trajectory.disk_points()
        d = _path_data(pts)
        if d is None:
            continue
        attrs = f' class="{e.kind}"'
        if e.on_line or not e.resolved:
            attrs += ' stroke-dasharray="0.0300,0.0200"'
        if not e.resolved:
            attrs += ' stroke="#e08000"'
        out.append(f'<path{attrs} d="{d}"/>')
        a = _arrow(pts, e.trajectory.direction > 0, spec.arrow_size)
        if a:
            heads.append(f'<path d="{a}"/>')
    out.append("</g>")
    out.append('<g class="separatrix-arrows" fill="#b22222" stroke="none">')
    out.extend(heads)
    out.append("</g>")

    out.append('<g class="equilibria">')
    for eq in skeleton.nodes:
        out.append(_glyph(eq, spec.glyph_radius))
    out.append("</g>")

    if spec.show_labels:
        out.append(f'<g class="labels" font-family="sans-serif" font-size="{_num(2.5 * spec.glyph_radius)}">')
        for eq in skeleton.nodes:
            x, y = eq.disk
            r = math.hypot(x, y)
            # labels of points at infinity go just inside the equator
            if r > 0.99:
                x, y = x * 0.9 - 0.02, y * 0.9 - 0.02
            else:
                x, y = x + 1.2 * spec.glyph_radius, y + 1.2 * spec.glyph_radius
            out.append(f'<text x="{_num(x)}" y="{_num(-y)}">{escape(eq.label)}</text>')
        out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"
