import random

import numpy as np
import pytest

from riccati.compactify import DiskPoint, all_equilibria
from riccati.flow import Termination, integrate, return_detections, sample_orbits, trace_separatrices
from riccati.normalform import normal_form

P1 = normal_form("I", (0, 0, 0, 3.75, -0.25))

# traced once and checked against the hand picture: saddles q2 and p1, the
# invariant lines x = 0 and x = -1, attracting n and u2
P1_EDGES = [
    ("p1", "n", "separatrix"), ("p1", "p2", "separatrix"), ("q1", "p1", "separatrix"),
    ("q1", "q2", "separatrix"), ("q2", "n", "separatrix"), ("q2", "p2", "separatrix"),
    ("s", "q2", "separatrix"), ("s", "u1", "separatrix"), ("s", "u2", "equator"),
    ("s", "v1", "equator"), ("u1", "n", "equator"), ("u1", "u2", "equator"),
    ("v1", "p2", "separatrix"), ("v2", "n", "equator"), ("v2", "p1", "separatrix"),
    ("v2", "v1", "equator"),
]


def test_forward_orbit_goes_to_n():
    t = integrate(P1, DiskPoint.affine(0.5, 0.0))
    assert t.termination is Termination.REACHED_EQUILIBRIUM and t.omega_limit == "n"


def test_invariant_line_is_kept():
    for direction, limit in (("forward", "q2"), ("backward", "q1")):
        t = integrate(P1, DiskPoint.affine(0.0, 0.1), direction)
        assert np.abs(t.samples[:, 0]).max() < 1e-9
        assert (t.omega_limit if direction == "forward" else t.alpha_limit) == limit


def test_family_iv_escapes_to_infinity():
    nf = normal_form("IV", (0.3, 1, -2, 0.5, 1))
    for start in ((0, 0), (3, -2), (-5, 1)):
        t = integrate(nf, DiskPoint.affine(*start))
        assert t.omega_limit is not None
        assert np.hypot(*t.samples[-1, :2]) == pytest.approx(1.0, abs=1e-6)


def test_bad_direction():
    with pytest.raises(ValueError):
        integrate(P1, DiskPoint.affine(0.5, 0.0), "sideways")


def test_p1_skeleton():
    sk = trace_separatrices(P1)
    assert len(sk.nodes) == 10
    assert sum(not e.infinite for e in sk.nodes) == 4
    assert sk.unresolved == []
    assert sk.edge_multiset() == P1_EDGES


def test_only_n_and_s():
    sk = trace_separatrices(normal_form("V", (1, 1, 2, 0, 0.2)))
    assert sorted(e.label for e in sk.nodes) == ["n", "s"]
    assert sk.separatrices() == []
    assert sk.edge_multiset() == [("s", "n", "equator")] * 2


def test_tracing_is_deterministic():
    a = trace_separatrices(P1)
    b = trace_separatrices(P1)
    for ea, eb in zip(a.edges, b.edges):
        assert (ea.source, ea.target, ea.kind) == (eb.source, eb.target, eb.kind)
        if ea.trajectory is not None:
            assert np.array_equal(ea.trajectory.samples, eb.trajectory.samples)


def test_no_returns_on_sample_orbits():
    rng = random.Random(2)
    for family in ("I", "III", "V"):
        nf = normal_form(family, tuple(round(rng.uniform(-2, 2), 2) for _ in range(5)))
        for t in sample_orbits(nf, all_equilibria(nf), grid=3):
            assert return_detections(t) == 0


def test_return_detector_sees_a_circle():
    from riccati.flow import Trajectory

    th = np.linspace(0, 4 * np.pi, 4001)
    pts = np.column_stack((0.5 * np.cos(th), 0.5 * np.sin(th), np.full_like(th, np.sqrt(0.75))))
    t = Trajectory(pts, th, 1, Termination.LEFT_TIME_BUDGET, None, 0.0, False)
    assert return_detections(t) > 0
