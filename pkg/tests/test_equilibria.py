import math
import random

import pytest

from oracles import finite_closed_form, newton_roots
from riccati.algebra import STRICT, TOLERANT
from riccati.equilibria import LocalType, classify_finite, finite_equilibria, finite_points
from riccati.normalform import normal_form

P1 = (0, 0, 0, 3.75, -0.25)


def by_label(eqs):
    return {e.label: e for e in eqs}


def test_p1_points():
    pts = sorted((x, y) for _, x, y, _ in finite_points(normal_form("I", P1)))
    assert pts == [(-1, -2), (-1, 2), (0, -0.5), (0, 0.5)]


def test_families_without_finite_points():
    assert finite_equilibria(normal_form("IV", (0.3, 1, -2, 5, 1))) == []
    assert finite_equilibria(normal_form("V", (0.3, 1, -2, 5, 1))) == []


def test_merged_point_p46():
    eqs = finite_equilibria(normal_form("II", (1, 1, -1, 0, 0.25)), STRICT)
    assert [(e.label, e.location, e.merged) for e in eqs] == [("q12", (0.0, -0.5), True)]
    assert eqs[0].eigen.values() == (0.0, 0.0)
    assert eqs[0].local_type is LocalType.NILPOTENT_SADDLE_NODE


def test_p1_local_types():
    nf = normal_form("I", P1)
    eqs = by_label(finite_equilibria(nf))
    assert eqs["q1"].location == (0.0, 0.5)
    assert eqs["q1"].eigen.values() == (1.0, 1.0)
    assert classify_finite(nf, eqs["q1"]) is LocalType.UNSTABLE_NODE
    assert eqs["p2"].location == (-1.0, -2.0)
    assert sorted(eqs["p2"].eigen.values()) == [-4.0, -1.0]
    assert classify_finite(nf, eqs["p2"]) is LocalType.STABLE_NODE
    assert eqs["q2"].local_type is LocalType.SADDLE and eqs["p1"].local_type is LocalType.SADDLE


def test_semi_hyperbolic_finite_point():
    # family I with dF1 = 0 at x = 0: eigenvalues (1, 0)
    nf = normal_form("I", (0, 0, 0, 3.75, 0))
    eqs = by_label(finite_equilibria(nf, STRICT))
    assert eqs["q12"].hyperbolicity == "semi-hyperbolic"
    assert classify_finite(nf, eqs["q12"]) is LocalType.SEMI_HYPERBOLIC_SADDLE_NODE


@pytest.mark.parametrize("family", ["I", "II", "III"])
def test_newton_oracle_and_eigenvalues(family):
    rng = random.Random(7 + ord(family[-1]))
    for _ in range(25):
        prm = tuple(round(rng.uniform(-1.5, 1.5), 3) for _ in range(5))
        nf = normal_form(family, prm)
        got = finite_equilibria(nf, TOLERANT)
        simple = [e for e in got if not e.merged]
        expect = finite_closed_form(family, prm)
        assert len(simple) == len(expect)
        for e, (x, y, lam) in zip(simple, expect):
            assert e.location == pytest.approx((x, y), abs=1e-12)
            assert sorted(e.eigen.values()) == pytest.approx(sorted(lam), abs=1e-9)
        found = newton_roots(family, prm)
        for rx, ry in found:
            assert min(math.hypot(rx - e.location[0], ry - e.location[1]) for e in got) < 1e-6
        for e in got:
            assert min(math.hypot(rx - e.location[0], ry - e.location[1]) for rx, ry in found) < 1e-6
