import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from riccati.errors import BernoulliInput, DegreeViolation, LienardInput, SideConditionViolated
from riccati.normalform import (GeneralRiccati, normal_form, raw_from_normal_form, reduce, validate)

coef = st.floats(-4, 4, allow_nan=False).map(lambda v: round(v, 3))


def conjugacy_factor(raw, nf, pts):
    """Ratios DPhi F_raw / F_nf at the given points (both components)."""
    ch = nf.change
    out = []
    for x, y in pts:
        fx, fy = raw.field(x, y)
        gx, gy = nf.field(*ch.forward(x, y))
        for num, den in ((ch.x_scale * fx, gx), (ch.y_scale * fy, gy)):
            if abs(den) > 1e-6:
                out.append(num / den)
    return out


def test_p1_raw_is_accepted():
    raw = GeneralRiccati.from_coeffs((0, 1, 1), 1, (), (-0.25, 3.75))
    assert validate(raw) is raw
    nf = reduce(raw)
    assert nf.family == "I"
    assert nf.params == pytest.approx((0, 0, 0, 3.75, -0.25))
    assert nf.change.is_identity()


def test_rejections():
    with pytest.raises(BernoulliInput):
        validate(GeneralRiccati.from_coeffs((0, 1, 1), 1, (1,), ()))
    with pytest.raises(LienardInput, match="Liénard system: out of scope"):
        validate(GeneralRiccati.from_coeffs((0, 1, 1), 0, (1,), (1,)))
    with pytest.raises(DegreeViolation):
        validate(GeneralRiccati.from_coeffs((0, 1, 1, 1), 1, (), (1,)))
    with pytest.raises(DegreeViolation):
        validate(GeneralRiccati.from_coeffs((0, 1), 1, (0, 0, 1), (1,)))
    with pytest.raises(SideConditionViolated):
        normal_form("I", (1, 1, 0, 0, 0))


@pytest.mark.parametrize("alpha, gamma, family, tau", [
    ((10, -7, 1), (1,), "I", 3.0),
    ((5, -2, 1), (0, 1), "V", 2.0),
])
def test_reduce_examples(alpha, gamma, family, tau):
    raw = GeneralRiccati.from_coeffs(alpha, 1, (), gamma)
    nf = reduce(raw)
    assert nf.family == family
    assert abs(nf.change.time_scale) == pytest.approx(tau)
    pts = [(0.3 * i - 2.9, 0.7 * i - 6.1) for i in range(20)]
    ratios = conjugacy_factor(raw, nf, pts)
    assert ratios == pytest.approx([nf.change.time_scale] * len(ratios), rel=1e-9)


@settings(max_examples=150, deadline=None)
@given(st.lists(coef, min_size=1, max_size=3), coef, st.lists(coef, max_size=2),
       st.lists(coef, min_size=1, max_size=3), st.lists(st.floats(-3, 3), min_size=2, max_size=2))
def test_reduce_is_a_conjugacy(alpha, k, beta, gamma, pt):
    assume(any(alpha) and k != 0 and any(gamma))
    assume(abs(alpha[-1]) > 1e-2)
    raw = GeneralRiccati.from_coeffs(alpha, k, beta, gamma)
    try:
        nf = reduce(raw)
    except SideConditionViolated:
        return
    ch = nf.change
    x, y = pt
    fx, fy = raw.field(x, y)
    gx, gy = nf.field(*ch.forward(x, y))
    scale = 1 + abs(gx) + abs(gy)
    assert math.isclose(ch.x_scale * fx, ch.time_scale * gx, abs_tol=1e-8 * scale, rel_tol=1e-8)
    assert math.isclose(ch.y_scale * fy, ch.time_scale * gy, abs_tol=1e-8 * scale, rel_tol=1e-8)


@pytest.mark.parametrize("family", ["I", "II", "III", "IV", "V"])
def test_normal_form_round_trip(family):
    nf = normal_form(family, (0.5, -1, 2, 0.25, 1))
    back = reduce(raw_from_normal_form(nf))
    assert back.family == family
    assert back.params == pytest.approx(nf.params)
