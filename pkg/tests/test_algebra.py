from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riccati.algebra import (STRICT, TOLERANT, Poly1, SignPolicy, as_fraction, discriminants, eig2,
                             roots_quadratic)
from riccati.errors import DegeneratePolynomial

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_roots_symmetric():
    assert roots_quadratic(Poly1((-1, 0, 1)), TOLERANT).roots == (-1.0, 1.0)


def test_roots_equator_polynomial():
    # u^2 + (a - 1) u + c with a = 0, c = 0
    assert roots_quadratic(Poly1((0, -1, 1))).roots == (0.0, 1.0)


def test_double_root():
    rs = roots_quadratic(Poly1((0.25, 1, 1)))
    assert rs.roots == (-0.5,) and rs.multiplicities == (2,)


def test_complex_pair_and_degenerate():
    assert roots_quadratic(Poly1((1, 0, 1))).is_complex
    with pytest.raises(DegeneratePolynomial, match="all reals are roots"):
        roots_quadratic(Poly1((0, 0, 0)))


@given(finite, finite)
def test_roots_of_monic_product(r, s):
    rs = roots_quadratic(Poly1((r * s, -(r + s), 1.0)), SignPolicy(0.0, "strict"))
    expect = sorted((r, s))
    if len(rs.roots) == 2:
        assert rs.roots == pytest.approx(expect, abs=1e-6)
    else:
        assert rs.roots[0] == pytest.approx(expect[0], abs=1e-3)


def test_eig2_examples():
    assert eig2(((1, 0), (0, 1))).values() == (1.0, 1.0)
    ep = eig2(((1, 0), (0, -1)))
    assert ep.values() == (-1.0, 1.0)
    assert abs(ep.v1[1]) == 1.0 and abs(ep.v2[0]) == 1.0


def test_eig2_p1_jacobian():
    from riccati.normalform import normal_form

    nf = normal_form("I", (0, 0, 0, 3.75, -0.25))
    assert eig2(nf.jacobian(0, -0.5)).values() == (-1.0, 1.0)


@settings(max_examples=200)
@given(finite, finite, finite, finite)
def test_eig2_against_numpy(a, b, c, d):
    m = ((a, b), (c, d))
    ep = eig2(m)
    ref = np.sort_complex(np.linalg.eigvals(np.array(m)))
    got = np.sort_complex(np.array(ep.values(), dtype=complex))
    assert np.allclose(got, ref, atol=1e-6 * (1 + np.abs(ref).max()))
    if ep.is_real and ep.lambda1 != ep.lambda2:
        for lam, v in ((ep.lambda1, ep.v1), (ep.lambda2, ep.v2)):
            r = np.array(m) @ np.array(v) - lam * np.array(v)
            assert np.linalg.norm(r) < 1e-6 * (1 + abs(lam) + np.abs(m).max())


@pytest.mark.parametrize("params, expect", [
    ((0, 0, 0, 3.75, -0.25), (1, 16, 1, 0)),
    ((0, 0, 0, 0, 1), (-4, -4, 1, 0)),
    ((0, 0, -2, -2, -0.25), (1, 1, 9, 8)),
])
def test_discriminants(params, expect):
    d = discriminants(params)
    assert d.as_tuple() == pytest.approx(expect, abs=1e-12)
    assert d.exact == tuple(Fraction(v) for v in expect)


def test_strict_policy_is_exact_on_decimals():
    # 0.1, 0.2 are not exact binary fractions; b^2 - 4e with b = 0.2, e = 0.01 is exactly 0
    d = discriminants((0, 0.2, 0, 0, 0.01))
    assert d.signs(STRICT)["dF1"] == 0
    assert as_fraction(0.2) == Fraction(1, 5)


def test_tolerant_band():
    pol = SignPolicy(1e-6, "tolerant")
    assert pol.sign(5e-7) == 0 and pol.sign(-2e-6) == -1
    with pytest.raises(ValueError):
        SignPolicy(-1.0)
