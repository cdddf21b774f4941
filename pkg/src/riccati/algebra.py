"""Low-degree polynomial arithmetic, sign decisions and 2x2 eigenproblems."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DegeneratePolynomial

Params = tuple[float, float, float, float, float]


def as_fraction(x) -> Fraction:
    """Read a float by its shortest decimal repr, so 0.2 becomes 1/5."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class SignPolicy:
    epsilon: float = 1e-9
    mode: str = "tolerant"

    def __post_init__(self):
        if self.mode not in ("tolerant", "strict"):
            raise ValueError(f"unknown sign mode {self.mode!r}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")

    def sign(self, x) -> int:
        if self.mode == "tolerant" and abs(x) <= self.epsilon:
            return 0
        return (x > 0) - (x < 0)


STRICT = SignPolicy(mode="strict")
TOLERANT = SignPolicy()


@dataclass(frozen=True)
class Poly1:
    """Univariate polynomial, constant term first."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Sequence[float]):
        c = [float(v) for v in coeffs]
        while c and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def coeff(self, i: int) -> float:
        return self.coeffs[i] if i < len(self.coeffs) else 0.0

    def derivative(self) -> "Poly1":
        return Poly1([i * c for i, c in enumerate(self.coeffs)][1:])


@dataclass(frozen=True)
class RootSet:
    roots: tuple[float, ...] = ()
    multiplicities: tuple[int, ...] = ()
    complex_pair: tuple[complex, complex] | None = None

    @property
    def is_complex(self) -> bool:
        return self.complex_pair is not None


def roots_quadratic(p: Poly1, policy: SignPolicy = TOLERANT) -> RootSet:
    """Real roots of a polynomial of degree at most two, in increasing order.

    The discriminant sign is decided by ``policy``; a zero discriminant gives
    one root of multiplicity two.  Uses the cancellation-free form
    ``q = -(b + sign(b) sqrt(D)) / 2`` with roots ``q/a`` and ``c/q``.
    """
    if p.degree > 2:
        raise ValueError("degree > 2")
    if p.is_zero():
        raise DegeneratePolynomial("degenerate: all reals are roots")
    if p.degree == 0:
        return RootSet()
    if p.degree == 1:
        return RootSet((-p.coeffs[0] / p.coeffs[1],), (1,))
    c, b, a = p.coeffs
    disc = b * b - 4.0 * a * c
    s = policy.sign(disc)
    if s < 0:
        re = -b / (2.0 * a)
        im = math.sqrt(-disc) / (2.0 * abs(a))
        return RootSet(complex_pair=(complex(re, -im), complex(re, im)))
    if s == 0:
        return RootSet((-b / (2.0 * a),), (2,))
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    r1 = q / a
    r2 = c / q if q != 0.0 else -r1
    lo, hi = sorted((r1, r2))
    return RootSet((lo, hi), (1, 1))


@dataclass(frozen=True)
class Eigenpair:
    lambda1: complex | float
    lambda2: complex | float
    v1: tuple[float, float] | None = None
    v2: tuple[float, float] | None = None

    @property
    def is_real(self) -> bool:
        return not isinstance(self.lambda1, complex)

    def values(self) -> tuple:
        return (self.lambda1, self.lambda2)


def _null_direction(m, lam) -> tuple[float, float]:
    (a, b), (c, d) = m
    # rows of (M - lam I); pick the larger one for conditioning
    r1 = (a - lam, b)
    r2 = (c, d - lam)
    row = r1 if math.hypot(*r1) >= math.hypot(*r2) else r2
    if math.hypot(*row) == 0.0:
        return (1.0, 0.0)
    v = (-row[1], row[0])
    n = math.hypot(*v)
    return (v[0] / n, v[1] / n)


def eig2(m) -> Eigenpair:
    """Eigenvalues (ascending when real) and unit eigenvectors of a 2x2 matrix."""
    (a, b), (c, d) = ((float(m[0][0]), float(m[0][1])), (float(m[1][0]), float(m[1][1])))
    tr = a + d
    det = a * d - b * c
    half = 0.5 * (a - d)
    disc = half * half + b * c
    if disc < 0:
        root = cmath.sqrt(disc)
        return Eigenpair(0.5 * tr - root, 0.5 * tr + root)
    root = math.sqrt(disc)
    mid = 0.5 * tr
    big = mid + math.copysign(root, mid) if mid != 0 else root
    small = det / big if big != 0.0 else mid - root
    l1, l2 = sorted((big, small))
    if l1 == l2:
        if b == 0.0 and c == 0.0:
            return Eigenpair(l1, l2, (1.0, 0.0), (0.0, 1.0))
        v = _null_direction(((a, b), (c, d)), l1)
        return Eigenpair(l1, l2, v, v)
    return Eigenpair(l1, l2, _null_direction(((a, b), (c, d)), l1),
                     _null_direction(((a, b), (c, d)), l2))


@dataclass(frozen=True)
class Discriminants:
    dF1: float
    dF2: float
    dI1: float
    dI2: float
    exact: tuple[Fraction, Fraction, Fraction, Fraction] | None = field(default=None, compare=False)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.dF1, self.dF2, self.dI1, self.dI2)

    def signs(self, policy: SignPolicy = TOLERANT) -> dict[str, int]:
        """Sign of each discriminant; strict mode uses the exact decimal values."""
        vals = self.exact if (policy.mode == "strict" and self.exact is not None) else self.as_tuple()
        return {k: policy.sign(v) for k, v in zip(("dF1", "dF2", "dI1", "dI2"), vals)}


def discriminants(params: Sequence[float]) -> Discriminants:
    a, b, c, d, e = (float(v) for v in params)
    fa, fb, fc, fd, fe = (as_fraction(v) for v in params)
    exact = (
        fb * fb - 4 * fe,
        (fb - fa) ** 2 - 4 * (fc - fd + fe),
        (fa - 1) ** 2 - 4 * fc,
        fa * fa - 4 * fc,
    )
    return Discriminants(
        dF1=b * b - 4.0 * e,
        dF2=(b - a) ** 2 - 4.0 * (c - d + e),
        dI1=(a - 1.0) ** 2 - 4.0 * c,
        dI2=a * a - 4.0 * c,
        exact=exact,
    )
