"""Validation of raw Riccati systems and reduction to the five normal families.

A raw system is ``x' = alpha2(x), y' = k y^2 + beta1(x) y + gamma2(x)``.  The
reduction uses ``x1 = x_scale * (x - x_shift)``, ``y1 = y_scale * y`` and
``T = time_scale * t``, with ``y_scale = k / time_scale`` so that the ``y1^2``
coefficient becomes 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Params, Poly1, SignPolicy, TOLERANT, roots_quadratic
from .errors import (BernoulliInput, DegreeViolation, LienardInput,
                     SideConditionViolated)

FAMILIES = ("I", "II", "III", "IV", "V")

# x' = P(x) for each family, as {(i, j): coeff} of x^i y^j
X_FIELDS: dict[str, dict[tuple[int, int], float]] = {
    "I": {(2, 0): 1.0, (1, 0): 1.0},
    "II": {(2, 0): 1.0},
    "III": {(1, 0): 1.0},
    "IV": {(0, 0): 1.0},
    "V": {(2, 0): 1.0, (0, 0): 1.0},
}

# vertical invariant lines x = const of each family
INVARIANT_LINES: dict[str, tuple[float, ...]] = {
    "I": (0.0, -1.0), "II": (0.0,), "III": (0.0,), "IV": (), "V": (),
}


@dataclass(frozen=True)
class GeneralRiccati:
    alpha2: Poly1
    k: float
    beta1: Poly1
    gamma2: Poly1

    @classmethod
    def from_coeffs(cls, alpha2: Sequence[float], k: float, beta1: Sequence[float],
                    gamma2: Sequence[float]) -> "GeneralRiccati":
        return cls(Poly1(alpha2), float(k), Poly1(beta1), Poly1(gamma2))

    def field(self, x: float, y: float) -> tuple[float, float]:
        return (self.alpha2(x), self.k * y * y + self.beta1(x) * y + self.gamma2(x))


@dataclass(frozen=True)
class CoordinateChange:
    x_shift: float = 0.0
    x_scale: float = 1.0
    y_scale: float = 1.0
    time_scale: float = 1.0
    r: float | None = None
    s: float | None = None

    def __post_init__(self):
        if self.x_scale == 0.0 or self.y_scale == 0.0 or self.time_scale == 0.0:
            raise ValueError("coordinate change must be invertible")

    @property
    def orientation_reversed(self) -> bool:
        return self.time_scale < 0

    def forward(self, x: float, y: float) -> tuple[float, float]:
        return (self.x_scale * (x - self.x_shift), self.y_scale * y)

    def inverse(self, x1: float, y1: float) -> tuple[float, float]:
        return (x1 / self.x_scale + self.x_shift, y1 / self.y_scale)

    def is_identity(self) -> bool:
        return (self.x_shift, self.x_scale, self.y_scale, self.time_scale) == (0.0, 1.0, 1.0, 1.0)


IDENTITY = CoordinateChange()


@dataclass(frozen=True)
class NormalForm:
    """``x' = P_family(x), y' = y^2 + (a x + b) y + c x^2 + d x + e``.

    Construction does not enforce ``c^2 + d^2 + e^2 != 0``; use
    :func:`normal_form` for a checked constructor.
    """

    family: str
    params: Params
    change: CoordinateChange = field(default=IDENTITY)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        p = tuple(float(v) for v in self.params)
        if len(p) != 5 or not all(math.isfinite(v) for v in p):
            raise ValueError("params must be five finite reals (a, b, c, d, e)")
        object.__setattr__(self, "params", p)

    @property
    def P(self) -> dict[tuple[int, int], float]:
        return dict(X_FIELDS[self.family])

    @property
    def Q(self) -> dict[tuple[int, int], float]:
        a, b, c, d, e = self.params
        return {(0, 2): 1.0, (1, 1): a, (0, 1): b, (2, 0): c, (1, 0): d, (0, 0): e}

    def field(self, x: float, y: float) -> tuple[float, float]:
        a, b, c, d, e = self.params
        fam = self.family
        if fam == "I":
            xd = x * (x + 1.0)
        elif fam == "II":
            xd = x * x
        elif fam == "III":
            xd = x
        elif fam == "IV":
            xd = 1.0
        else:
            xd = x * x + 1.0
        return (xd, y * y + (a * x + b) * y + c * x * x + d * x + e)

    def jacobian(self, x: float, y: float) -> tuple[tuple[float, float], tuple[float, float]]:
        a, b, c, d, e = self.params
        dx = {"I": 2.0 * x + 1.0, "II": 2.0 * x, "III": 1.0, "IV": 0.0, "V": 2.0 * x}[self.family]
        return ((dx, 0.0), (a * y + 2.0 * c * x + d, 2.0 * y + a * x + b))

    @property
    def invariant_lines(self) -> tuple[float, ...]:
        return INVARIANT_LINES[self.family]

    def side_condition(self) -> bool:
        _, _, c, d, e = self.params
        return c * c + d * d + e * e != 0.0


def normal_form(family: str, params: Sequence[float]) -> NormalForm:
    nf = NormalForm(family, tuple(params))
    if not nf.side_condition():
        raise SideConditionViolated("c^2 + d^2 + e^2 = 0: gamma2 vanishes identically")
    return nf


def validate(sys: GeneralRiccati) -> GeneralRiccati:
    if sys.gamma2.is_zero():
        raise BernoulliInput()
    if sys.k == 0.0:
        raise LienardInput()
    if sys.alpha2.degree > 2 or sys.gamma2.degree > 2:
        raise DegreeViolation("alpha2 and gamma2 must have degree at most 2")
    if sys.beta1.degree > 1:
        raise DegreeViolation("beta1 must have degree at most 1")
    if sys.alpha2.is_zero():
        raise DegreeViolation("alpha2 is identically zero")
    return sys


def family_of(alpha2: Poly1, policy: SignPolicy = TOLERANT) -> str:
    if alpha2.degree == 0:
        return "IV"
    if alpha2.degree == 1:
        return "III"
    c, b, a = alpha2.coeffs
    s = policy.sign(b * b - 4.0 * a * c)
    return {1: "I", 0: "II", -1: "V"}[s]


def _change_for(alpha2: Poly1, family: str, policy: SignPolicy) -> CoordinateChange:
    if family == "IV":
        return CoordinateChange(x_scale=1.0 / alpha2.coeffs[0], time_scale=1.0)
    if family == "III":
        a0, a1 = alpha2.coeffs
        return CoordinateChange(x_shift=-a0 / a1, x_scale=1.0, time_scale=a1, r=-a0 / a1)
    c, b, a = alpha2.coeffs
    if family == "II":
        r = -b / (2.0 * a)
        return CoordinateChange(x_shift=r, x_scale=a, time_scale=1.0, r=r)
    if family == "I":
        lo, hi = roots_quadratic(alpha2, policy).roots
        # order the roots so that the time rescaling a2 (r - s) is positive
        r, s = (hi, lo) if a > 0 else (lo, hi)
        return CoordinateChange(x_shift=r, x_scale=1.0 / (r - s), time_scale=a * (r - s), r=r, s=s)
    r = -b / (2.0 * a)
    s = math.sqrt(max(c / a - r * r, 0.0))
    if a < 0:
        s = -s
    return CoordinateChange(x_shift=r, x_scale=1.0 / s, time_scale=a * s, r=r, s=s)


def reduce(sys: GeneralRiccati, policy: SignPolicy = TOLERANT) -> NormalForm:
    """Normal form of a validated raw system."""
    validate(sys)
    family = family_of(sys.alpha2, policy)
    ch = _change_for(sys.alpha2, family, policy)
    tau, lam, r = ch.time_scale, ch.x_scale, ch.x_shift
    ch = CoordinateChange(ch.x_shift, ch.x_scale, sys.k / tau, tau, ch.r, ch.s)
    b0, b1 = sys.beta1.coeff(0), sys.beta1.coeff(1)
    g0, g1, g2 = sys.gamma2.coeff(0), sys.gamma2.coeff(1), sys.gamma2.coeff(2)
    kt = sys.k / (tau * tau)
    a = b1 / (lam * tau)
    b = (b0 + b1 * r) / tau
    c = kt * g2 / (lam * lam)
    d = kt * (g1 + 2.0 * g2 * r) / lam
    e = kt * (g0 + g1 * r + g2 * r * r)
    nf = NormalForm(family, (a, b, c, d, e), ch)
    if not nf.side_condition():
        raise SideConditionViolated("c^2 + d^2 + e^2 = 0 after reduction")
    return nf


def raw_from_normal_form(nf: NormalForm) -> GeneralRiccati:
    """The normal form read back as a raw system (identity change)."""
    a, b, c, d, e = nf.params
    alpha = {"I": (0, 1, 1), "II": (0, 0, 1), "III": (0, 1), "IV": (1,), "V": (1, 0, 1)}[nf.family]
    return GeneralRiccati.from_coeffs(alpha, 1.0, (b, a), (e, d, c))
