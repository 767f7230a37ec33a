"""Jackson derivatives for q-fermions and q-bosons, and the q-shift operators.

Fermionic:  D f(x) = [f(x/q) - f(-q x)] / (x (q + 1/q))
Bosonic:    D f(x) = [f(q x) - f(x/q)]  / (x (q - 1/q))

On polynomials both are computed literally from the shifted coefficient
lists, so the monomial rule ``D x^n = [n] x^(n-1)`` is a consequence the
tests check rather than an assumption built in here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .qcore import as_q

__all__ = [
    "PolyFunc",
    "DerivKind",
    "ShiftKind",
    "LimitReport",
    "jd_apply",
    "jd_apply_pointwise",
    "shift_op",
    "limit_check",
]


@dataclass(frozen=True)
class PolyFunc:
    """Dense polynomial ``sum_k coeffs[k] x^k``.

    Coefficients may be floats or Fractions; arithmetic keeps whatever
    type it is given, so rational inputs stay exact.
    """

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (0,))

    @classmethod
    def monomial(cls, n: int, c=1) -> "PolyFunc":
        return cls((0,) * n + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "PolyFunc") -> "PolyFunc":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return PolyFunc(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "PolyFunc") -> "PolyFunc":
        return self + other.scale(-1)

    def scale(self, s) -> "PolyFunc":
        return PolyFunc(tuple(s * c for c in self.coeffs))

    def times_x(self) -> "PolyFunc":
        return PolyFunc((0,) + self.coeffs)

    def divide_by_x(self) -> "PolyFunc":
        if self.coeffs[0] != 0:
            raise ArithmeticError("polynomial with a constant term is not divisible by x")
        return PolyFunc(self.coeffs[1:] or (0,))


class DerivKind(enum.Enum):
    FERMIONIC = "fermionic"
    BOSONIC = "bosonic"
    ORDINARY = "ordinary"

    @classmethod
    def parse(cls, kind) -> "DerivKind":
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).lower())
        except ValueError:
            raise ValueError(f"unknown derivative kind {kind!r}") from None


class ShiftKind(enum.Enum):
    UP = "+"  # q^N f(x) = f(q x)
    DOWN = "-"  # q^-N f(x) = f(x/q)
    NEGATED = "negated"  # (-q)^N f(x) = f(-q x)

    @classmethod
    def parse(cls, sign) -> "ShiftKind":
        if isinstance(sign, cls):
            return sign
        try:
            return cls(sign)
        except ValueError:
            raise ValueError(f"shift sign must be '+', '-' or 'negated', got {sign!r}") from None


def _scale_factor(sign: ShiftKind, q):
    if sign is ShiftKind.UP:
        return q
    if sign is ShiftKind.DOWN:
        return 1 / q
    return -q


def shift_op(sign, f: PolyFunc, q) -> PolyFunc:
    """Rescale the argument: ``f(qx)``, ``f(x/q)`` or ``f(-qx)``."""
    s = _scale_factor(ShiftKind.parse(sign), as_q(q).q)
    return PolyFunc(tuple(c * s**k for k, c in enumerate(f.coeffs)))


def jd_apply(kind, f: PolyFunc, q) -> PolyFunc:
    """Apply a Jackson (or ordinary) derivative to a polynomial.

    Raises
    ------
    ValueError
        For the bosonic kind at ``q = 1``, where its difference quotient is
        0/0; use ``"ordinary"`` there.
    """
    kind = DerivKind.parse(kind)
    if kind is DerivKind.ORDINARY:
        return PolyFunc(tuple(k * c for k, c in enumerate(f.coeffs))[1:] or (0,))
    qv = as_q(q).q
    if kind is DerivKind.FERMIONIC:
        diff = shift_op(ShiftKind.DOWN, f, qv) - shift_op(ShiftKind.NEGATED, f, qv)
        denom = qv + 1 / qv
    else:
        if qv == 1:
            raise ValueError("bosonic Jackson derivative is singular at q=1; use the ordinary kind")
        diff = shift_op(ShiftKind.UP, f, qv) - shift_op(ShiftKind.DOWN, f, qv)
        denom = qv - 1 / qv
    # the x^0 terms cancel identically (c - c), so division by x is exact
    return diff.divide_by_x().scale(1 / denom)


def jd_apply_pointwise(kind, f: Callable[[float], float], x: float, q) -> float:
    """Evaluate the derivative's difference quotient at a single point.

    ``x = 0`` is outside the formula's domain and rejected. The ordinary
    kind uses a five-point central difference.
    """
    if x == 0:
        raise ValueError("the Jackson difference quotient is singular at x=0")
    kind = DerivKind.parse(kind)
    if kind is DerivKind.ORDINARY:
        h = 1e-3 * max(1.0, abs(x))
        return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)
    qv = as_q(q).q
    if kind is DerivKind.FERMIONIC:
        return (f(x / qv) - f(-qv * x)) / (x * (qv + 1 / qv))
    if qv == 1:
        raise ValueError("bosonic Jackson derivative is singular at q=1; use the ordinary kind")
    return (f(qv * x) - f(x / qv)) / (x * (qv - 1 / qv))


@dataclass
class LimitReport:
    """Distances of a deformed derivative from its q -> 1 targets.

    ``distances`` / ``order`` compare against the ordinary derivative;
    ``limit_distances`` / ``limit_order`` compare against the same
    operator evaluated at q = 1 (the ordinary derivative again for the
    bosonic kind). An order of ``None`` means every distance was zero.
    """

    kind: DerivKind
    eps: list
    distances: list
    order: float | None
    limit_distances: list
    limit_order: float | None

    @property
    def converges_to_ordinary(self) -> bool:
        return self.distances[-1] == 0 or (self.order is not None and self.order > 0.5)


def _max_coeff_distance(f: PolyFunc, g: PolyFunc) -> float:
    n = max(len(f.coeffs), len(g.coeffs))
    a = np.zeros(n)
    b = np.zeros(n)
    a[: len(f.coeffs)] = [float(c) for c in f.coeffs]
    b[: len(g.coeffs)] = [float(c) for c in g.coeffs]
    return float(np.max(np.abs(a - b)))


def _empirical_order(eps, dist):
    pts = [(math.log(e), math.log(d)) for e, d in zip(eps, dist) if d > 0]
    if len(pts) < 2:
        return None
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def limit_check(kind, f: PolyFunc, eps_list: Sequence[float]) -> LimitReport:
    """Measure how fast the derivative approaches its q -> 1 limits.

    The convergence order is the least-squares slope of log(distance)
    against log(eps), so at least three eps values are required.
    """
    kind = DerivKind.parse(kind)
    eps = [float(e) for e in eps_list]
    if len(eps) < 3:
        raise ValueError("need at least three eps values to estimate an order")
    if any(not 0 < e < 0.5 for e in eps):
        raise ValueError("eps values must lie in (0, 0.5)")
    ordinary = jd_apply(DerivKind.ORDINARY, f, 1)
    at_one = ordinary if kind is not DerivKind.FERMIONIC else jd_apply(kind, f, Fraction(1))
    dist, ldist = [], []
    for e in eps:
        d = jd_apply(kind, f, 1.0 - e)
        dist.append(_max_coeff_distance(d, ordinary))
        ldist.append(_max_coeff_distance(d, at_one))
    return LimitReport(kind, eps, dist, _empirical_order(eps, dist), ldist, _empirical_order(eps, ldist))
