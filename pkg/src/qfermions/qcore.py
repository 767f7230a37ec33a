"""Exact Laurent polynomials in q and the basic numbers built from them.

Everything that is "exact in q" in this package (eigenvalue sequences,
basic numbers, squared matrix elements) is a :class:`LaurentPoly` with
:class:`fractions.Fraction` coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterator, Mapping, Union

__all__ = [
    "LaurentPoly",
    "Deformation",
    "Q",
    "basic_fermion",
    "basic_boson",
    "basic_factorial",
    "evaluate",
    "fermi_limit_basic",
    "as_q",
]

Number = Union[int, Fraction, float]


class LaurentPoly:
    """Laurent polynomial in ``q`` with rational coefficients.

    Stored as a mapping ``exponent -> Fraction`` with zero coefficients
    removed, so two equal polynomials always have equal term maps.

    Examples
    --------
    >>> q = LaurentPoly.q()
    >>> str(q**-1 - q)
    'q^-1 - q'
    >>> (q**-1 - q)(Fraction(1, 2))
    Fraction(3, 2)
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | None = None):
        clean: dict[int, Fraction] = {}
        for k, c in (terms or {}).items():
            if not isinstance(k, int):
                raise TypeError(f"exponent must be int, got {type(k).__name__}")
            c = Fraction(c)
            if c:
                clean[k] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def q(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def const(cls, c: Number) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._terms.items())

    def coeff(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exponent(self) -> int | None:
        return next(iter(self._terms), None)

    @property
    def max_exponent(self) -> int | None:
        return next(reversed(self._terms), None)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for i, a in self._terms.items():
            for j, b in other._terms.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            # only monomials have Laurent inverses
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial is not a Laurent polynomial")
            (k, c), = self._terms.items()
            return LaurentPoly({k * n: Fraction(1) / c ** (-n)})
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # -- transforms -------------------------------------------------------
    def invert_variable(self) -> "LaurentPoly":
        """Substitute ``q -> 1/q``."""
        return LaurentPoly({-k: c for k, c in self._terms.items()})

    def evaluate(self, q, exact: bool = False):
        """Value at ``q``.

        With ``exact=True`` (or a rational ``q``) the result is a Fraction;
        floats are converted via ``Fraction(q)``, which is exact in binary.
        """
        if isinstance(q, Deformation):
            q = q.q
        if exact or isinstance(q, Rational):
            qf = Fraction(q)
            if qf == 0 and self.min_exponent is not None and self.min_exponent < 0:
                raise ZeroDivisionError("negative power of q at q=0")
            return sum((c * qf**k for k, c in self._terms.items()), Fraction(0))
        qv = float(q)
        return math.fsum(float(c) * qv**k for k, c in self._terms.items())

    __call__ = evaluate

    # -- display ----------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, c in self._terms.items():
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "q" if k == 1 else f"q^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            sign = "-" if c < 0 else "+"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


Q = LaurentPoly.q()


@dataclass(frozen=True)
class Deformation:
    """Validated deformation parameter ``0 < q <= 1``.

    ``q = 0`` is excluded because every formula carries ``q^{-1}``.
    Rational values are kept as Fractions so exact evaluation stays exact.
    """

    q: Real

    def __post_init__(self):
        q = self.q
        if isinstance(q, Deformation):
            q = q.q
        if isinstance(q, bool) or not isinstance(q, Real):
            raise TypeError(f"q must be a real number, got {type(q).__name__}")
        if isinstance(q, int):
            q = Fraction(q)
        if not (q > 0 and q <= 1) or (isinstance(q, float) and math.isnan(q)):
            raise ValueError(f"deformation parameter must satisfy 0 < q <= 1, got {q}")
        object.__setattr__(self, "q", q)

    @property
    def inverse(self):
        return 1 / self.q

    @property
    def is_exact(self) -> bool:
        return isinstance(self.q, Rational)

    def __float__(self):
        return float(self.q)


def as_q(q) -> Deformation:
    return q if isinstance(q, Deformation) else Deformation(q)


def basic_fermion(n: int) -> LaurentPoly:
    """Fermionic basic number ``[n] = (q^-n - (-1)^n q^n) / (q + q^-1)``.

    Built as the alternating sum ``q^{-n+1} - q^{-n+3} + ... - (-1)^n q^{n-1}``
    so no polynomial division is needed.
    """
    _check_n(n)
    return LaurentPoly({-n + 1 + 2 * k: (-1) ** k for k in range(n)})


def basic_boson(n: int) -> LaurentPoly:
    """Bosonic basic number ``[n]_B = q^{n-1} + q^{n-3} + ... + q^{-(n-1)}``."""
    _check_n(n)
    return LaurentPoly({n - 1 - 2 * k: 1 for k in range(n)})


def basic_factorial(n: int, kind: str = "fermion") -> LaurentPoly:
    """``[n]! = [n][n-1]...[1]`` with ``[0]! = 1``."""
    _check_n(n)
    if kind == "fermion":
        number = basic_fermion
    elif kind == "boson":
        number = basic_boson
    else:
        raise ValueError(f"kind must be 'fermion' or 'boson', got {kind!r}")
    out = LaurentPoly.one()
    for k in range(1, n + 1):
        out = out * number(k)
    return out


def evaluate(p: LaurentPoly, q, exact: bool = False):
    """Numeric value of ``p`` at ``q`` (float, or Fraction when exact)."""
    if isinstance(q, Deformation):
        q = q.q
    if not q > 0:
        raise ValueError(f"evaluation requires q > 0, got {q}")
    return p.evaluate(q, exact=exact)


def fermi_limit_basic(n: int) -> Fraction:
    """q -> 1 limit of the fermionic basic number: 1 for odd n, 0 for even."""
    _check_n(n)
    return Fraction(n % 2)


def _check_n(n):
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
