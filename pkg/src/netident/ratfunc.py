"""Exact univariate polynomials and rational functions over the rationals.

Everything here is exact: coefficients are :class:`fractions.Fraction` and no
floating point is used anywhere.  :class:`RatFunc` values are kept in
canonical form (coprime numerator and denominator, monic denominator), so
structural equality is mathematical equality.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Union

from .errors import ArithmeticDomainError

Scalar = Union[int, Fraction]


def _as_fraction(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Poly:
    """Polynomial with rational coefficients stored in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: tuple[Fraction, ...]) -> Poly:
        # trusted constructor: caller guarantees Fractions with no trailing zeros
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def constant(cls, c: Scalar) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> Poly:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree, with -1 standing in for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                body = str(c)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                if c == 1:
                    body = mono
                elif c == -1:
                    body = "-" + mono
                else:
                    body = f"{c}*{mono}"
            terms.append(body)
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self) -> Poly:
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other: Poly) -> Poly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        while out and out[-1] == 0:
            out.pop()
        return Poly._raw(tuple(out))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly._raw(tuple(out))

    def scale(self, c: Scalar) -> Poly:
        c = _as_fraction(c)
        if c == 0:
            return Poly._raw(())
        return Poly._raw(tuple(x * c for x in self.coeffs))

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ArithmeticDomainError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly._raw(()), self
        inv_lc = 1 / other.lc
        quot = [Fraction(0)] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] * inv_lc
            quot[k] = q
            if q:
                for i, c in enumerate(bc):
                    rem[k + i] -= q * c
        rem = rem[:db]
        while rem and rem[-1] == 0:
            rem.pop()
        return Poly(quot), Poly._raw(tuple(rem))

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticDomainError(f"{self} is not divisible by {other}")
        return q

    def monic(self) -> Poly:
        if not self.coeffs or self.lc == 1:
            return self
        return self.scale(1 / self.lc)

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def content_free(self) -> Poly:
        """Return ``self`` divided by a rational so that the coefficients are coprime integers."""
        if not self.coeffs:
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Poly._raw(tuple(Fraction(v // g) for v in ints))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero only when both inputs are zero)."""
    while b:
        a, b = b, a % b
        # keep remainders integral-ish to slow coefficient growth
        if b:
            b = b.content_free()
    return a.monic()


ZERO_POLY = Poly()
ONE_POLY = Poly.constant(1)


class Properness(enum.Enum):
    STRICTLY_PROPER = "strictly_proper"
    PROPER_NOT_STRICT = "proper_not_strict"
    IMPROPER = "improper"


class RatFunc:
    """Rational function ``num(z) / den(z)`` in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Scalar = 0, den: Poly | Scalar = 1):
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        if not isinstance(den, Poly):
            den = Poly.constant(den)
        if den.is_zero():
            raise ArithmeticDomainError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO_POLY, ONE_POLY
            return
        if den.degree > 0 and num.degree > 0:
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num // g, den // g
        lc = den.lc
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> RatFunc:
        f = object.__new__(cls)
        f.num, f.den = num, den
        return f

    @classmethod
    def z(cls) -> RatFunc:
        return cls._raw(Poly.monomial(1), ONE_POLY)

    @classmethod
    def const(cls, c: Scalar) -> RatFunc:
        return cls(Poly.constant(c))

    @classmethod
    def over_z(cls, c: Scalar, power: int = 1) -> RatFunc:
        """The strictly proper function ``c / z**power``."""
        if c == 0:
            return cls()
        return cls._raw(Poly.constant(c), Poly.monomial(power))

    @staticmethod
    def _coerce(other: object) -> RatFunc | None:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc._raw(Poly.constant(other), ONE_POLY) if other else RatFunc()
        if isinstance(other, Poly):
            return RatFunc._raw(other, ONE_POLY)
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def __eq__(self, other: object) -> bool:
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __neg__(self) -> RatFunc:
        return RatFunc._raw(-self.num, self.den)

    def __add__(self, other: object) -> RatFunc:
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other: object) -> RatFunc:
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> RatFunc:
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> RatFunc:
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RatFunc()
        if self.den.is_one() and o.den.is_one():
            return RatFunc._raw(self.num * o.num, ONE_POLY)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.is_zero():
            raise ArithmeticDomainError("division by the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other: object) -> RatFunc:
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> RatFunc:
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __call__(self, x: Scalar) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ArithmeticDomainError(f"pole at z = {x}")
        return self.num(x) / d

    @property
    def relative_degree(self) -> float:
        """``deg den - deg num``; +inf for the zero function."""
        if self.is_zero():
            return float("inf")
        return self.den.degree - self.num.degree

    def properness(self) -> Properness:
        # zero counts as strictly proper: deg(0) = -inf
        rd = self.relative_degree
        if rd > 0:
            return Properness.STRICTLY_PROPER
        if rd == 0:
            return Properness.PROPER_NOT_STRICT
        return Properness.IMPROPER

    def is_proper(self) -> bool:
        return self.relative_degree >= 0

    def is_strictly_proper(self) -> bool:
        return self.relative_degree > 0

    def limit_at_infinity(self) -> Fraction:
        """``lim_{z->oo} f(z)``; only defined for proper functions."""
        rd = self.relative_degree
        if rd < 0:
            raise ArithmeticDomainError(f"{self} is improper and diverges at infinity")
        if rd > 0:
            return Fraction(0)
        return self.num.lc / self.den.lc

    def to_json(self) -> dict:
        return {"num": encode_coeffs(self.num.coeffs), "den": encode_coeffs(self.den.coeffs)}

    @classmethod
    def from_json(cls, doc: dict) -> RatFunc:
        return cls(Poly(decode_coeffs(doc["num"])), Poly(decode_coeffs(doc["den"])))


def encode_coeffs(coeffs: Iterable[Fraction]) -> list:
    """Exact JSON encoding: integers stay integers, other rationals become ``"p/q"``."""
    return [int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}" for c in coeffs]


def decode_coeffs(values: Iterable[int | str]) -> list[Fraction]:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise ValueError(f"bad coefficient {v!r}")
        out.append(Fraction(v))
    return out


def properness(f: RatFunc) -> Properness:
    return f.properness()
