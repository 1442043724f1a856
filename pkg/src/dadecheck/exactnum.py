"""Exact arithmetic in Q(sqrt2) and polynomials in q, where q = 2^n * sqrt2.

All table data evaluates through this module; nothing here ever rounds.
Orders of the groups involved reach ~2^180, so everything is built on
Python big ints / Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Union

Rat = Union[int, Fraction]


class NotRationalInteger(ValueError):
    """Value expected to be a plain integer has a sqrt2 part or a denominator."""


class ZeroInput(ValueError):
    """2-adic valuation of zero requested."""


class SqrtTwoRat:
    """Number a + b*sqrt2 with rational a, b.

    Immutable value type; arithmetic is closed (Q(sqrt2) is a field).
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Rat = 0, b: Rat = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, *args):
        raise AttributeError("SqrtTwoRat is immutable")

    @staticmethod
    def coerce(x) -> "SqrtTwoRat":
        if isinstance(x, SqrtTwoRat):
            return x
        if isinstance(x, (int, Fraction)):
            return SqrtTwoRat(x)
        raise TypeError(f"cannot coerce {x!r} to SqrtTwoRat")

    def __add__(self, other):
        other = SqrtTwoRat.coerce(other)
        return SqrtTwoRat(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return SqrtTwoRat(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-SqrtTwoRat.coerce(other))

    def __rsub__(self, other):
        return SqrtTwoRat.coerce(other) + (-self)

    def __mul__(self, other):
        other = SqrtTwoRat.coerce(other)
        # (a1 + b1 s)(a2 + b2 s) = a1 a2 + 2 b1 b2 + (a1 b2 + a2 b1) s
        return SqrtTwoRat(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "SqrtTwoRat":
        # 1/(a + b s) = (a - b s)/(a^2 - 2 b^2); the norm vanishes only at 0.
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return SqrtTwoRat(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * SqrtTwoRat.coerce(other).inverse()

    def __rtruediv__(self, other):
        return SqrtTwoRat.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("exponent must be an int")
        base = self
        if e < 0:
            base, e = self.inverse(), -e
        out = SqrtTwoRat(1)
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        try:
            other = SqrtTwoRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise NotRationalInteger(f"{self} has a sqrt2 part")
        return self.a

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * 2.0 ** 0.5

    def __repr__(self):
        if self.b == 0:
            return f"SqrtTwoRat({self.a})"
        return f"SqrtTwoRat({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*s2"
        return f"{self.a}+{self.b}*s2"


ZERO = SqrtTwoRat(0)
ONE = SqrtTwoRat(1)
SQRT2 = SqrtTwoRat(0, 1)


def as_integer(v: SqrtTwoRat) -> int:
    """Return v as a plain int; NotRationalInteger if it is not one.

    A failure here almost always means a malformed table expression.
    """
    v = SqrtTwoRat.coerce(v)
    if v.b != 0:
        raise NotRationalInteger(f"{v} has a nonzero sqrt2 part")
    if v.a.denominator != 1:
        raise NotRationalInteger(f"{v} is not an integer")
    return v.a.numerator


def val2(x: int) -> int:
    """Largest e with 2^e dividing x; the 2-part of a character degree."""
    if x == 0:
        raise ZeroInput("val2(0) is undefined")
    x = abs(x)
    return (x & -x).bit_length() - 1


def q_value(n: int) -> SqrtTwoRat:
    """q = 2^n * sqrt2, so q^2 = 2^(2n+1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return SqrtTwoRat(0, 1 << n)


class QPoly:
    """Polynomial in q with SqrtTwoRat coefficients.

    Terms like q^13/sqrt2 are carried as a sqrt2-rational coefficient
    (q^13/sqrt2 = (s2/2)*q^13), which keeps sums of integer-power and
    half-twisted terms in one ring.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict[int, SqrtTwoRat] = None):
        clean: Dict[int, SqrtTwoRat] = {}
        for p, c in (coeffs or {}).items():
            c = SqrtTwoRat.coerce(c)
            if not c.is_zero():
                clean[int(p)] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *args):
        raise AttributeError("QPoly is immutable")

    @staticmethod
    def const(c) -> "QPoly":
        return QPoly({0: SqrtTwoRat.coerce(c)})

    @staticmethod
    def q(power: int = 1) -> "QPoly":
        return QPoly({power: ONE})

    @staticmethod
    def coerce(x) -> "QPoly":
        if isinstance(x, QPoly):
            return x
        return QPoly.const(SqrtTwoRat.coerce(x))

    def __add__(self, other):
        other = QPoly.coerce(other)
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, ZERO) + c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return QPoly({p: -c for p, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-QPoly.coerce(other))

    def __rsub__(self, other):
        return QPoly.coerce(other) + (-self)

    def __mul__(self, other):
        other = QPoly.coerce(other)
        out: Dict[int, SqrtTwoRat] = {}
        for p1, c1 in self.coeffs.items():
            for p2, c2 in other.coeffs.items():
                p = p1 + p2
                out[p] = out.get(p, ZERO) + c1 * c2
        return QPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QPoly.coerce(other)
        if len(other.coeffs) == 1:
            (p, c), = other.coeffs.items()
            inv = c.inverse()
            return QPoly({pp - p: cc * inv for pp, cc in self.coeffs.items()})
        raise ValueError("QPoly division only by monomials")

    def __pow__(self, e: int):
        if e < 0:
            if len(self.coeffs) != 1:
                raise ValueError("negative power of a non-monomial QPoly")
            return (QPoly.const(1) / self) ** (-e)
        out = QPoly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def eval(self, n: int) -> SqrtTwoRat:
        """Exact substitution q -> 2^n sqrt2."""
        q = q_value(n)
        out = ZERO
        for p, c in self.coeffs.items():
            out = out + c * q ** p
        return out

    def __repr__(self):
        items = " + ".join(f"({c})*q^{p}" for p, c in sorted(self.coeffs.items()))
        return f"QPoly[{items or '0'}]"


def eval_poly(p: QPoly, n: int) -> SqrtTwoRat:
    """Evaluate p at q = 2^n sqrt2 (exact; no rounding anywhere)."""
    return p.eval(n)


Q = QPoly.q(1)
_S2 = QPoly.const(SQRT2)

# The cyclotomic-style factors of the group order, named as in the data files.
PHI_POLYS: Dict[str, QPoly] = {
    "p1": Q - 1,
    "p2": Q + 1,
    "p3": Q * Q + Q + 1,
    "p4": Q * Q + 1,
    "p6": Q * Q - Q + 1,
    "p8": Q ** 4 + 1,
    "p12": Q ** 4 - Q * Q + 1,
    "p24": Q ** 8 - Q ** 4 + 1,
    "p8a": Q * Q + _S2 * Q + 1,
    "p8b": Q * Q - _S2 * Q + 1,
    "p24a": Q ** 4 + _S2 * Q ** 3 + Q * Q + _S2 * Q + 1,
    "p24b": Q ** 4 - _S2 * Q ** 3 + Q * Q - _S2 * Q + 1,
}
