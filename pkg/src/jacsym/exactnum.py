"""Exact arithmetic in Q and in the degree-4 tower Q(i, sqrt2).

A :class:`Scalar` is ``a + b*i + c*sqrt2 + d*i*sqrt2`` with rational
components.  Rationals are ``gmpy2.mpq`` values (arbitrary precision,
always reduced, positive denominator).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Union

import gmpy2
from gmpy2 import mpq

Rational = type(mpq(0))
ScalarLike = Union["Scalar", int, Fraction, Rational, str]

_Q0 = mpq(0)
_Q1 = mpq(1)


def rational(x) -> Rational:
    """Coerce ``x`` (int, Fraction, mpq or ``"p/q"`` string) to an mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        return mpq(s)
    raise TypeError(f"cannot make a rational from {type(x).__name__}")


def format_rational(q: Rational) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def integer_root(n: int, k: int) -> Optional[int]:
    """Exact k-th root of the integer ``n`` or ``None``."""
    if n < 0:
        if k % 2 == 0:
            return None
        r = integer_root(-n, k)
        return None if r is None else -r
    r, exact = gmpy2.iroot(gmpy2.mpz(n), k)
    return int(r) if exact else None


def rational_root(q: Rational, k: int) -> Optional[Rational]:
    """Exact k-th root of a rational or ``None`` when it is irrational."""
    if k < 1:
        raise ValueError("root index must be positive")
    num = integer_root(int(q.numerator), k)
    den = integer_root(int(q.denominator), k)
    if num is None or den is None:
        return None
    return mpq(num, den)


class Scalar:
    """Element ``a + b i + c sqrt2 + d i sqrt2`` of Q(i, sqrt2).

    Immutable and hashable; equality is componentwise.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", rational(a))
        object.__setattr__(self, "b", rational(b))
        object.__setattr__(self, "c", rational(c))
        object.__setattr__(self, "d", rational(d))

    @classmethod
    def _raw(cls, a, b, c, d) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "a", a)
        object.__setattr__(s, "b", b)
        object.__setattr__(s, "c", c)
        object.__setattr__(s, "d", d)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_real(self) -> bool:
        return not (self.b or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def in_gaussian_field(self) -> bool:
        """True when the value lies in Q(i), i.e. no sqrt2 parts."""
        return not (self.c or self.d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._raw(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._raw(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = o.a, o.b, o.c, o.d
        if not (b or c or d):
            return Scalar._raw(a * e, a * f, a * g, a * h)
        if not (f or g or h):
            return Scalar._raw(a * e, b * e, c * e, d * e)
        # i^2 = -1, sqrt2^2 = 2, i*sqrt2 = i sqrt2, i*(i sqrt2) = -sqrt2,
        # sqrt2*(i sqrt2) = 2i, (i sqrt2)^2 = -2
        return Scalar._raw(
            a * e - b * f + 2 * (c * g - d * h),
            a * f + b * e + 2 * (c * h + d * g),
            a * g + c * e - (b * h + d * f),
            a * h + d * e + b * g + c * f,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "Scalar":
        """Multiplicative inverse, rationalized through the tower conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero Scalar")
        if self.is_rational():
            return Scalar._raw(1 / self.a, _Q0, _Q0, _Q0)
        # x = u + v sqrt2 with u, v in Q(i); (u + v sqrt2)(u - v sqrt2) = u^2 - 2 v^2 =: w
        bar = self.sqrt2_conj()
        w = self * bar  # in Q(i)
        norm = w.a * w.a + w.b * w.b  # w * conj(w), rational and > 0
        return bar * Scalar._raw(w.a / norm, -w.b / norm, _Q0, _Q0)

    def conj(self) -> "Scalar":
        """Complex conjugation i -> -i, fixing Q(sqrt2)."""
        return Scalar._raw(self.a, -self.b, self.c, -self.d)

    def sqrt2_conj(self) -> "Scalar":
        """The automorphism sqrt2 -> -sqrt2, fixing Q(i)."""
        return Scalar._raw(self.a, self.b, -self.c, -self.d)

    # -- comparisons / hashing -------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.c == o.c and self.d == o.d

    def __hash__(self):
        if self.is_rational():
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.d))

    def components(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def as_rational(self) -> Rational:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- text ----------------------------------------------------------------
    def to_text(self) -> str:
        """Wire form ``"a|b|c|d"``."""
        return "|".join(format_rational(q) for q in self.components())

    @classmethod
    def from_text(cls, text: str) -> "Scalar":
        parts = text.split("|")
        if len(parts) == 1:
            return cls(rational(parts[0]))
        if len(parts) != 4:
            raise ValueError(f"malformed scalar {text!r}: expected 'a|b|c|d'")
        return cls(*(rational(p) for p in parts))

    def __str__(self):
        pieces = []
        for q, unit in zip(self.components(), ("", "i", "sqrt2", "i*sqrt2")):
            if not q:
                continue
            if unit and q == 1:
                pieces.append(unit)
            elif unit and q == -1:
                pieces.append("-" + unit)
            else:
                s = format_rational(q)
                pieces.append(f"{s}*{unit}" if unit else s)
        if not pieces:
            return "0"
        return "+".join(pieces).replace("+-", "-")

    def __repr__(self):
        return f"Scalar({self.to_text()!r})"


def _coerce(x) -> Optional[Scalar]:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, Rational)) and not isinstance(x, bool):
        return Scalar._raw(rational(x), _Q0, _Q0, _Q0)
    return None


def as_scalar(x: ScalarLike) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return Scalar.from_text(x)
    s = _coerce(x)
    if s is None:
        raise TypeError(f"cannot make a Scalar from {type(x).__name__}")
    return s


ZERO = Scalar()
ONE = Scalar(1)
I = Scalar(0, 1)
SQRT2 = Scalar(0, 0, 1)
I_SQRT2 = Scalar(0, 0, 0, 1)
HALF_SQRT2 = Scalar(0, 0, mpq(1, 2))


def scalar_arith(op: str, x: ScalarLike, y: ScalarLike) -> Scalar:
    x, y = as_scalar(x), as_scalar(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown scalar op {op!r}")


def scalar_inv(x: ScalarLike) -> Scalar:
    return as_scalar(x).inverse()


def scalar_conj(x: ScalarLike) -> Scalar:
    return as_scalar(x).conj()


_UNITS = (ONE, I, SQRT2, I_SQRT2)


def scalar_root(x: ScalarLike, k: int) -> Optional[Scalar]:
    """A k-th root of ``x`` of the form ``r*u`` with r rational and u in
    {1, i, sqrt2, i sqrt2}, or ``None`` if no root of that shape exists.

    Every rational with a rational k-th root is covered, which is all the
    Kronecker construction needs for integer (a, b).
    """
    x = as_scalar(x)
    if k < 1:
        raise ValueError("root index must be positive")
    if x.is_zero():
        return ZERO
    for unit in _UNITS:
        uk = unit ** k
        ratio = x / uk
        if not ratio.is_rational():
            continue
        r = rational_root(ratio.a, k)
        if r is not None:
            return unit * r
    return None


def sum_scalars(values: Iterable[Scalar]) -> Scalar:
    total = ZERO
    for v in values:
        total = total + v
    return total
