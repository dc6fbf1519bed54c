"""Closed intervals with exact rational endpoints.

Arithmetic between intervals is done on :class:`fractions.Fraction` endpoints, so
it is exact and needs no outward rounding.  Transcendental functions go through
``mpmath.iv`` (outward rounded) and come back as dyadic rationals, so every
``Interval`` produced here is certified to contain the real quantity it
encloses.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Union

from mpmath import iv, mp

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # floats are exact dyadic rationals
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def mpf_to_fraction(raw) -> Fraction:
    """Exact conversion of an mpmath raw tuple ``(sign, man, exp, bc)``."""
    sign, man, exp, _ = raw
    if not man:
        if exp:  # inf / nan encodings
            raise ValueError("non-finite mpf")
        return Fraction(0)
    val = Fraction(int(man)) * (Fraction(2) ** exp) if exp >= 0 else Fraction(int(man), 2 ** (-exp))
    return -val if sign else val


@contextlib.contextmanager
def iv_precision(bits: int) -> Iterator[None]:
    # mpmath's iv context has no workprec(); not thread-safe
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    s = 2 ** bits
    return Fraction(math.floor(x * s), s)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    s = 2 ** bits
    return Fraction(math.ceil(x * s), s)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = as_fraction(x)
        return cls(x, x)

    @classmethod
    def around(cls, x, radius) -> "Interval":
        x, r = as_fraction(x), as_fraction(radius)
        return cls(x - r, x + r)

    @classmethod
    def hull(cls, *items) -> "Interval":
        ivs = [as_interval(i) for i in items]
        return cls(min(i.lo for i in ivs), max(i.hi for i in ivs))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, float):
            return float(self.lo) <= x <= float(self.hi) or (self.lo <= Fraction(x) <= self.hi)
        x = as_fraction(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def overlaps(self, other) -> bool:
        other = as_interval(other)
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other) -> "Interval":
        other = as_interval(other)
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def round_out(self, bits: int) -> "Interval":
        """Widen to endpoints on the grid 2**-bits (keeps denominators small)."""
        return Interval(_floor_dyadic(self.lo, bits), _ceil_dyadic(self.hi, bits))

    def widen(self, r) -> "Interval":
        r = as_fraction(r)
        return Interval(self.lo - r, self.hi + r)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = as_interval(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return as_interval(other) - self

    def __mul__(self, other):
        other = as_interval(other)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return as_interval(other) / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        if self.is_point:
            return f"Interval({self.lo})"
        return f"Interval([{float(self.lo):.12g}, {float(self.hi):.12g}], w={float(self.width):.3g})"

    # mpmath bridge ------------------------------------------------------
    def to_iv(self):
        """Outward-rounded ``mpmath.iv`` interval at the current ``iv.prec``."""
        lo = iv.mpf(self.lo.numerator) / self.lo.denominator
        hi = lo if self.is_point else iv.mpf(self.hi.numerator) / self.hi.denominator
        return iv.mpf([lo.a, hi.b])

    @classmethod
    def from_iv(cls, x) -> "Interval":
        a, b = x._mpi_
        return cls(mpf_to_fraction(a), mpf_to_fraction(b))


Scalar = Union[Fraction, Interval]


def as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(as_fraction(x))


def is_exact(x) -> bool:
    return not isinstance(x, Interval)


def lower(x) -> Fraction:
    return x.lo if isinstance(x, Interval) else as_fraction(x)


def upper(x) -> Fraction:
    return x.hi if isinstance(x, Interval) else as_fraction(x)


def exp(x, bits: int = 64) -> Interval:
    with iv_precision(bits):
        return Interval.from_iv(iv.exp(as_interval(x).to_iv()))


def log(x, bits: int = 64) -> Interval:
    x = as_interval(x)
    if x.lo <= 0:
        raise ValueError("log of an interval reaching 0")
    with iv_precision(bits):
        return Interval.from_iv(iv.log(x.to_iv()))


def to_mpf(x):
    """Nearest mpf (at ``mp.prec``) to a rational or interval midpoint."""
    x = x.mid if isinstance(x, Interval) else as_fraction(x)
    return mp.mpf(x.numerator) / x.denominator
