"""Exact rationals, interval enclosures, precision-stream reals and a
three-valued truth type.

A real number is represented by the ability to produce, for every precision
``p``, a rational interval of width at most ``2**-p`` containing it, with
enclosures nested as ``p`` grows.  All arithmetic is exact rational interval
arithmetic; there is no floating point anywhere in this module.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import ParseError

Rational = Fraction

RationalLike = Union[Fraction, int, str]


def to_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, "p/q" strings and decimal literals to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational literal: {value!r}") from exc
    raise ParseError(f"cannot interpret {value!r} as a rational")


def format_fraction(q: Fraction) -> str:
    """Canonical "p/q" string (plain integer when the denominator is 1)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Interval:
    """Closed rational interval [lo, hi]; the finite-stage content of a real."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @staticmethod
    def point(q: RationalLike) -> "Interval":
        q = to_fraction(q)
        return Interval(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q: Fraction) -> bool:
        return self.lo <= q <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def strictly_negative(self) -> bool:
        return self.hi < 0

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("empty intersection")
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    def scale(self, q: Fraction) -> "Interval":
        if q >= 0:
            return Interval(self.lo * q, self.hi * q)
        return Interval(self.hi * q, self.lo * q)

    def abs(self) -> "Interval":
        """Interval of |x| for x in self."""
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def dist_to_zero(self) -> Fraction:
        """Lower bound on |x| over the interval (0 if it straddles zero)."""
        if self.contains_zero():
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def __str__(self):
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"


class Truth(Enum):
    """Three-valued truth: resolved values are permanent once produced."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @property
    def resolved(self) -> bool:
        return self is not Truth.UNKNOWN


def _pow2(p: int) -> Fraction:
    return Fraction(1, 2**p) if p >= 0 else Fraction(2 ** (-p))


class ApproxReal:
    """A real given as a stream of nested rational enclosures.

    ``approx_fn(p)`` must return an interval of width <= 2**-p containing the
    represented value; nesting across precisions is enforced here by filling
    the enclosure cache in increasing precision order and intersecting each
    new raw enclosure with its predecessor.  Instances are immutable from the
    caller's perspective; the memo is guarded by a lock so values can be
    shared across threads.

    When ``exact`` is given the value is a known rational and every enclosure
    is the degenerate interval [q, q].
    """

    __slots__ = ("_approx_fn", "_exact", "_cache", "_lock")

    def __init__(self, approx_fn: Optional[Callable[[int], Interval]] = None,
                 exact: Optional[Fraction] = None):
        if approx_fn is None and exact is None:
            raise ValueError("need either an approximation function or an exact value")
        self._approx_fn = approx_fn
        self._exact = exact
        self._cache: list[Interval] = []
        self._lock = threading.Lock()

    @staticmethod
    def from_rational(q: RationalLike) -> "ApproxReal":
        return ApproxReal(exact=to_fraction(q))

    @property
    def exact(self) -> Optional[Fraction]:
        """The represented value when it is known exactly, else None."""
        return self._exact

    def enclosure_at(self, p: int) -> Interval:
        """Nested enclosure of width <= 2**-p."""
        if p < 0:
            p = 0
        if self._exact is not None:
            return Interval(self._exact, self._exact)
        with self._lock:
            while len(self._cache) <= p:
                q = len(self._cache)
                raw = self._approx_fn(q)
                if raw.width > _pow2(q):
                    raise ValueError(
                        f"approximation at precision {q} too wide: {raw.width}")
                if self._cache:
                    raw = raw.intersect(self._cache[-1])
                self._cache.append(raw)
            return self._cache[p]

    def __add__(self, other: "ApproxReal") -> "ApproxReal":
        return add(self, other)

    def __sub__(self, other: "ApproxReal") -> "ApproxReal":
        return sub(self, other)

    def __mul__(self, other: "ApproxReal") -> "ApproxReal":
        return mul(self, other)

    def __neg__(self) -> "ApproxReal":
        return neg(self)

    def __repr__(self):
        if self._exact is not None:
            return f"ApproxReal({format_fraction(self._exact)})"
        return f"ApproxReal(~{self.enclosure_at(10)})"


ZERO = ApproxReal.from_rational(0)
ONE = ApproxReal.from_rational(1)


def _magnitude_bound(x: ApproxReal) -> Fraction:
    enc = x.enclosure_at(1)
    return max(abs(enc.lo), abs(enc.hi)) + 1


def _extra_bits(bound: Fraction) -> int:
    bits = 0
    while (1 << bits) < bound:
        bits += 1
    return bits


def add(x: ApproxReal, y: ApproxReal) -> ApproxReal:
    if x.exact is not None and y.exact is not None:
        return ApproxReal.from_rational(x.exact + y.exact)
    if x.exact == 0:
        return y
    if y.exact == 0:
        return x
    return ApproxReal(lambda p: x.enclosure_at(p + 1) + y.enclosure_at(p + 1))


def sub(x: ApproxReal, y: ApproxReal) -> ApproxReal:
    if x.exact is not None and y.exact is not None:
        return ApproxReal.from_rational(x.exact - y.exact)
    return ApproxReal(lambda p: x.enclosure_at(p + 1) - y.enclosure_at(p + 1))


def neg(x: ApproxReal) -> ApproxReal:
    if x.exact is not None:
        return ApproxReal.from_rational(-x.exact)
    return ApproxReal(lambda p: -x.enclosure_at(p))


def mul(x: ApproxReal, y: ApproxReal) -> ApproxReal:
    if x.exact is not None and y.exact is not None:
        return ApproxReal.from_rational(x.exact * y.exact)
    if x.exact == 0 or y.exact == 0:
        return ZERO
    if x.exact is not None:
        return scale(y, x.exact)
    if y.exact is not None:
        return scale(x, y.exact)

    def approx(p: int) -> Interval:
        # |x*y - x'*y'| <= |x| |y - y'| + |y'| |x - x'|; pad precision by the
        # operand magnitudes so the product interval meets the width bound.
        extra = _extra_bits(_magnitude_bound(x) + _magnitude_bound(y) + 1) + 1
        return x.enclosure_at(p + extra) * y.enclosure_at(p + extra)

    return ApproxReal(approx)


def scale(x: ApproxReal, q: RationalLike) -> ApproxReal:
    q = to_fraction(q)
    if x.exact is not None:
        return ApproxReal.from_rational(x.exact * q)
    if q == 0:
        return ZERO

    extra = _extra_bits(abs(q)) + 1
    return ApproxReal(lambda p: x.enclosure_at(p + extra).scale(q))


_ARITH_OPS = {
    "add": add,
    "sub": sub,
    "mul": mul,
    "neg": lambda x, y=None: neg(x),
    "scale": lambda x, q: scale(x, q),
}


def arith(op: str, x: ApproxReal, y=None) -> ApproxReal:
    """Dispatch on the operation name; see the named functions for semantics."""
    try:
        fn = _ARITH_OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    if op == "neg":
        return fn(x)
    return fn(x, y)


def sign_at(x: ApproxReal, p: int) -> Truth:
    """Sign of x as visible at precision p; the sign of an exact zero never
    resolves.  Resolved answers are stable under increasing p because
    enclosures nest."""
    enc = x.enclosure_at(p)
    if enc.strictly_positive():
        return Truth.TRUE
    if enc.strictly_negative():
        return Truth.FALSE
    return Truth.UNKNOWN


def merge(truth_stream: Callable[[int], Truth], x: ApproxReal,
          y: ApproxReal) -> ApproxReal:
    """Branch on a monotone truth stream without deciding it.

    Follows x once the stream resolves to FALSE and y once it resolves to
    TRUE.  While unresolved the interval hull of both operands is emitted,
    which is sound under the precondition that a never-resolving stream
    implies x and y denote the same real.  Violating the precondition makes
    the enclosure computation diverge.
    """
    if x.exact is not None and y.exact is not None and x.exact == y.exact:
        return x

    def approx(p: int) -> Interval:
        stage = p + 1
        while True:
            t = truth_stream(stage)
            if t is Truth.FALSE:
                return x.enclosure_at(p)
            if t is Truth.TRUE:
                return y.enclosure_at(p)
            hull = x.enclosure_at(stage).hull(y.enclosure_at(stage))
            if hull.width <= _pow2(p):
                return hull
            stage += 1

    return ApproxReal(approx)
