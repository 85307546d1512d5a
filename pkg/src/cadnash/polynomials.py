"""Degree-bounded polynomial arithmetic over stream-represented reals.

Polynomials carry an upper bound on their degree, never an exact degree:
leading coefficients may well represent zero.  Multivariate polynomials use
the dense recursive representation R[x_1,...,x_{n-1}][x_n], so coefficient
extraction with respect to the top variable is a primitive.

The projection operator used by the decomposition pipeline lives here, built
from reducta and principal subresultant coefficients.  Because exact degrees
are unknowable, subresultant computations enumerate every degree assumption
consistent with the bounds and return an over-approximating candidate list.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatchError
from .reals import (
    ApproxReal,
    Interval,
    Truth,
    add as real_add,
    merge,
    mul as real_mul,
    neg as real_neg,
    scale as real_scale,
    sign_at,
    to_fraction,
)

_ZERO = Fraction(0)


def _wrap_value(value) -> ApproxReal:
    if isinstance(value, ApproxReal):
        return value
    return ApproxReal.from_rational(to_fraction(value))


class MultiPoly:
    """Polynomial in variables x_1..x_level with ApproxReal coefficients.

    A level-0 polynomial is a bare real; at level n >= 1 the coefficient list
    is indexed by the power of x_n (the top variable) and holds level-(n-1)
    polynomials.  The variable count is exact metadata; degree bounds are
    upper bounds only.
    """

    __slots__ = ("level", "coeffs", "value", "_key_cache")

    def __init__(self, level: int, coeffs: Optional[list] = None, value=None):
        self.level = level
        self._key_cache = False
        if level == 0:
            if value is None:
                raise ValueError("level-0 polynomial needs a value")
            self.value = _wrap_value(value)
            self.coeffs = None
        else:
            if not coeffs:
                raise ValueError("level >= 1 polynomial needs coefficients")
            for c in coeffs:
                if not isinstance(c, MultiPoly) or c.level != level - 1:
                    raise ValueError("coefficient level mismatch")
            self.coeffs = list(coeffs)
            self.value = None

    @staticmethod
    def constant(level: int, value) -> "MultiPoly":
        p = MultiPoly(0, value=value)
        for lvl in range(1, level + 1):
            p = MultiPoly(lvl, coeffs=[p])
        return p

    @staticmethod
    def variable(level: int, index: int) -> "MultiPoly":
        """The monomial x_index (1-based) as a level-`level` polynomial."""
        if not 1 <= index <= level:
            raise DimensionMismatchError(
                f"variable x_{index} not available at level {level}")
        if index == level:
            zero = MultiPoly.constant(level - 1, 0)
            one = MultiPoly.constant(level - 1, 1)
            return MultiPoly(level, coeffs=[zero, one])
        return MultiPoly(level, coeffs=[MultiPoly.variable(level - 1, index)])

    @property
    def degree_bound(self) -> int:
        if self.level == 0:
            return 0
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> "MultiPoly":
        """Coefficient of x_top**i, zero when i exceeds the stored bound."""
        if self.level == 0:
            raise DimensionMismatchError("level-0 polynomial has no coefficients")
        if i <= self.degree_bound:
            return self.coeffs[i]
        return MultiPoly.constant(self.level - 1, 0)

    def exact_key(self):
        """Nested tuple of exact coefficient values, or None when any
        coefficient is not known exactly.  Trailing exact zeros are dropped so
        the key is canonical across degree-bound slack."""
        if self._key_cache is not False:
            return self._key_cache
        if self.level == 0:
            key = self.value.exact
        else:
            parts = []
            for c in self.coeffs:
                k = c.exact_key()
                if k is None:
                    self._key_cache = None
                    return None
                parts.append(k)
            while len(parts) > 1 and _key_is_zero(parts[-1]):
                parts.pop()
            key = tuple(parts)
        self._key_cache = key
        return key

    def is_syntactic_zero(self) -> bool:
        key = self.exact_key()
        return key is not None and _key_is_zero(key)

    def is_exact_constant(self) -> Optional[Fraction]:
        """The exact constant value when the polynomial is syntactically
        constant, else None."""
        key = self.exact_key()
        if key is None:
            return None
        while isinstance(key, tuple):
            if len(key) != 1:
                return None
            key = key[0]
        return key

    def trimmed(self) -> "MultiPoly":
        """Drop top coefficients that are syntactic zeros (representation
        maintenance; the represented polynomial is unchanged)."""
        if self.level == 0:
            return self
        coeffs = [c.trimmed() for c in self.coeffs]
        while len(coeffs) > 1 and coeffs[-1].is_syntactic_zero():
            coeffs.pop()
        return MultiPoly(self.level, coeffs=coeffs)

    def __repr__(self):
        if self.level == 0:
            return f"MultiPoly0({self.value!r})"
        return f"MultiPoly(level={self.level}, bound={self.degree_bound})"


def _key_is_zero(key) -> bool:
    if isinstance(key, tuple):
        return all(_key_is_zero(k) for k in key)
    return key == 0


@dataclass
class UniPoly:
    """Univariate polynomial: coefficient list c_0..c_d with d an upper bound."""

    coeffs: list

    def __post_init__(self):
        self.coeffs = [_wrap_value(c) for c in self.coeffs]
        if not self.coeffs:
            self.coeffs = [ApproxReal.from_rational(0)]

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1

    def exact_coeffs(self) -> Optional[list]:
        vals = [c.exact for c in self.coeffs]
        if any(v is None for v in vals):
            return None
        return vals

    def eval_fraction(self, x: Fraction) -> Fraction:
        vals = self.exact_coeffs()
        if vals is None:
            raise ValueError("polynomial has inexact coefficients")
        acc = _ZERO
        for c in reversed(vals):
            acc = acc * x + c
        return acc

    def eval_real(self, x: ApproxReal) -> ApproxReal:
        vals = self.exact_coeffs()
        if vals is not None and x.exact is not None:
            return ApproxReal.from_rational(self.eval_fraction(x.exact))
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = real_add(real_mul(acc, x), c)
        return acc

    def eval_interval(self, box: Interval, p: int) -> Interval:
        """Interval extension over a single interval at coefficient precision p."""
        acc = self.coeffs[-1].enclosure_at(p)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * box + c.enclosure_at(p)
        return acc

    def derivative(self) -> "UniPoly":
        if self.degree_bound == 0:
            return UniPoly([ApproxReal.from_rational(0)])
        return UniPoly([real_scale(self.coeffs[i], Fraction(i))
                        for i in range(1, self.degree_bound + 1)])

    def eval_interval_tight(self, box: Interval, p: int,
                            deriv: Optional["UniPoly"] = None) -> Interval:
        """Plain Horner image intersected with the centered form
        f(mid) + f'(box) * (box - mid); the latter avoids the dependency
        blowup near multiple roots."""
        naive = self.eval_interval(box, p)
        if deriv is None:
            deriv = self.derivative()
        m = box.mid
        fm = self.eval_real(ApproxReal.from_rational(m)).enclosure_at(p)
        offset = Interval(box.lo - m, box.hi - m)
        centered = fm + deriv.eval_interval(box, p) * offset
        return naive.intersect(centered)

    def to_multipoly(self) -> MultiPoly:
        return MultiPoly(1, coeffs=[MultiPoly(0, value=c) for c in self.coeffs])

    @staticmethod
    def from_multipoly(f: MultiPoly) -> "UniPoly":
        if f.level != 1:
            raise DimensionMismatchError("expected a level-1 polynomial")
        return UniPoly([c.value for c in f.coeffs])


@dataclass
class Matrix:
    """Rectangular matrix of polynomial (or real-valued) entries."""

    entries: list

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


# ---------------------------------------------------------------------------
# arithmetic


def poly_add(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    if f.level != g.level:
        raise DimensionMismatchError("level mismatch in add")
    if f.level == 0:
        return MultiPoly(0, value=real_add(f.value, g.value))
    d = max(f.degree_bound, g.degree_bound)
    coeffs = [poly_add(f.coeff(i), g.coeff(i)) for i in range(d + 1)]
    return MultiPoly(f.level, coeffs=coeffs)


def poly_neg(f: MultiPoly) -> MultiPoly:
    if f.level == 0:
        return MultiPoly(0, value=real_neg(f.value))
    return MultiPoly(f.level, coeffs=[poly_neg(c) for c in f.coeffs])


def poly_sub(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    return poly_add(f, poly_neg(g))


def poly_mul(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    if f.level != g.level:
        raise DimensionMismatchError("level mismatch in mul")
    if f.level == 0:
        return MultiPoly(0, value=real_mul(f.value, g.value))
    d = f.degree_bound + g.degree_bound
    # the degree bound grows to the sum even when a factor represents zero
    if f.is_syntactic_zero() or g.is_syntactic_zero():
        zero = MultiPoly.constant(f.level - 1, 0)
        return MultiPoly(f.level, coeffs=[zero] * (d + 1))
    acc = [None] * (d + 1)
    for i, ci in enumerate(f.coeffs):
        if ci.is_syntactic_zero():
            continue
        for j, cj in enumerate(g.coeffs):
            term = poly_mul(ci, cj)
            acc[i + j] = term if acc[i + j] is None else poly_add(acc[i + j], term)
    zero = MultiPoly.constant(f.level - 1, 0)
    coeffs = [c if c is not None else zero for c in acc]
    return MultiPoly(f.level, coeffs=coeffs)


def poly_scale(f: MultiPoly, q) -> MultiPoly:
    q = to_fraction(q)
    if f.level == 0:
        return MultiPoly(0, value=real_scale(f.value, q))
    return MultiPoly(f.level, coeffs=[poly_scale(c, q) for c in f.coeffs])


_ARITH = {"add": poly_add, "mul": poly_mul, "neg": lambda f, g=None: poly_neg(f)}


def poly_arith(op: str, f: MultiPoly, g: Optional[MultiPoly] = None) -> MultiPoly:
    fn = _ARITH.get(op)
    if fn is None:
        raise ValueError(f"unknown operation {op!r}")
    if op == "neg":
        return fn(f)
    return fn(f, g)


# ---------------------------------------------------------------------------
# evaluation


def _eval_exact(f: MultiPoly, xs: Sequence[Fraction]) -> Fraction:
    if f.level == 0:
        return f.value.exact
    x = xs[f.level - 1]
    acc = _eval_exact(f.coeffs[-1], xs)
    for c in reversed(f.coeffs[:-1]):
        acc = acc * x + _eval_exact(c, xs)
    return acc


def eval_point(f: MultiPoly, xs: Sequence[ApproxReal]) -> ApproxReal:
    """Horner evaluation; exact when the polynomial and point are exact."""
    xs = [_wrap_value(x) for x in xs]
    if len(xs) != f.level:
        raise DimensionMismatchError(
            f"point dimension {len(xs)} != level {f.level}")
    if f.exact_key() is not None and all(x.exact is not None for x in xs):
        return ApproxReal.from_rational(
            _eval_exact(f, [x.exact for x in xs]))
    return _eval_point_generic(f, xs)


def _eval_point_generic(f: MultiPoly, xs) -> ApproxReal:
    if f.level == 0:
        return f.value
    x = xs[f.level - 1]
    acc = _eval_point_generic(f.coeffs[-1], xs)
    for c in reversed(f.coeffs[:-1]):
        acc = real_add(real_mul(acc, x), _eval_point_generic(c, xs))
    return acc


def eval_fraction(f: MultiPoly, xs: Sequence[Fraction]) -> Fraction:
    """Exact evaluation; requires exact coefficients."""
    if len(xs) != f.level:
        raise DimensionMismatchError(
            f"point dimension {len(xs)} != level {f.level}")
    if f.exact_key() is None:
        raise ValueError("polynomial has inexact coefficients")
    return _eval_exact(f, [to_fraction(x) for x in xs])


def eval_box(f: MultiPoly, box: Sequence[Interval], p: int) -> Interval:
    """Interval extension: the result contains f(x) for every x in the box.

    Coefficient enclosures are taken at precision p; overestimation from the
    naive Horner extension is admitted.
    """
    if len(box) != f.level:
        raise DimensionMismatchError(
            f"box dimension {len(box)} != level {f.level}")
    return _eval_box(f, box, p)


def _eval_box(f: MultiPoly, box, p: int) -> Interval:
    if f.level == 0:
        return f.value.enclosure_at(p)
    x = box[f.level - 1]
    acc = _eval_box(f.coeffs[-1], box, p)
    for c in reversed(f.coeffs[:-1]):
        acc = acc * x + _eval_box(c, box, p)
    return acc


# ---------------------------------------------------------------------------
# structural operators


def derivative(f: MultiPoly) -> MultiPoly:
    """Formal derivative with respect to the top variable."""
    if f.level == 0:
        raise DimensionMismatchError("cannot differentiate a level-0 polynomial")
    if f.degree_bound == 0:
        return MultiPoly(f.level, coeffs=[MultiPoly.constant(f.level - 1, 0)])
    coeffs = [poly_scale(f.coeffs[i], Fraction(i))
              for i in range(1, f.degree_bound + 1)]
    return MultiPoly(f.level, coeffs=coeffs)


def partial_derivative(f: MultiPoly, index: int) -> MultiPoly:
    """Formal derivative with respect to x_index (1-based)."""
    if not 1 <= index <= f.level:
        raise DimensionMismatchError(f"no variable x_{index} at level {f.level}")
    if index == f.level:
        return derivative(f)
    return MultiPoly(f.level, coeffs=[partial_derivative(c, index)
                                      for c in f.coeffs])


def eval_box_tight(f: MultiPoly, box: Sequence[Interval], p: int,
                   partials: Optional[list] = None) -> Interval:
    """Box image intersected with the mean-value form
    f(mid) + sum_i (d f / d x_i)(box) * (box_i - mid_i)."""
    naive = eval_box(f, box, p)
    if f.level == 0:
        return naive
    if partials is None:
        partials = [partial_derivative(f, i) for i in range(1, f.level + 1)]
    mids = [iv.mid for iv in box]
    acc = eval_point(f, [ApproxReal.from_rational(m) for m in mids]).enclosure_at(p)
    for i, g in enumerate(partials):
        offset = Interval(box[i].lo - mids[i], box[i].hi - mids[i])
        if offset.lo == 0 and offset.hi == 0:
            continue
        acc = acc + eval_box(g, box, p) * offset
    return naive.intersect(acc)


def reductum(f: MultiPoly, k: int) -> MultiPoly:
    """Truncation to powers <= k of the top variable."""
    if f.level == 0:
        raise DimensionMismatchError("level-0 polynomial has no reducta")
    if not 0 <= k <= f.degree_bound:
        raise ValueError(f"reductum index {k} out of range 0..{f.degree_bound}")
    return MultiPoly(f.level, coeffs=f.coeffs[: k + 1])


def embed_at_level(f: MultiPoly, level: int) -> MultiPoly:
    """View f as a polynomial in more variables, constant in the new ones."""
    if level < f.level:
        raise DimensionMismatchError("cannot embed to a lower level")
    g = f
    while g.level < level:
        g = MultiPoly(g.level + 1, coeffs=[g])
    return g


def shift_vars(f: MultiPoly, offset: int) -> MultiPoly:
    """Rename x_i to x_{i+offset}; the result has level f.level + offset."""
    if offset == 0:
        return f
    if f.level == 0:
        return MultiPoly.constant(offset, f.value)
    coeffs = [shift_vars(c, offset) for c in f.coeffs]
    return MultiPoly(f.level + offset, coeffs=coeffs)


def substitute_prefix(f: MultiPoly, a: Sequence[ApproxReal]) -> UniPoly:
    """Substitute a point for all but the top variable."""
    if f.level == 0:
        raise DimensionMismatchError("nothing to substitute at level 0")
    if len(a) != f.level - 1:
        raise DimensionMismatchError(
            f"prefix dimension {len(a)} != {f.level - 1}")
    return UniPoly([eval_point(c, a) for c in f.coeffs])


# ---------------------------------------------------------------------------
# Sylvester matrices and principal subresultant coefficients


def _zero_like(level: int) -> MultiPoly:
    return MultiPoly.constant(level, 0)


def sylvester(f: MultiPoly, g: MultiPoly, m: int, n: int) -> Matrix:
    """Sylvester matrix of f and g treated as degree-m and degree-n
    polynomials in the top variable (m >= n).

    Layout convention used throughout the package: the first n rows hold the
    coefficients of x^{n-1} f .. f, the next m rows those of x^{m-1} g .. g,
    with columns indexed by descending degree m+n-1 .. 0.  Coefficients above
    a polynomial's stored bound read as zero; stored leading coefficients are
    used as-is even when they represent zero.
    """
    if f.level != g.level or f.level < 1:
        raise DimensionMismatchError("sylvester needs same level >= 1")
    if m < n:
        raise ValueError("assumed degrees must satisfy m >= n")
    if m > f.degree_bound or n > g.degree_bound:
        raise ValueError("assumed degree exceeds stored bound")
    return Matrix(_psc_rows(f, g, m, n, 0))


def _psc_rows(f: MultiPoly, g: MultiPoly, m: int, n: int, k: int) -> list:
    """Rows of the k-th subresultant matrix: x^{n-k-1}f..f, x^{m-k-1}g..g on
    the degree columns m+n-k-1 .. k."""
    size = m + n - 2 * k
    lvl = f.level - 1
    zero = _zero_like(lvl)
    degrees = list(range(m + n - k - 1, k - 1, -1))
    rows = []
    for j in range(n - k - 1, -1, -1):
        row = []
        for d in degrees:
            i = d - j
            row.append(f.coeff(i) if 0 <= i <= m else zero)
        rows.append(row)
    for j in range(m - k - 1, -1, -1):
        row = []
        for d in degrees:
            i = d - j
            row.append(g.coeff(i) if 0 <= i <= n else zero)
        rows.append(row)
    assert len(rows) == size and all(len(r) == size for r in rows)
    return rows


def det(matrix: Matrix) -> MultiPoly:
    """Determinant of a square polynomial matrix.

    Division-free expansion (dynamic programming over column subsets), so it
    is well defined even though entry degrees are only bounded, not known.
    Exact division of stream-represented polynomials is not available, which
    rules out fraction-free elimination here.
    """
    entries = matrix.entries
    size = matrix.rows
    if size != matrix.cols:
        raise ValueError("determinant of a non-square matrix")
    if size == 0:
        raise ValueError("empty determinant has no level to report")
    lvl = entries[0][0].level
    if size == 1:
        return entries[0][0]

    memo = {}
    missing = object()

    def minor(cols: tuple) -> Optional[MultiPoly]:
        # determinant of the lower-right block on the given columns; None
        # encodes a syntactically zero minor
        if len(cols) == 1:
            e = entries[size - 1][cols[0]]
            return None if e.is_syntactic_zero() else e
        cached = memo.get(cols, missing)
        if cached is not missing:
            return cached
        row = size - len(cols)
        acc = None
        for pos, c in enumerate(cols):
            e = entries[row][c]
            if e.is_syntactic_zero():
                continue
            rest = minor(cols[:pos] + cols[pos + 1:])
            if rest is None:
                continue
            term = poly_mul(e, rest)
            if pos % 2 == 1:
                term = poly_neg(term)
            acc = term if acc is None else poly_add(acc, term)
        memo[cols] = acc
        return acc

    result = minor(tuple(range(size)))
    return result if result is not None else _zero_like(lvl)


def psc(f: MultiPoly, g: MultiPoly, k: int, m: int, n: int) -> MultiPoly:
    """k-th principal subresultant coefficient under assumed degrees (m, n).

    psc_0 is the resultant; psc_n equals lc(g)^(m-n) under this layout (an
    empty matrix has determinant 1).  For n = 0 this yields g^m, the
    resultant with a constant.
    """
    if f.level != g.level or f.level < 1:
        raise DimensionMismatchError("psc needs same level >= 1")
    if not 0 <= k <= n <= m:
        raise ValueError("need 0 <= k <= n <= m")
    if m > f.degree_bound or n > g.degree_bound:
        raise ValueError("assumed degree exceeds stored bound")
    size = m + n - 2 * k
    if size == 0:
        return MultiPoly.constant(f.level - 1, 1)
    return det(Matrix(_psc_rows(f, g, m, n, k)))


def psc_candidates(f: MultiPoly, g: MultiPoly) -> list:
    """All psc values consistent with the degree bounds.

    Every well-defined psc of the true (unknown) degrees appears: the list
    ranges over all assumed degree pairs, symmetrized so the larger degree
    comes first.  Assumed degrees whose leading coefficient is syntactically
    zero cannot be the true degree and are skipped; duplicates (by exact
    coefficient key) are dropped.
    """
    if f.level != g.level or f.level < 1:
        raise DimensionMismatchError("psc_candidates needs same level >= 1")
    out = []
    seen = set()
    for ma in range(f.degree_bound + 1):
        if _assumed_lc_is_syntactic_zero(f, ma):
            continue
        for na in range(g.degree_bound + 1):
            if _assumed_lc_is_syntactic_zero(g, na):
                continue
            if ma >= na:
                items = [psc(f, g, k, ma, na) for k in range(na + 1)]
            else:
                items = [psc(g, f, k, na, ma) for k in range(ma + 1)]
            for item in items:
                key = item.exact_key()
                if key is not None:
                    if key in seen:
                        continue
                    seen.add(key)
                out.append(item)
    return out


def _assumed_lc_is_syntactic_zero(f: MultiPoly, deg: int) -> bool:
    # degree `deg` is impossible when the would-be leading coefficient is a
    # syntactic zero (the polynomial could still be identically zero, but
    # then it has no well-defined psc to cover)
    return deg > 0 and f.coeff(deg).is_syntactic_zero()


# ---------------------------------------------------------------------------
# projection


def _flatten_key(key, out):
    if isinstance(key, tuple):
        for k in key:
            _flatten_key(k, out)
    else:
        out.append(key)


def _scale_key(key, factor):
    if isinstance(key, tuple):
        return tuple(_scale_key(k, factor) for k in key)
    return key * factor


def scalar_class_key(f: MultiPoly):
    """Key identifying f up to a nonzero rational factor (roots and the
    sign partition of a family are invariant under such scaling).  None when
    coefficients are inexact or the polynomial is syntactically zero."""
    key = f.exact_key()
    if key is None:
        return None
    leaves = []
    _flatten_key(key, leaves)
    pivot = next((v for v in leaves if v != 0), None)
    if pivot is None:
        return None
    return _scale_key(key, 1 / pivot)


def proj(F: Sequence[MultiPoly]) -> list:
    """One projection step: level n polynomials to level n-1.

    Emits (i) every coefficient polynomial, (ii) psc candidates of each
    polynomial with its top-variable derivative, (iii) psc candidates of each
    pair of distinct polynomials.  Assumed-degree enumeration inside
    psc_candidates ranges over all truncations, so a single call per
    polynomial (resp. pair) covers every reductum combination.

    The output over-approximates the true projection set; duplicates are
    dropped, pairs involving a syntactic constant contribute nothing but
    constants and are skipped, and the psc enumeration runs over one
    representative per scalar class (scaled polynomials duplicate each
    other's root and sign structure, so the induced decomposition is the
    same).
    """
    if not F:
        return []
    level = F[0].level
    if level < 2:
        raise DimensionMismatchError("projection needs level >= 2")
    for f in F:
        if f.level != level:
            raise DimensionMismatchError("mixed levels in projection input")
    polys = [f.trimmed() for f in F]
    out = []
    seen = set()

    def emit(p: MultiPoly):
        key = p.exact_key()
        if key is not None:
            if key in seen:
                return
            seen.add(key)
        out.append(p)

    reps = []
    classes = set()
    for f in polys:
        if f.degree_bound == 0 and f.coeffs[0].is_exact_constant() is not None:
            continue
        cls = scalar_class_key(f)
        if cls is None:
            if f.exact_key() is None or not f.is_syntactic_zero():
                reps.append(f)
            continue
        if cls in classes:
            continue
        classes.add(cls)
        reps.append(f)

    for f in polys:
        for c in f.coeffs:
            emit(c)
    for f in reps:
        if f.degree_bound >= 1:
            for item in psc_candidates(f, derivative(f)):
                emit(item)
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if reps[i].degree_bound >= 1 and reps[j].degree_bound >= 1:
                for item in psc_candidates(reps[i], reps[j]):
                    emit(item)
    return out


# ---------------------------------------------------------------------------
# minimum of |f| over the unit cube, and MakeZero


def _corners_and_center(n: int):
    pts = []
    for mask in range(2**n):
        pts.append(tuple(Fraction((mask >> i) & 1) for i in range(n)))
    pts.append(tuple(Fraction(1, 2) for _ in range(n)))
    return pts


def hypercube_min_abs(f: MultiPoly, p: int) -> Interval:
    """Enclosure of min |f| over [0,1]^n with width <= 2**-p.

    Branch and bound: interval evaluation under subdivision yields lower
    bounds, point evaluations at box centers upper bounds.  Boxes whose lower
    bound exceeds the best upper bound are pruned; the widest coordinate is
    bisected first, processing in first-in-first-out rounds.  If certified
    positive and negative values are both seen the minimum is exactly zero
    (the cube is connected) and [0, 0] is returned.
    """
    n = f.level
    if n < 1:
        raise DimensionMismatchError("needs at least one variable")
    q = p + 4
    tol = Fraction(1, 2**p)

    seen_pos = False
    seen_neg = False
    upper = None

    def eval_at(point) -> Interval:
        nonlocal seen_pos, seen_neg, upper
        enc = eval_point(f, [ApproxReal.from_rational(c) for c in point])
        enc = enc.enclosure_at(q)
        if enc.strictly_positive():
            seen_pos = True
        elif enc.strictly_negative():
            seen_neg = True
        mag = enc.abs().hi
        if upper is None or mag < upper:
            upper = mag
        return enc

    for pt in _corners_and_center(n):
        eval_at(pt)
        if seen_pos and seen_neg:
            return Interval(_ZERO, _ZERO)

    unit = Interval(Fraction(0), Fraction(1))
    frontier = [tuple(unit for _ in range(n))]
    partials = [partial_derivative(f, i) for i in range(1, n + 1)]
    while True:
        lows = []
        survivors = []
        for box in frontier:
            enc = eval_box_tight(f, box, q, partials)
            low = enc.dist_to_zero()
            if low > upper:
                continue
            survivors.append(box)
            lows.append(low)
        lower = min(lows) if lows else upper
        if seen_pos and seen_neg:
            return Interval(_ZERO, _ZERO)
        if upper - lower <= tol:
            return Interval(lower, upper)
        frontier = []
        for box in survivors:
            widths = [iv.width for iv in box]
            axis = widths.index(max(widths))
            mid = box[axis].mid
            eval_at(tuple(iv.mid if i != axis else mid
                          for i, iv in enumerate(box)))
            for half in (Interval(box[axis].lo, mid), Interval(mid, box[axis].hi)):
                child = tuple(half if i == axis else iv
                              for i, iv in enumerate(box))
                frontier.append(child)


def min_abs_real(f: MultiPoly) -> ApproxReal:
    """min |f| over the unit cube as a stream-represented real."""
    return ApproxReal(lambda p: hypercube_min_abs(f, p))


def make_zero(f: MultiPoly) -> MultiPoly:
    """Shift f in value by the least amount that forces a zero in [0,1]^n.

    Returns g = f - cbar where cbar carries the sign of f at the origin and
    magnitude min |f|.  When f already vanishes somewhere in the cube the
    shift is zero and f itself is returned whenever that is detectable
    exactly (certified sign change, or an exact root at the origin).
    """
    if f.level < 1:
        raise DimensionMismatchError("needs at least one variable")
    n = f.level
    origin = [ApproxReal.from_rational(0)] * n
    f_at_origin = eval_point(f, origin)
    if f_at_origin.exact == 0:
        return f
    probe = hypercube_min_abs(f, 8)
    if probe.lo == 0 and probe.hi == 0:
        return f
    c = min_abs_real(f)
    cbar = merge(lambda s: sign_at(f_at_origin, s), real_neg(c), c)
    shift = MultiPoly.constant(n, cbar)
    return poly_sub(f, shift)
