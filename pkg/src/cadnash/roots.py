"""Root finding for degree-bounded univariate polynomials.

Monic polynomials get validated complex root enclosures: rectangles in the
complex plane whose root counts are certified by an exact interval winding
number (sign bookkeeping on boundary pieces, no transcendental functions).
Floating-point iteration is used only to *propose* rectangles; every count
and every enclosure is certified with exact rational arithmetic, and a full
subdivision of the Cauchy disc serves as fallback when proposals fail.

Non-monic polynomials, whose degree is only bounded and which may even be
identically zero, are handled by the candidate machinery: a semidecidable
nonzero witness plus subdivision-based real root candidates, combined into a
total multivalued root finder over [0, 1].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import NoCandidateError
from .polynomials import UniPoly
from .reals import ApproxReal, Interval, to_fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


def _pow2(p: int) -> Fraction:
    return Fraction(1, 2**p) if p >= 0 else Fraction(2 ** (-p))


@dataclass(frozen=True)
class ComplexBox:
    """Axis-aligned rectangle in the complex plane."""

    re: Interval
    im: Interval

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def __add__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re + other.re, self.im + other.im)

    def __mul__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re * other.re - self.im * other.im,
                          self.re * other.im + self.im * other.re)

    @staticmethod
    def from_real_interval(iv: Interval) -> "ComplexBox":
        return ComplexBox(iv, Interval.point(0))

    @staticmethod
    def point(re: Fraction, im: Fraction) -> "ComplexBox":
        return ComplexBox(Interval.point(re), Interval.point(im))


@dataclass
class RootMultiset:
    """Unordered root enclosures of a monic polynomial; multiplicity is
    encoded by repetition, so the length equals the degree."""

    roots: List[ComplexBox]

    def sorted_for_display(self) -> List[ComplexBox]:
        return sorted(self.roots, key=lambda b: (b.re.lo, b.im.lo))


class _WindingFailure(Exception):
    """Boundary certification failed (a root may sit on or near it)."""


def _ceval(coeff_boxes: Sequence[ComplexBox], z: ComplexBox) -> ComplexBox:
    acc = coeff_boxes[-1]
    for c in reversed(coeff_boxes[:-1]):
        acc = acc * z + c
    return acc


def _intersect_boxes(a: ComplexBox, b: ComplexBox) -> ComplexBox:
    return ComplexBox(a.re.intersect(b.re), a.im.intersect(b.im))


def _ceval_tight(coeff_boxes, deriv_boxes, z: ComplexBox) -> ComplexBox:
    """Enclosure of f on the box via the centered form f(m) + f'(B)(B - m),
    intersected with the plain Horner image.

    The centered form is sound for polynomials along segments (the integral
    mean of f' lies in the convex interval image); it avoids the dependency
    blowup of plain Horner near multiple roots, where image widths must
    shrink quadratically with the distance to the root.
    """
    naive = _ceval(coeff_boxes, z)
    m = ComplexBox.point(z.re.mid, z.im.mid)
    offset = ComplexBox(Interval(z.re.lo - m.re.lo, z.re.hi - m.re.lo),
                        Interval(z.im.lo - m.im.lo, z.im.hi - m.im.lo))
    centered = _ceval(coeff_boxes, m) + _ceval(deriv_boxes, z) * offset
    return _intersect_boxes(naive, centered)


def _piece_label(img: ComplexBox) -> str:
    if img.im.strictly_positive():
        return "U"
    if img.im.strictly_negative():
        return "D"
    if img.re.strictly_positive():
        return "R"
    if img.re.strictly_negative():
        return "L"
    raise _WindingFailure("image box contains the origin")


def _edge_labels(coeffs, derivs, start, end, depth_budget) -> List[str]:
    """Labels of certified boundary pieces along one edge, in traversal
    order.  start/end are (re, im) Fractions on an axis-aligned segment."""
    out: List[str] = []

    def walk(a, b, depth):
        box = ComplexBox(Interval(min(a[0], b[0]), max(a[0], b[0])),
                         Interval(min(a[1], b[1]), max(a[1], b[1])))
        img = _ceval_tight(coeffs, derivs, box)
        if not img.contains_zero():
            out.append(_piece_label(img))
            return
        if depth <= 0:
            raise _WindingFailure("piece refinement budget exhausted")
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        walk(a, mid, depth - 1)
        walk(mid, b, depth - 1)

    walk(start, end, depth_budget)
    return out


def _winding_number(coeffs: Sequence[ComplexBox], rect: ComplexBox,
                    depth_budget: int = 24) -> int:
    """Exact number of roots (with multiplicity) inside the rectangle.

    Counts signed crossings of the positive real axis by the boundary image.
    Each certified boundary piece maps into an open half-plane; crossings can
    only happen inside maximal runs of re-definite pieces, and their net sign
    is read off the im-definite runs on either side.  Raises when a boundary
    piece cannot be certified (root on or too close to the boundary).
    """
    x0, x1 = rect.re.lo, rect.re.hi
    y0, y1 = rect.im.lo, rect.im.hi
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    derivs = [boxi * ComplexBox.point(Fraction(i + 1), _ZERO)
              for i, boxi in enumerate(coeffs[1:])]
    labels: List[str] = []
    for i in range(4):
        labels.extend(_edge_labels(coeffs, derivs, corners[i],
                                   corners[(i + 1) % 4], depth_budget))

    if all(lab in "RL" for lab in labels):
        return 0
    start = next(i for i, lab in enumerate(labels) if lab in "UD")
    labels = labels[start:] + labels[:start]

    # collapse into alternating definite runs and homogeneous gaps
    winding = 0
    idx = 0
    n = len(labels)
    while idx < n:
        run_label = labels[idx]
        while idx < n and labels[idx] == run_label:
            idx += 1
        gap_label = None
        while idx < n and labels[idx] in "RL":
            if gap_label is not None and labels[idx] != gap_label:
                raise _WindingFailure("inconsistent gap labels")
            gap_label = labels[idx]
            idx += 1
        next_label = labels[idx] if idx < n else labels[0]
        if gap_label is None and next_label != run_label:
            raise _WindingFailure("adjacent opposite half-planes")
        if gap_label == "R":
            if run_label == "D" and next_label == "U":
                winding += 1
            elif run_label == "U" and next_label == "D":
                winding -= 1
    return winding


def _coeff_boxes(coeffs: Sequence[ApproxReal], q: int) -> List[ComplexBox]:
    return [ComplexBox.from_real_interval(c.enclosure_at(q)) for c in coeffs]


def _dyadic(x: float, bits: int = 40) -> Fraction:
    return Fraction(round(x * (1 << bits)), 1 << bits)


def _durand_kerner(coeffs_float: List[float], k: int) -> List[complex]:
    """Float root proposals for a monic polynomial (seeding only; every
    claim derived from these is certified independently)."""
    zs = [(0.4 + 0.9j) ** (i + 1) for i in range(k)]
    poly = coeffs_float + [1.0]
    for _ in range(400):
        max_step = 0.0
        for i in range(k):
            num = 0j
            for c in reversed(poly):
                num = num * zs[i] + c
            den = 1.0 + 0j
            for j in range(k):
                if j != i:
                    den *= zs[i] - zs[j]
            if den == 0:
                den = 1e-30
            step = num / den
            zs[i] -= step
            max_step = max(max_step, abs(step))
        if max_step < 1e-14:
            break
    return zs


def _cauchy_bound(coeffs: Sequence[ApproxReal]) -> Fraction:
    best = Fraction(0)
    for c in coeffs:
        enc = c.enclosure_at(4)
        best = max(best, abs(enc.lo), abs(enc.hi))
    return best + 1


_CUT_SHIFTS = (Fraction(1, 2), Fraction(3, 7), Fraction(4, 7),
               Fraction(5, 11), Fraction(6, 11), Fraction(7, 13),
               Fraction(6, 13), Fraction(8, 17))


class _RootCounter:
    """Winding-number queries against one polynomial with retryable
    coefficient precision."""

    def __init__(self, coeffs: Sequence[ApproxReal], base_q: int):
        self.coeffs = coeffs
        self.base_q = base_q

    def count(self, rect: ComplexBox, attempt: int = 0) -> int:
        q = self.base_q + 20 * attempt
        depth = 24 + 8 * attempt
        return _winding_number(_coeff_boxes(self.coeffs, q), rect, depth)

    def count_retry(self, rect: ComplexBox, attempts: int = 3) -> int:
        last: Optional[_WindingFailure] = None
        for attempt in range(attempts):
            try:
                return self.count(rect, attempt)
            except _WindingFailure as exc:
                last = exc
        raise last


def _split_rect(counter: _RootCounter, rect: ComplexBox, count: int
                ) -> List[Tuple[ComplexBox, int]]:
    """Bisect a certified rectangle along its wider axis; the cut line is
    shifted until it avoids roots.  The parent's boundary is already
    certified, so the second child's count is derived by subtraction."""
    horizontal = rect.re.width >= rect.im.width
    side = rect.re if horizontal else rect.im
    for shift in _CUT_SHIFTS:
        cut = side.lo + side.width * shift
        if horizontal:
            low = ComplexBox(Interval(side.lo, cut), rect.im)
            high = ComplexBox(Interval(cut, side.hi), rect.im)
        else:
            low = ComplexBox(rect.re, Interval(side.lo, cut))
            high = ComplexBox(rect.re, Interval(cut, side.hi))
        try:
            c_low = counter.count_retry(low, attempts=2)
        except _WindingFailure:
            continue
        c_high = count - c_low
        out = []
        if c_low > 0:
            out.append((low, c_low))
        if c_high > 0:
            out.append((high, c_high))
        return out
    raise _WindingFailure("no root-free cut line found")


def _refine_to_width(counter: _RootCounter, rect: ComplexBox, count: int,
                     width: Fraction) -> List[Tuple[ComplexBox, int]]:
    done: List[Tuple[ComplexBox, int]] = []
    work = [(rect, count)]
    while work:
        r, m = work.pop()
        if r.re.width <= width and r.im.width <= width:
            done.append((r, m))
            continue
        work.extend(_split_rect(counter, r, m))
    return done


def _exact_complex_eval(coeffs: List[Fraction], re: Fraction, im: Fraction
                        ) -> Tuple[Fraction, Fraction]:
    acc_re, acc_im = _ZERO, _ZERO
    for c in reversed(coeffs):
        acc_re, acc_im = (acc_re * re - acc_im * im + c,
                          acc_re * im + acc_im * re)
    return acc_re, acc_im


def _try_snap(exact_coeffs: Optional[List[Fraction]], rect: ComplexBox,
              mult: int) -> Optional[Tuple[Fraction, Fraction]]:
    """Replace a certified rectangle by an exact rational root when one of
    minimal denominator lies inside and has multiplicity >= the count."""
    if exact_coeffs is None:
        return None
    q_re = simplest_between(rect.re.lo, rect.re.hi)
    q_im = simplest_between(rect.im.lo, rect.im.hi)
    coeffs = list(exact_coeffs)
    for _ in range(mult):
        v_re, v_im = _exact_complex_eval(coeffs, q_re, q_im)
        if v_re != 0 or v_im != 0:
            return None
        coeffs = [coeffs[i] * i for i in range(1, len(coeffs))]
        if not coeffs:
            break
    return (q_re, q_im)


def monic_complex_roots(a: Sequence[ApproxReal], p: int) -> RootMultiset:
    """All complex roots of x^k + a_{k-1} x^{k-1} + ... + a_0, as a multiset
    of rectangles with per-component width <= 2**-p.

    Root counts come from exact winding numbers; the returned multiset is
    additionally validated by expanding the product of (x - root) boxes and
    checking that each input coefficient enclosure is met.
    """
    a = [c if isinstance(c, ApproxReal) else ApproxReal.from_rational(c)
         for c in a]
    k = len(a)
    if k == 0:
        return RootMultiset([])
    coeffs = list(a) + [ApproxReal.from_rational(1)]
    exact = [c.exact for c in coeffs]
    exact_coeffs = None if any(e is None for e in exact) else exact

    if k == 1 and exact_coeffs is not None:
        box = ComplexBox.point(-exact_coeffs[0], _ZERO)
        multiset = RootMultiset([box])
        _validate_by_expansion(coeffs, multiset, p)
        return multiset

    width = _pow2(p)
    counter = _RootCounter(coeffs, base_q=p + 10)
    bound = _cauchy_bound(a)
    big = ComplexBox(Interval(-bound, bound), Interval(-bound, bound))

    roots: List[ComplexBox] = []

    def settle(rect: ComplexBox, m: int):
        snapped = _try_snap(exact_coeffs, rect, m)
        if snapped is not None:
            roots.extend([ComplexBox.point(*snapped)] * m)
            return
        for small, sm in _refine_to_width(counter, rect, m, width):
            snapped = _try_snap(exact_coeffs, small, sm)
            box = ComplexBox.point(*snapped) if snapped is not None else small
            roots.extend([box] * sm)

    regions = None
    for pad_floor in (1e-11, 1e-7, 1e-4):
        seeded = _seeded_regions(coeffs, k, counter, bound, pad_floor)
        if seeded is None:
            continue
        try:
            saved = list(roots)
            for rect, m in seeded:
                settle(rect, m)
            regions = True
            break
        except _WindingFailure:
            roots[:] = saved
            continue
    if regions is None:
        # authoritative path: exhaustive subdivision of the Cauchy square
        roots.clear()
        settle(big, k)

    multiset = RootMultiset(roots)
    _validate_by_expansion(coeffs, multiset, p)
    return multiset


def _seeded_regions(coeffs, k, counter: _RootCounter, bound: Fraction,
                    pad_floor: float) -> Optional[List[Tuple[ComplexBox, int]]]:
    """Disjoint certified rectangles proposed from float iteration, or None
    when the proposals cannot be certified."""
    try:
        floats = [float(c.enclosure_at(50).mid) for c in coeffs[:-1]]
    except (OverflowError, ValueError):
        return None
    proposals = _durand_kerner(floats, k)

    # group proposals that are too close to separate
    eps = max(pad_floor * 10, float(bound) * 1e-12)
    clusters: List[List[complex]] = []
    for z in sorted(proposals, key=lambda w: (w.real, w.imag)):
        for cl in clusters:
            if any(abs(z - w) < eps for w in cl):
                cl.append(z)
                break
        else:
            clusters.append([z])

    def rect_of(cl: List[complex]) -> ComplexBox:
        res = [w.real for w in cl]
        ims = [w.imag for w in cl]
        spread = max(max(res) - min(res), max(ims) - min(ims))
        pad = _dyadic(max(spread * 2, pad_floor))
        return ComplexBox(
            Interval(_dyadic(min(res)) - pad, _dyadic(max(res)) + pad),
            Interval(_dyadic(min(ims)) - pad, _dyadic(max(ims)) + pad))

    rects = [rect_of(cl) for cl in clusters]
    # merge overlapping proposals until pairwise disjoint
    changed = True
    while changed and len(rects) > 1:
        changed = False
        for i, j in itertools.combinations(range(len(rects)), 2):
            ri, rj = rects[i], rects[j]
            if ri.re.intersects(rj.re) and ri.im.intersects(rj.im):
                merged = ComplexBox(ri.re.hull(rj.re), ri.im.hull(rj.im))
                rects = [r for t, r in enumerate(rects) if t not in (i, j)]
                rects.append(merged)
                changed = True
                break

    regions: List[Tuple[ComplexBox, int]] = []
    total = 0
    for rect in rects:
        try:
            m = counter.count_retry(rect, attempts=2)
        except _WindingFailure:
            return None
        if m > 0:
            regions.append((rect, m))
            total += m
    if total != k:
        return None
    return regions


def _validate_by_expansion(coeffs, multiset: RootMultiset, p: int):
    """Inverse-map check: the expanded product of (x - root) must meet every
    input coefficient enclosure."""
    k = len(coeffs) - 1
    acc = [ComplexBox.point(_ONE, _ZERO)]
    for box in multiset.roots:
        neg_root = ComplexBox(-box.re, -box.im)
        nxt = [ComplexBox.point(_ZERO, _ZERO) for _ in range(len(acc) + 1)]
        for i, c in enumerate(acc):
            nxt[i + 1] = nxt[i + 1] + c
            prod = c * neg_root
            nxt[i] = nxt[i] + prod
        acc = nxt
    for i in range(k):
        want = coeffs[i].enclosure_at(p)
        got = acc[i]
        if not (got.re.intersects(want) and got.im.contains_zero()):
            raise AssertionError(
                f"root multiset failed the inverse-expansion check at "
                f"coefficient {i}")


def select_real_root(rm: RootMultiset, lo, hi, p: int) -> ApproxReal:
    """Pick a real root from a multiset, restricted to [lo, hi].

    Candidates whose imaginary enclosure excludes 0 or whose real enclosure
    misses [lo, hi] are eliminated; the first survivor in display order is
    returned (all survivors are equally valid).  Raises NoCandidateError when
    everything is eliminated, which refutes the caller's assertion that a
    real root exists in range (or shows p insufficient).
    """
    lo = to_fraction(lo)
    hi = to_fraction(hi)
    window = Interval(lo, hi)
    for box in rm.sorted_for_display():
        if not box.im.contains_zero():
            continue
        if not box.re.intersects(window):
            continue
        mid = min(max(box.re.mid, lo), hi)
        return ApproxReal.from_rational(mid)
    raise NoCandidateError(f"no real root candidate in [{lo}, {hi}] at precision {p}")


# ---------------------------------------------------------------------------
# degree-bounded (possibly zero) polynomials over [0, 1]


@dataclass(frozen=True)
class NonzeroWitness:
    """Certificate that some coefficient is bounded away from zero."""

    index: int
    stage: int


def _witness_stages(stage: int):
    s = 0
    while s <= min(stage, 64):
        yield s
        s += 1
    s = 80
    while s <= stage:
        yield s
        s = (s * 5) // 4 + 1
    if stage > 64:
        yield stage


def nonzero_witness(f: UniPoly, stage: int) -> Optional[NonzeroWitness]:
    """First coefficient certified nonzero within the stage budget.

    Scans (stage, index) pairs in a fixed order (dense for small stages, then
    geometrically thinned), so the witness is stable: once present it stays
    present with the same index at every larger budget.  The zero polynomial
    is never certified.
    """
    for s in _witness_stages(stage):
        for i, c in enumerate(f.coeffs):
            if not c.enclosure_at(s).contains_zero():
                return NonzeroWitness(index=i, stage=s)
    return None


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in [lo, hi]."""
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return _ZERO
    if hi < 0:
        return -simplest_between(-hi, -lo)
    floor_lo = lo.numerator // lo.denominator
    if lo == floor_lo:
        return Fraction(floor_lo)
    if floor_lo + 1 <= hi:
        return Fraction(floor_lo + 1)
    inner = simplest_between(1 / (hi - floor_lo), 1 / (lo - floor_lo))
    return floor_lo + 1 / inner


_NONROOT_ROUNDS = 200


def _find_nonroot(f: UniPoly, grid: Callable[[int], Fraction], p: int) -> Fraction:
    """Dovetailed search for a grid point where f is certified nonzero."""
    for budget in range(_NONROOT_ROUNDS):
        for j in range(budget + 1):
            q = grid(j)
            enc = f.eval_real(ApproxReal.from_rational(q)).enclosure_at(p + 2 * budget)
            if not enc.contains_zero():
                return q
    raise RuntimeError("could not certify a non-root endpoint (is f zero?)")


def candidate_cap(degree_bound: int) -> int:
    """Upper bound on the candidate list length: 3**k where k = ceil((d-1)/2)
    bounds the number of local minima of a degree <= d polynomial."""
    k = max(0, -(-(degree_bound - 1) // 2))
    return 3**k


def real_root_candidates(f: UniPoly, witness: NonzeroWitness, p: int
                         ) -> List[ApproxReal]:
    """Finite candidate list covering every root of f in [0, 1] to 2**-p.

    Picks certified non-root endpoints a <= 0 and b >= 1, then keeps
    subdividing [a, b], retaining intervals whose image encloses zero.
    Adjacent retained intervals merge into clusters; clusters are deepened
    until they number at most the degree-derived cap and are narrower than
    2**-p.  Cluster centers are the candidates, snapped to an exact rational
    root when one of minimal denominator lies inside, and clamped to [0, 1].
    """
    if witness is None:
        raise ValueError("a nonzero witness is required")
    a = _find_nonroot(f, lambda j: Fraction(-j, 2), p)
    b = _find_nonroot(f, lambda j: 1 + Fraction(j, 2), p)
    cap = candidate_cap(f.degree_bound)
    exact = f.exact_coeffs()
    tol = _pow2(p)

    depth_extra = 3
    clusters = None
    for _ in range(p + 48):
        target = _pow2(p + depth_extra)
        clusters = _zero_clusters(f, a, b, target, q=p + 8 + depth_extra)
        clusters = [cl for cl in clusters
                    if cl[1] >= -tol and cl[0] <= 1 + tol]
        if len(clusters) <= cap and all(hi - lo <= tol for lo, hi in clusters):
            break
        depth_extra += 2
    else:
        raise RuntimeError("root clusters failed to separate")

    out: List[ApproxReal] = []
    for lo, hi in clusters:
        point = None
        if exact is not None:
            s_lo, s_hi = max(lo, _ZERO), min(hi, _ONE)
            if s_lo <= s_hi:
                q = simplest_between(s_lo, s_hi)
                if f.eval_fraction(q) == 0:
                    point = q
        if point is None:
            point = (lo + hi) / 2
        point = min(max(point, _ZERO), _ONE)
        out.append(ApproxReal.from_rational(point))
    return out


def _zero_clusters(f: UniPoly, a: Fraction, b: Fraction, target: Fraction,
                   q: int) -> List[Tuple[Fraction, Fraction]]:
    exact = f.exact_coeffs()
    if exact is not None:
        depth = 0
        span = b - a
        while span > target:
            span /= 2
            depth += 1
        return _zero_clusters_int(exact, a, b, depth)

    kept: List[Tuple[Fraction, Fraction]] = []
    deriv = f.derivative()

    def walk(lo: Fraction, hi: Fraction):
        img = f.eval_interval_tight(Interval(lo, hi), q, deriv)
        if not img.contains_zero():
            return
        if hi - lo <= target:
            if kept and kept[-1][1] == lo:
                kept[-1] = (kept[-1][0], hi)
            else:
                kept.append((lo, hi))
            return
        mid = (lo + hi) / 2
        walk(lo, mid)
        walk(mid, hi)

    walk(a, b)
    return kept


def _zero_clusters_int(coeffs: List[Fraction], a: Fraction, b: Fraction,
                       depth: int) -> List[Tuple[Fraction, Fraction]]:
    """Integer-arithmetic subdivision for exact coefficients.

    Endpoints of subintervals of [a, b] live on the grid N / (q * 2^e); both
    the plain interval image and the centered-form test reduce to integer
    Horner evaluations, with zero containment decided by
    |f(mid)| <= halfwidth * max|f'| in one consistent scaling.
    """
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    C = [int(c * den) for c in coeffs]
    while len(C) > 1 and C[-1] == 0:
        C.pop()
    D = [i * C[i] for i in range(1, len(C))]
    deg = len(C) - 1
    grid = _lcm(a.denominator, b.denominator)
    n_a = a.numerator * (grid // a.denominator)
    n_b = b.numerator * (grid // b.denominator)

    def horner(coefs, n: int, base: int) -> int:
        if not coefs:
            return 0
        res = coefs[-1]
        for i in range(len(coefs) - 2, -1, -1):
            res = res * n + coefs[i] * base ** (len(coefs) - 1 - i)
        return res

    def horner_interval(coefs, n0: int, n1: int, base: int) -> Tuple[int, int]:
        if not coefs:
            return (0, 0)
        lo = hi = coefs[-1]
        for i in range(len(coefs) - 2, -1, -1):
            c0, c1, c2, c3 = lo * n0, lo * n1, hi * n0, hi * n1
            shift = coefs[i] * base ** (len(coefs) - 1 - i)
            lo = min(c0, c1, c2, c3) + shift
            hi = max(c0, c1, c2, c3) + shift
        return lo, hi

    kept: List[Tuple[Fraction, Fraction]] = []

    def emit(n0: int, n1: int, e: int):
        base = grid << e
        lo = Fraction(n0, base)
        hi = Fraction(n1, base)
        if kept and kept[-1][1] == lo:
            kept[-1] = (kept[-1][0], hi)
        else:
            kept.append((lo, hi))

    def contains_zero(n0: int, n1: int, e: int) -> bool:
        base = grid << e
        flo, fhi = horner_interval(C, n0, n1, base)
        if flo > 0 or fhi < 0:
            return False
        if deg >= 1:
            # centered form: 0 in image iff |f(mid)| <= halfwidth * max|f'|;
            # at scale base2 both sides carry the same power of base2
            base2 = base << 1
            fm = horner(C, n0 + n1, base2)
            dlo, dhi = horner_interval(D, n0 << 1, n1 << 1, base2)
            dmax = max(abs(dlo), abs(dhi))
            if abs(fm) > (n1 - n0) * dmax:
                return False
        return True

    def walk(n0: int, n1: int, e: int):
        if not contains_zero(n0, n1, e):
            return
        if e >= depth:
            emit(n0, n1, e)
            return
        mid = n0 + n1
        walk(n0 << 1, mid, e + 1)
        walk(mid, n1 << 1, e + 1)

    walk(n_a, n_b, 0)
    return kept


def _gcd(x: int, y: int) -> int:
    while y:
        x, y = y, x % y
    return x


def _lcm(x: int, y: int) -> int:
    return x * y // _gcd(x, y)


@dataclass
class BRootReport:
    """Run log for a bounded root-finding call."""

    all_case: bool = False
    witness_stage: Optional[int] = None
    candidates: int = 0
    survivors: int = 0
    no_root_in_range: bool = False
    residual_slack_bits: int = 0


def _lipschitz_bound(f: UniPoly) -> Fraction:
    total = Fraction(0)
    for i, c in enumerate(f.coeffs):
        if i == 0:
            continue
        enc = c.enclosure_at(4)
        total += i * max(abs(enc.lo), abs(enc.hi))
    return total


def broot(f: UniPoly, p: int = 30, stage_budget: int = 64) -> ApproxReal:
    """Some root of f in [0, 1] when one exists; any point otherwise.

    Total: the zero polynomial (never certified nonzero within the budget)
    and root-free polynomials yield the default point 1/2, which the
    multivalued contract allows.  See broot_report for the run log.
    """
    point, _ = broot_report(f, p, stage_budget)
    return point


def broot_report(f: UniPoly, p: int = 30, stage_budget: int = 64
                 ) -> Tuple[ApproxReal, BRootReport]:
    report = BRootReport()
    wit = nonzero_witness(f, stage_budget)
    if wit is None:
        report.all_case = True
        return ApproxReal.from_rational(_HALF), report
    report.witness_stage = wit.stage

    cands = real_root_candidates(f, wit, p)
    report.candidates = len(cands)

    lip = _lipschitz_bound(f)
    threshold = (lip + 1) * _pow2(p)
    slack = 1
    while (1 << slack) < (lip + 2):
        slack += 1
    report.residual_slack_bits = slack + 1

    survivor = None
    survivors = 0
    for cand in cands:
        val = f.eval_real(cand).enclosure_at(p + 6)
        if val.dist_to_zero() > threshold:
            continue
        survivors += 1
        if survivor is None:
            survivor = cand
    report.survivors = survivors
    if survivor is None:
        report.no_root_in_range = True
        return ApproxReal.from_rational(_HALF), report
    return survivor, report
