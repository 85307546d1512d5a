"""Non-strict polynomial inequality systems over the unit cube.

`refute_box` certifies infeasibility by compactness: subdivide the cube and
discard boxes on which some constraint is certified negative; an emptied
frontier is a proof.  `bpineq` realizes the multivalued solution map: it
draws candidate points from a representative sample of the constraint
family and eliminates candidates only on certified violations, so any
surviving determined candidate is an approximate solution whenever one
exists.  Roots of multivariate polynomials reduce to the two-constraint
system P >= 0 and -P >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import cad
from .errors import DimensionMismatchError
from .polynomials import MultiPoly, embed_at_level, eval_box, eval_fraction, \
    eval_point, make_zero, poly_add, poly_mul, poly_neg, shift_vars
from .reals import ApproxReal, Interval
from .stats import RunStats

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pow2(p: int) -> Fraction:
    return Fraction(1, 2**p)


@dataclass
class IneqSystem:
    """Constraints P_i(x) >= 0 over [0,1]^level, sharing one variable level."""

    polys: List[MultiPoly]

    def __post_init__(self):
        if not self.polys:
            raise ValueError("empty constraint system")
        level = self.polys[0].level
        if level < 1:
            raise DimensionMismatchError("system needs at least one variable")
        for f in self.polys:
            if f.level != level:
                raise DimensionMismatchError("mixed levels in system")

    @property
    def level(self) -> int:
        return self.polys[0].level


@dataclass
class Feasible:
    point: tuple
    residual: Interval


@dataclass
class Infeasible:
    certificate: dict


@dataclass
class Undecided:
    info: dict


Verdict = Union[Feasible, Infeasible, Undecided]


class _IntPoly:
    """Exact polynomial cleared to integers for fast dyadic box images.

    Box endpoints are integers at coordinate scale 2**e; the image comes
    from integer interval Horner, with every subtree value carried at a
    per-level uniform power of the scale so siblings align.  Only the sign
    of the image matters to callers, and positive scaling preserves it.
    """

    def __init__(self, f: MultiPoly):
        if f.exact_key() is None:
            raise ValueError("needs exact coefficients")
        self.level = f.level
        den = 1
        for c in _level0_values(f):
            den = den * c.denominator // _gcd_int(den, c.denominator)
        self.bounds = [0] * (f.level + 1)
        self.tree = self._build(f, den)

    def _build(self, f: MultiPoly, den: int):
        if f.level == 0:
            v = f.value.exact
            return v.numerator * (den // v.denominator)
        d = f.degree_bound
        if d > self.bounds[f.level]:
            self.bounds[f.level] = d
        return [self._build(c, den) for c in f.coeffs]

    def box_image(self, lo: Sequence[int], hi: Sequence[int], e: int
                  ) -> Tuple[int, int]:
        base = 1 << e

        def rec(node, level: int) -> Tuple[int, int]:
            if level == 0:
                return (node, node)
            x0, x1 = lo[level - 1], hi[level - 1]
            children = [rec(c, level - 1) for c in node]
            d = len(children) - 1
            acc_lo, acc_hi = children[d]
            power = 1
            for i in range(d - 1, -1, -1):
                power *= base
                p0, p1 = acc_lo * x0, acc_lo * x1
                p2, p3 = acc_hi * x0, acc_hi * x1
                clo, chi = children[i]
                acc_lo = min(p0, p1, p2, p3) + clo * power
                acc_hi = max(p0, p1, p2, p3) + chi * power
            top_up = base ** (self.bounds[level] - d)
            return (acc_lo * top_up, acc_hi * top_up)

        return rec(self.tree, self.level)


def _level0_values(f: MultiPoly):
    if f.level == 0:
        yield f.value.exact
        return
    for c in f.coeffs:
        yield from _level0_values(c)


def _gcd_int(x: int, y: int) -> int:
    while y:
        x, y = y, x % y
    return x


class BoxRefuter:
    """Resumable compactness refuter for one system.

    Holds the surviving frontier between calls so an increasing depth
    schedule never re-explores.  Each deepening round halves every
    coordinate once; a box dies as soon as some constraint's interval image
    is certified negative.  Constraints are evaluated on their reduced
    variable prefix, via cleared-integer arithmetic when exact, and
    reordered by a move-to-front heuristic (the outcome does not depend on
    evaluation order).  Boxes are integer tuples at coordinate scale
    2**depth_done.
    """

    def __init__(self, S: IneqSystem, p: int = 20):
        self.system = S
        self.level = S.level
        self.p = p
        self._work = []
        for f in S.polys:
            maxvar, g = _reduced_view(f)
            # a bare nonnegative variable can never be refuted over the cube
            if _is_plain_variable(g):
                continue
            wrapped = _IntPoly(g) if g.exact_key() is not None and maxvar >= 1 \
                else g
            self._work.append((maxvar, wrapped))
        self.frontier: List[Tuple[tuple, tuple]] = [
            (tuple(0 for _ in range(self.level)),
             tuple(1 for _ in range(self.level)))]
        self.depth_done = 0
        self.examined = 0
        self._seeded = False

    def _refuted(self, lo: tuple, hi: tuple, e: int) -> bool:
        work = self._work
        for idx, (maxvar, g) in enumerate(work):
            if isinstance(g, _IntPoly):
                _, img_hi = g.box_image(lo, hi, e)
                dead = img_hi < 0
            elif maxvar == 0:
                dead = g.value.enclosure_at(self.p).strictly_negative()
            else:
                box = [Interval(Fraction(lo[i], 1 << e),
                                Fraction(hi[i], 1 << e))
                       for i in range(maxvar)]
                dead = eval_box(g, box, self.p).strictly_negative()
            if dead:
                if idx:
                    work.insert(0, work.pop(idx))
                return True
        return False

    def run(self, depth: int, max_boxes: int = 20000) -> Verdict:
        if not self._seeded:
            self.examined += len(self.frontier)
            self.frontier = [b for b in self.frontier
                             if not self._refuted(b[0], b[1], self.depth_done)]
            self._seeded = True
        while self.frontier and self.depth_done < depth:
            e = self.depth_done + 1
            frontier = [(tuple(v << 1 for v in lo), tuple(v << 1 for v in hi))
                        for lo, hi in self.frontier]
            overflow = False
            for axis in range(self.level):
                nxt = []
                for lo, hi in frontier:
                    mid = (lo[axis] + hi[axis]) >> 1
                    for child_lo, child_hi in (
                            (lo, hi[:axis] + (mid,) + hi[axis + 1:]),
                            (lo[:axis] + (mid,) + lo[axis + 1:], hi)):
                        self.examined += 1
                        if not self._refuted(child_lo, child_hi, e):
                            nxt.append((child_lo, child_hi))
                frontier = nxt
                if not frontier:
                    break
                if len(frontier) > max_boxes:
                    overflow = True
                    break
            if overflow:
                return Undecided({"reason": "box budget exhausted",
                                  "depth_reached": self.depth_done,
                                  "boxes_examined": self.examined})
            self.frontier = frontier
            self.depth_done += 1
        if not self.frontier:
            return Infeasible({"depth": self.depth_done,
                               "boxes_examined": self.examined})
        return Undecided({"reason": "frontier nonempty at depth budget",
                          "depth_reached": self.depth_done,
                          "boxes_examined": self.examined,
                          "frontier": len(self.frontier)})


def _is_plain_variable(g: MultiPoly) -> bool:
    # x_top with zero constant term, after reduction
    if g.level == 0 or g.degree_bound != 1:
        return False
    lead = g.coeffs[1].is_exact_constant()
    return lead == 1 and g.coeffs[0].is_syntactic_zero()


def refute_box(S: IneqSystem, depth: int, max_boxes: int = 20000,
               p: int = 20, stats: Optional[RunStats] = None) -> Verdict:
    """Try to certify that S has no solution in the cube.

    Runs `depth` full bisection rounds (boxes of edge 2**-depth), discarding
    a box when some constraint's interval image is entirely negative.
    Infeasible is sound: a feasible system always keeps the box containing
    its solution.  Box or round budget exhaustion yields Undecided.
    """
    refuter = BoxRefuter(S, p=p)
    verdict = refuter.run(depth, max_boxes=max_boxes)
    if stats is not None:
        stats.refutation_depths[f"depth_{depth}"] = refuter.examined
    return verdict


def _abs_bound(x: ApproxReal) -> Fraction:
    enc = x.enclosure_at(4)
    return max(abs(enc.lo), abs(enc.hi))


def _gradient_l1_bound(f: MultiPoly) -> Fraction:
    """Sum over monomials of |coefficient| * total degree: bounds the L1
    gradient norm on the unit cube."""
    def walk(g: MultiPoly, degree: int) -> Fraction:
        if g.level == 0:
            return _abs_bound(g.value) * degree
        return sum((walk(c, degree + i) for i, c in enumerate(g.coeffs)),
                   Fraction(0))

    return walk(f, 0)


def _bits(value: Fraction) -> int:
    b = 0
    while (1 << b) < value:
        b += 1
    return b


def _reduced_view(f: MultiPoly) -> Tuple[int, MultiPoly]:
    """(largest variable index the polynomial syntactically depends on, the
    polynomial rebased to that level)."""
    g = f.trimmed()
    while g.level >= 1 and g.degree_bound == 0:
        g = g.coeffs[0]
    return g.level, g


def _certified_below(f: MultiPoly, point: Sequence[Fraction],
                     threshold: Fraction, p: int) -> bool:
    if f.exact_key() is not None:
        return eval_fraction(f, point) < -threshold
    enc = eval_point(f, [ApproxReal.from_rational(c) for c in point]) \
        .enclosure_at(p + 4)
    return enc.hi < -threshold


@dataclass
class BPIneqReport:
    candidates_total: int = 0
    survivors: int = 0
    eliminated: int = 0
    verified_feasible: bool = False
    returned_by_elimination_only: bool = False
    defaulted: bool = False
    residual: Optional[Interval] = None
    sampling_precision: int = 0


def bpineq(S: IneqSystem, p: int, stage_budget: int = 64,
           stats: Optional[RunStats] = None
           ) -> Tuple[Tuple[ApproxReal, ...], BPIneqReport]:
    """A point satisfying every constraint to within 2**-(p-1) whenever the
    system is solvable and the sample determines in budget; any point is
    admissible otherwise.

    Candidates come from a representative sample of the constraint family,
    taken at a precision padded by the constraints' gradient bound so that a
    candidate near a true solution cannot be eliminated.  A candidate dies
    only when some constraint evaluates certified below -2**-p; the first
    surviving determined candidate in sample order wins.
    """
    n = S.level
    report = BPIneqReport()
    lip = max((_gradient_l1_bound(f) for f in S.polys), default=Fraction(1))
    p_samp = p + 1 + _bits(max(lip, _ONE))
    report.sampling_precision = p_samp
    threshold = _pow2(p)

    reduced = [_reduced_view(f) for f in S.polys]

    def prune(level: int, point: Tuple[Fraction, ...]) -> bool:
        for maxvar, g in reduced:
            if 1 <= maxvar <= level:
                if _certified_below(g, point[:maxvar], threshold, p):
                    return True
        return False

    points = cad.sample_points(S.polys, p_samp, stage_budget, stats,
                               prune=prune, level=n)
    report.candidates_total = len(points)
    if stats is not None:
        stats.candidates_total += len(points)

    chosen: Optional[Tuple[Fraction, ...]] = None
    for pt in points:
        if any(_certified_below(g, pt[:maxvar], threshold, p)
               for maxvar, g in reduced if maxvar >= 1):
            report.eliminated += 1
            continue
        report.survivors += 1
        if chosen is None:
            chosen = pt
    if stats is not None:
        stats.eliminated += report.eliminated
        stats.survivors += report.survivors

    if chosen is None:
        report.defaulted = True
        if stats is not None:
            stats.flag("bpineq returned default point")
        chosen = tuple(Fraction(1, 2) for _ in range(n))

    residual = _min_residual(S, chosen, p)
    report.residual = residual
    if residual.lo >= -threshold:
        report.verified_feasible = True
    else:
        report.returned_by_elimination_only = True
    return tuple(ApproxReal.from_rational(c) for c in chosen), report


def _min_residual(S: IneqSystem, point: Sequence[Fraction], p: int) -> Interval:
    lo = hi = None
    for f in S.polys:
        if f.exact_key() is not None:
            v = eval_fraction(f, point)
            enc = Interval(v, v)
        else:
            enc = eval_point(f, [ApproxReal.from_rational(c) for c in point]) \
                .enclosure_at(p + 4)
        if lo is None or enc.lo < lo:
            lo = enc.lo
        if hi is None or enc.hi < hi:
            hi = enc.hi
    return Interval(lo, hi)


def bmroot(P: MultiPoly, p: int, stage_budget: int = 64,
           stats: Optional[RunStats] = None
           ) -> Tuple[Tuple[ApproxReal, ...], BPIneqReport]:
    """A root of P in the cube when one exists: the solutions of
    P >= 0 and -P >= 0 are exactly the roots."""
    return bpineq(IneqSystem([P, poly_neg(P)]), p, stage_budget, stats)


def bmroot_pair(P: MultiPoly, Q: MultiPoly, p: int, stage_budget: int = 64,
                stats: Optional[RunStats] = None
                ) -> Tuple[Tuple[ApproxReal, ...], Tuple[ApproxReal, ...]]:
    """Roots of two polynomials from one root query.

    The polynomials are given disjoint variable blocks, shifted in value so
    each has a root in its cube, and their squares are summed; a root of the
    sum splits into a root for each."""
    gP = make_zero(P)
    gQ = make_zero(Q)
    a, b = P.level, Q.level
    gP_wide = embed_at_level(gP, a + b)
    gQ_wide = shift_vars(gQ, a)
    combined = poly_add(poly_mul(gP_wide, gP_wide),
                        poly_mul(gQ_wide, gQ_wide))
    point, _ = bmroot(combined, p, stage_budget, stats)
    return point[:a], point[a:]
