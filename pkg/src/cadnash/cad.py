"""Representative samples of sign-invariant decompositions, as instance lists.

The pipeline projects a polynomial family down to one variable, samples the
line (roots of the projected polynomials are section representatives, their
consecutive midpoints and the endpoints 0 and 1 are sector representatives),
and lifts fiber by fiber back up.  Regions of the decomposition are never
materialized; the only output is a finite list of all-or-unique-choice
instances whose determined points form the sample.

Two drivers share the fiber machinery: a lazy one producing instance lists
(`representative_sample`), and an eager one producing resolved rational
points level by level (`sample_points`), which supports prefix pruning and
is what the inequality solver uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .aouc import AoUCInstance, PotentialUniPoly, collapse_at, \
    potential_from_unipoly, potential_root_candidates
from .errors import DimensionMismatchError
from .polynomials import MultiPoly, UniPoly, eval_fraction, eval_point, proj, \
    scalar_class_key, substitute_prefix
from .reals import ApproxReal, to_fraction
from .roots import candidate_cap, nonzero_witness, real_root_candidates
from .stats import RunStats

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Sign(Enum):
    MINUS = "-"
    ZERO = "0"
    PLUS = "+"
    UNKNOWN = "?"


@dataclass(frozen=True)
class SignVector:
    """Signs of a polynomial family at one point, as visible at precision p;
    unknown entries may resolve later, resolved entries never change."""

    entries: Tuple[Sign, ...]
    precision: int

    def resolved(self) -> Tuple[Sign, ...]:
        return tuple(s for s in self.entries if s is not Sign.UNKNOWN)


@dataclass
class SampleSet:
    """Instances whose determined points sample every region meeting the
    cube."""

    level: int
    instances: List[AoUCInstance]


def sign_vector_at(F: Sequence[MultiPoly], x: Sequence, p: int) -> SignVector:
    """Componentwise signs at a point.  Exact rational data evaluates
    exactly (so a true zero reads as ZERO); otherwise enclosures at
    precision p give PLUS/MINUS when they exclude zero and UNKNOWN when they
    do not."""
    xs = [c if isinstance(c, ApproxReal) else ApproxReal.from_rational(c)
          for c in x]
    entries = []
    for f in F:
        if len(xs) != f.level:
            raise DimensionMismatchError("point dimension mismatch")
        if f.exact_key() is not None and all(c.exact is not None for c in xs):
            v = eval_fraction(f, [c.exact for c in xs])
            entries.append(Sign.ZERO if v == 0 else
                           (Sign.PLUS if v > 0 else Sign.MINUS))
            continue
        enc = eval_point(f, xs).enclosure_at(p)
        if enc.strictly_positive():
            entries.append(Sign.PLUS)
        elif enc.strictly_negative():
            entries.append(Sign.MINUS)
        else:
            entries.append(Sign.UNKNOWN)
    return SignVector(tuple(entries), p)


def _dedup_scalar_classes(polys: Sequence[MultiPoly]) -> List[MultiPoly]:
    """One representative per scalar class: rescaled polynomials share root
    sets and sign partitions, so dropping them leaves the induced
    decomposition unchanged.  Inexact and syntactically zero polynomials are
    kept (deduplicated by exact key only)."""
    out: List[MultiPoly] = []
    seen_exact = set()
    seen_class = set()
    for f in polys:
        key = f.exact_key()
        if key is None:
            out.append(f)
            continue
        if key in seen_exact:
            continue
        seen_exact.add(key)
        cls = scalar_class_key(f)
        if cls is None:
            out.append(f)
            continue
        if cls in seen_class:
            continue
        seen_class.add(cls)
        out.append(f)
    return out


def project_chain(F: Sequence[MultiPoly], level: Optional[int] = None
                  ) -> List[List[MultiPoly]]:
    """[F_0 = F, F_1, ..., F_{n-1}] with F_{i+1} = proj(F_i), ending at one
    variable.  Each level's polynomial count is finite; the chain length is
    exactly the variable count.  Projected levels keep one polynomial per
    scalar class (the top level is passed through verbatim, since its signs
    are what the sample reports)."""
    if level is None:
        if not F:
            raise ValueError("need an explicit level for an empty family")
        level = F[0].level
    if level < 1:
        raise DimensionMismatchError("chain needs level >= 1")
    for f in F:
        if f.level != level:
            raise DimensionMismatchError("mixed levels in chain input")
    chain = [list(F)]
    current = list(F)
    for lvl in range(level, 1, -1):
        current = _dedup_scalar_classes(proj(current)) if current else []
        chain.append(current)
    return chain


# ---------------------------------------------------------------------------
# one-dimensional stacks (shared by base phase and lifting)


def _stack_instances(potentials: Sequence[PotentialUniPoly], p: int,
                     stats: Optional[RunStats]) -> List[AoUCInstance]:
    """Dim-1 instances sampling the decomposition of [0,1] induced by the
    roots of the given (potential) polynomials: root candidates, the
    endpoints, and midpoints of consecutive determined anchor points.

    A midpoint instance exists per anchor pair; it collapses when both
    anchors have, with no third anchor revealed strictly between them at
    that stage.  Later revelations cannot retract a collapse (monotonicity),
    which at worst leaves a harmless extra sample point.
    """
    roots = potential_root_candidates(potentials, p, stats)
    endpoints = [collapse_at(1, 0, (_ZERO,), stats),
                 collapse_at(1, 0, (_ONE,), stats)]
    anchors = roots + endpoints

    def anchor_value(inst: AoUCInstance, stage: int) -> Optional[Fraction]:
        state = inst.state_at(stage)
        if state is None:
            return None
        return state[0].exact

    midpoints: List[AoUCInstance] = []
    for i in range(len(anchors)):
        for j in range(i + 1, len(anchors)):
            def fn(stage: int, i=i, j=j):
                a = anchor_value(anchors[i], stage)
                b = anchor_value(anchors[j], stage)
                if a is None or b is None:
                    return None
                lo, hi = min(a, b), max(a, b)
                for t, other in enumerate(anchors):
                    if t in (i, j):
                        continue
                    v = anchor_value(other, stage)
                    if v is not None and lo < v < hi:
                        return None
                return (ApproxReal.from_rational((a + b) / 2),)

            midpoints.append(AoUCInstance(1, fn, stats))
    return anchors + midpoints


def _stack_size(degree_bounds: Sequence[int]) -> int:
    anchors = sum(candidate_cap(d) for d in degree_bounds) + 2
    return anchors + anchors * (anchors - 1) // 2


def base_sample(F_univ: Sequence[UniPoly], p: int,
                stats: Optional[RunStats] = None) -> SampleSet:
    """Level-1 sample: sections are root candidates of the (determined
    embeddings of the) univariate polynomials, sectors are represented by
    the endpoints and consecutive midpoints.  With nothing ever determined
    (all polynomials consistent with zero) the set degrades to all-case
    instances: any point represents the one remaining region."""
    potentials = [potential_from_unipoly(f, stats=stats) for f in F_univ]
    return SampleSet(1, _stack_instances(potentials, p, stats))


def lift(sample: SampleSet, F: Sequence[MultiPoly], p: int,
         stats: Optional[RunStats] = None) -> SampleSet:
    """Lift a level n-1 sample through a level-n family.

    For every input instance, its (potential) point is substituted into each
    polynomial; the resulting univariate stack instances are combined with
    the input instance into level-n instances, in deterministic
    (input index, candidate index) order.  All-case inputs lift to all-case
    outputs.
    """
    level = F[0].level if F else sample.level + 1
    for f in F:
        if f.level != sample.level + 1:
            raise DimensionMismatchError("family level must be sample level + 1")

    out: List[AoUCInstance] = []
    for inst in sample.instances:
        fiber_cache: dict = {}

        def fiber(stage: int, inst=inst, fiber_cache=fiber_cache
                  ) -> Optional[List[AoUCInstance]]:
            state = inst.state_at(stage)
            if state is None:
                return None
            if "stack" not in fiber_cache:
                potentials = [potential_from_unipoly(
                    substitute_prefix(f, state), stats=stats) for f in F]
                fiber_cache["stack"] = _stack_instances(potentials, p, stats)
            return fiber_cache["stack"]

        count = _stack_size([f.degree_bound for f in F])
        for t in range(count):
            def fn(stage: int, inst=inst, fiber=fiber, t=t):
                prefix = inst.state_at(stage)
                if prefix is None:
                    return None
                stack = fiber(stage)
                x = stack[t].state_at(stage)
                if x is None:
                    return None
                return tuple(prefix) + tuple(x)

            out.append(AoUCInstance(level, fn, stats))
    return SampleSet(level, out)


def representative_sample(F: Sequence[MultiPoly], p: int,
                          stats: Optional[RunStats] = None,
                          level: Optional[int] = None) -> SampleSet:
    """Project to one variable, sample the base line, lift back up.

    The determined points of the returned instances meet (to tolerance
    2**-p) every region of a sign-invariant decomposition of the cube
    compatible with the family.
    """
    chain = project_chain(F, level)
    n = len(chain)
    F_univ = [UniPoly.from_multipoly(f) for f in chain[-1]]
    sample = base_sample(F_univ, p, stats)
    for lvl in range(2, n + 1):
        sample = lift(sample, chain[n - lvl], p, stats)
    return sample


def resolve_sample(sample: SampleSet, stage_budget: int,
                   ) -> List[Tuple[Optional[Tuple[Fraction, ...]], bool]]:
    """Resolve every instance at the budget: (exact point, determined) pairs;
    undetermined instances report (None, False)."""
    out = []
    for inst in sample.instances:
        state = inst.state_at(stage_budget)
        if state is None:
            out.append((None, False))
        else:
            out.append((tuple(c.exact for c in state), True))
    return out


# ---------------------------------------------------------------------------
# eager point sampling (used by the inequality solver)


def _iso_key(u: UniPoly) -> Optional[tuple]:
    """Sign-normalized exact coefficient key: f and -f (and degree-bound
    slack) isolate to the same roots, so their candidates are shared."""
    vals = u.exact_coeffs()
    if vals is None:
        return None
    t = tuple(vals)
    while len(t) > 1 and t[-1] == 0:
        t = t[:-1]
    for c in t:
        if c != 0:
            if c < 0:
                t = tuple(-x for x in t)
            break
    return t


def _fiber_points(prefix: Tuple[Fraction, ...], F: Sequence[MultiPoly],
                  p: int, stage_budget: int,
                  stats: Optional[RunStats]) -> List[Fraction]:
    """Determined stack points over one resolved prefix, eagerly.

    Mirrors what the lazy stack instances resolve to at the budget: root
    candidates of each certified substituted polynomial, the endpoints, and
    midpoints of consecutive distinct anchor values.
    """
    if prefix:
        prefix_reals = [ApproxReal.from_rational(c) for c in prefix]
        unis = [substitute_prefix(f, prefix_reals) for f in F]
    else:
        unis = [UniPoly.from_multipoly(f) for f in F]

    anchor_values: List[Fraction] = []
    slots = 0
    iso_cache: dict = {}
    for u in unis:
        slots += candidate_cap(u.degree_bound)
        key = _iso_key(u)
        if key is not None and key in iso_cache:
            anchor_values.extend(iso_cache[key])
            continue
        wit = nonzero_witness(u, stage_budget)
        if wit is None:
            values: List[Fraction] = []
        else:
            values = [cand.exact
                      for cand in real_root_candidates(u, wit, p)]
        if key is not None:
            iso_cache[key] = values
        anchor_values.extend(values)
    anchor_values.extend([_ZERO, _ONE])
    if stats is not None:
        stats.instances_created += slots + 2
        stats.instances_collapsed += len(anchor_values)

    distinct = sorted(set(anchor_values))
    midpoints = [(a + b) / 2 for a, b in zip(distinct, distinct[1:])]
    if stats is not None:
        n_anchor_slots = slots + 2
        stats.instances_created += n_anchor_slots * (n_anchor_slots - 1) // 2
        stats.instances_collapsed += len(midpoints)

    out: List[Fraction] = []
    seen = set()
    for v in anchor_values + midpoints:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


PrunePredicate = Callable[[int, Tuple[Fraction, ...]], bool]


def sample_points(F: Sequence[MultiPoly], p: int, stage_budget: int,
                  stats: Optional[RunStats] = None,
                  prune: Optional[PrunePredicate] = None,
                  level: Optional[int] = None) -> List[Tuple[Fraction, ...]]:
    """Determined sample points as exact rational tuples, level by level.

    `prune(level, partial_point)` may drop a prefix that provably cannot
    extend to a wanted point (the solver uses constraint violations certified
    on prefix-determined polynomials); pruning only removes points the
    caller's own elimination would discard, so the surviving set and order
    match the unpruned run.
    """
    chain = project_chain(F, level)
    n = len(chain)
    prefixes: List[Tuple[Fraction, ...]] = [()]
    for lvl in range(1, n + 1):
        family = chain[n - lvl]
        nxt: List[Tuple[Fraction, ...]] = []
        seen = set()
        for prefix in prefixes:
            for x in _fiber_points(prefix, family, p, stage_budget, stats):
                pt = prefix + (x,)
                if pt in seen:
                    continue
                seen.add(pt)
                if prune is not None and prune(lvl, pt):
                    if stats is not None:
                        stats.pruned_prefixes += 1
                    continue
                nxt.append(pt)
        prefixes = nxt
    return prefixes
