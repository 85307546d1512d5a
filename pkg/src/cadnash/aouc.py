"""All-or-unique-choice instances with finite-stage semantics.

An instance speaks about the cube [0,1]^n: either every point remains a
valid answer forever (the *all* case) or, at some stage, it collapses to one
revealed point and stays collapsed.  The genuine problem is an oracle, so
extraction here is an explicit budgeted step: callers resolve instances
within a stage budget and a never-resolved instance yields the (always
admissible in the all case) default cube center, flagged in the run stats.

Potential univariate polynomials pair each coefficient with a dim-1 instance
and a magnitude bound: once every instance collapses, the polynomial they
specify becomes actual, and root candidates can be attached as further
instances that collapse exactly when the polynomial is revealed and
certified nonzero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import EmbeddingBoundError
from .polynomials import UniPoly
from .reals import ApproxReal, add as real_add, mul as real_mul, scale as real_scale, to_fraction
from .roots import NonzeroWitness, candidate_cap, nonzero_witness, real_root_candidates
from .stats import RunStats

_HALF = Fraction(1, 2)

Point = Tuple[ApproxReal, ...]


class AoUCInstance:
    """Monotone stage-indexed state: All (None) until a possible collapse.

    The wrapped state function may be queried at any stage; once a collapse
    is observed the same point is returned for every later stage, making
    monotonicity a structural property rather than an obligation on the
    state function.
    """

    def __init__(self, dim: int, state_fn: Callable[[int], Optional[Point]],
                 stats: Optional[RunStats] = None):
        self.dim = dim
        self._state_fn = state_fn
        self._collapse: Optional[Tuple[int, Point]] = None
        self._stats = stats
        if stats is not None:
            stats.count_instance(self)

    def state_at(self, stage: int) -> Optional[Point]:
        """The revealed point once collapsed by this stage, else None."""
        if self._collapse is not None and stage >= self._collapse[0]:
            return self._collapse[1]
        point = self._state_fn(stage)
        if point is None:
            return None
        if self._collapse is None:
            self._collapse = (stage, point)
            if self._stats is not None:
                self._stats.observe_collapse(self)
        elif stage < self._collapse[0]:
            self._collapse = (stage, self._collapse[1])
        return self._collapse[1]

    def __repr__(self):
        return f"AoUCInstance(dim={self.dim})"


def _check_point(dim: int, point) -> Point:
    pt = tuple(c if isinstance(c, ApproxReal) else ApproxReal.from_rational(c)
               for c in point)
    if len(pt) != dim:
        raise ValueError(f"point dimension {len(pt)} != {dim}")
    for c in pt:
        if c.exact is not None:
            if not 0 <= c.exact <= 1:
                raise ValueError(f"point coordinate {c.exact} outside [0,1]")
        else:
            enc = c.enclosure_at(8)
            if enc.hi < 0 or enc.lo > 1:
                raise ValueError("point coordinate certified outside [0,1]")
    return pt


def const_all(dim: int, stats: Optional[RunStats] = None) -> AoUCInstance:
    """Instance that never collapses: all of the cube stays valid."""
    return AoUCInstance(dim, lambda stage: None, stats)


def collapse_at(dim: int, stage0: int, point, stats: Optional[RunStats] = None
                ) -> AoUCInstance:
    """Instance that reveals `point` from stage0 on."""
    pt = _check_point(dim, point if isinstance(point, (tuple, list)) else (point,))
    return AoUCInstance(dim, lambda stage: pt if stage >= stage0 else None, stats)


def product(instances: Sequence[AoUCInstance],
            stats: Optional[RunStats] = None) -> AoUCInstance:
    """Collapsed exactly when every factor is, to the concatenated point."""
    instances = list(instances)
    dim = sum(inst.dim for inst in instances)

    def fn(stage: int) -> Optional[Point]:
        parts = []
        for inst in instances:
            state = inst.state_at(stage)
            if state is None:
                return None
            parts.extend(state)
        return tuple(parts)

    return AoUCInstance(dim, fn, stats)


def default_point(dim: int) -> Point:
    return tuple(ApproxReal.from_rational(_HALF) for _ in range(dim))


def resolve_within(instance: AoUCInstance, stage_budget: int, p: int,
                   stats: Optional[RunStats] = None) -> Point:
    """The collapse point if the instance resolves within the budget, else
    the cube center (valid whenever the instance is truly in the all case);
    budget misses are flagged in the stats."""
    state = instance.state_at(stage_budget)
    if state is not None:
        return state
    if stats is not None:
        stats.unresolved_defaults += 1
        stats.flag("unresolved within stage budget")
    return default_point(instance.dim)


# ---------------------------------------------------------------------------
# potential univariate polynomials


class PotentialUniPoly:
    """Coefficients as (instance, magnitude bound) pairs: coefficient i is
    2*k_i*a_i - k_i once instance i collapses to a_i.  A bound of zero pins
    the coefficient to exactly zero."""

    def __init__(self, pairs: List[Tuple[AoUCInstance, int]]):
        if not pairs:
            raise ValueError("potential polynomial needs at least one pair")
        self.pairs = list(pairs)

    @property
    def degree_bound(self) -> int:
        return len(self.pairs) - 1

    def coefficient_at(self, i: int, stage: int) -> Optional[ApproxReal]:
        inst, k = self.pairs[i]
        if k == 0:
            return ApproxReal.from_rational(0)
        state = inst.state_at(stage)
        if state is None:
            return None
        return _coeff_from_unit(state[0], k)

    def specified_at(self, stage: int) -> Optional[UniPoly]:
        """The actual polynomial once all instances have collapsed."""
        coeffs = []
        for i in range(len(self.pairs)):
            c = self.coefficient_at(i, stage)
            if c is None:
                return None
            coeffs.append(c)
        return UniPoly(coeffs)


def _coeff_from_unit(a: ApproxReal, k: int) -> ApproxReal:
    # c = 2 k a - k
    return real_add(real_scale(a, Fraction(2 * k)),
                    ApproxReal.from_rational(-k))


def _unit_from_coeff(c: ApproxReal, k: int) -> ApproxReal:
    # a = (c + k) / (2 k); callers guarantee k >= 1
    return real_scale(real_add(c, ApproxReal.from_rational(k)),
                      Fraction(1, 2 * k))


def potential_from_unipoly(f: UniPoly, bounds: Optional[Sequence[int]] = None,
                           p_embed: int = 8,
                           stats: Optional[RunStats] = None) -> PotentialUniPoly:
    """Embed a determined polynomial: every instance collapses immediately.

    Magnitude bounds are taken from the given list or derived from the
    coefficient enclosures at the embedding precision; a coefficient whose
    enclosure exceeds its given bound raises EmbeddingBoundError.
    """
    pairs: List[Tuple[AoUCInstance, int]] = []
    for i, c in enumerate(f.coeffs):
        enc = c.enclosure_at(p_embed)
        mag = max(abs(enc.lo), abs(enc.hi))
        if bounds is not None:
            k = int(bounds[i])
            if mag > k:
                raise EmbeddingBoundError(
                    f"coefficient {i} has magnitude enclosure {mag} > bound {k}")
        else:
            k = int(mag) + (0 if mag == int(mag) else 1)
        if k == 0:
            inst = collapse_at(1, 0, (_HALF,), stats)
        else:
            inst = collapse_at(1, 0, (_unit_from_coeff(c, k),), stats)
        pairs.append((inst, k))
    return PotentialUniPoly(pairs)


def _derived_instance(sources: List[Tuple[AoUCInstance, int]], k_new: int,
                      combine: Callable[[List[ApproxReal]], ApproxReal],
                      stats: Optional[RunStats]) -> Tuple[AoUCInstance, int]:
    """Instance for a derived coefficient: collapses once all relevant input
    instances have, to the re-embedded combination of their coefficients."""
    if k_new == 0:
        return (collapse_at(1, 0, (_HALF,), stats), 0)

    def fn(stage: int) -> Optional[Point]:
        values = []
        for inst, k in sources:
            if k == 0:
                values.append(ApproxReal.from_rational(0))
                continue
            state = inst.state_at(stage)
            if state is None:
                return None
            values.append(_coeff_from_unit(state[0], k))
        return (_unit_from_coeff(combine(values), k_new),)

    return (AoUCInstance(1, fn, stats), k_new)


def potential_add(P: PotentialUniPoly, Q: PotentialUniPoly,
                  stats: Optional[RunStats] = None) -> PotentialUniPoly:
    d = max(P.degree_bound, Q.degree_bound)
    pairs = []
    zero = (None, 0)
    for i in range(d + 1):
        sp = P.pairs[i] if i <= P.degree_bound else zero
        sq = Q.pairs[i] if i <= Q.degree_bound else zero
        sources = [s for s in (sp, sq) if s[1] != 0 and s[0] is not None]
        k_new = sp[1] + sq[1]
        pairs.append(_derived_instance(
            sources, k_new, lambda vals: _sum_reals(vals), stats))
    return PotentialUniPoly(pairs)


def _sum_reals(vals: List[ApproxReal]) -> ApproxReal:
    acc = ApproxReal.from_rational(0)
    for v in vals:
        acc = real_add(acc, v)
    return acc


def potential_mul(P: PotentialUniPoly, Q: PotentialUniPoly,
                  stats: Optional[RunStats] = None) -> PotentialUniPoly:
    d = P.degree_bound + Q.degree_bound
    pairs = []
    for j in range(d + 1):
        terms = [(P.pairs[i], Q.pairs[j - i])
                 for i in range(max(0, j - Q.degree_bound),
                                min(P.degree_bound, j) + 1)]
        k_new = sum(kp * kq for (_, kp), (_, kq) in terms)

        # pair up coefficient streams; zero-bound factors kill their term
        def combine(vals, terms=terms):
            acc = ApproxReal.from_rational(0)
            idx = 0
            for (instp, kp), (instq, kq) in terms:
                if kp == 0 or kq == 0:
                    continue
                acc = real_add(acc, real_mul(vals[idx], vals[idx + 1]))
                idx += 2
            return acc

        sources = []
        for (instp, kp), (instq, kq) in terms:
            if kp == 0 or kq == 0:
                continue
            sources.append((instp, kp))
            sources.append((instq, kq))
        pairs.append(_derived_instance(sources, k_new, combine, stats))
    return PotentialUniPoly(pairs)


def potential_arith(op: str, P: PotentialUniPoly, Q: PotentialUniPoly,
                    stats: Optional[RunStats] = None) -> PotentialUniPoly:
    if op == "add":
        return potential_add(P, Q, stats)
    if op == "mul":
        return potential_mul(P, Q, stats)
    raise ValueError(f"unknown operation {op!r}")


def potential_root_candidates(Fs: Sequence[PotentialUniPoly], p: int,
                              stats: Optional[RunStats] = None
                              ) -> List[AoUCInstance]:
    """Dim-1 instances covering every root in [0,1] of each determined,
    certified-nonzero polynomial, to tolerance 2**-p.

    Per polynomial the list holds `candidate_cap(degree_bound)` instances;
    instance t collapses to the t-th isolated candidate once the polynomial
    is fully specified and a nonzero witness is found within the queried
    stage.  Instances beyond the candidate count, and all instances of never
    certified (possibly zero) polynomials, stay in the all case.
    """
    out: List[AoUCInstance] = []
    for poly in Fs:
        cache: dict = {}

        def candidates_for(stage: int, poly=poly, cache=cache
                           ) -> Optional[List[ApproxReal]]:
            # specification and witness are re-checked at the queried stage so
            # collapse stages stay honest; the isolated candidates themselves
            # are deterministic and computed once
            spec = poly.specified_at(stage)
            if spec is None:
                return None
            wit = nonzero_witness(spec, stage)
            if wit is None:
                return None
            if "cands" not in cache:
                cache["cands"] = real_root_candidates(spec, wit, p)
            return cache["cands"]

        for t in range(candidate_cap(poly.degree_bound)):
            def fn(stage: int, t=t, candidates_for=candidates_for
                   ) -> Optional[Point]:
                cands = candidates_for(stage)
                if cands is None or t >= len(cands):
                    return None
                return (cands[t],)

            out.append(AoUCInstance(1, fn, stats))
    return out
