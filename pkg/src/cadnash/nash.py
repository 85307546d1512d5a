"""Normal-form games with stream-represented payoffs.

Equilibria are found support-first: supports are enumerated smallest first,
each support induces a non-strict polynomial inequality system whose
solutions are exactly the profiles supported on it, and compactness-based
box refutation eliminates supports with no such profile.  Equilibrium
existence guarantees a survivor; the inequality solver then extracts a
profile on the first surviving support, and an independent epsilon-gap
verifier reports on the result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import DimensionMismatchError
from .polynomials import MultiPoly, poly_add, poly_mul, poly_neg, poly_sub
from .reals import ApproxReal, Truth, add as real_add, mul as real_mul, \
    scale as real_scale, sub as real_sub, to_fraction
from .solve import BoxRefuter, BPIneqReport, IneqSystem, Infeasible, bpineq, refute_box
from .stats import RunStats

_ONE = Fraction(1)


@dataclass
class Game:
    """n players, action counts m_1..m_n, and per-player payoff tensors
    flattened in row-major profile order."""

    n_players: int
    actions: List[int]
    payoffs: List[List[ApproxReal]]

    def __post_init__(self):
        if self.n_players != len(self.actions):
            raise DimensionMismatchError("action count list length mismatch")
        size = 1
        for m in self.actions:
            if m < 1:
                raise DimensionMismatchError("players need at least one action")
            size *= m
        if len(self.payoffs) != self.n_players:
            raise DimensionMismatchError("need one payoff tensor per player")
        norm = []
        for tensor in self.payoffs:
            if len(tensor) != size:
                raise DimensionMismatchError(
                    f"payoff tensor size {len(tensor)} != {size}")
            norm.append([v if isinstance(v, ApproxReal)
                         else ApproxReal.from_rational(v) for v in tensor])
        self.payoffs = norm

    def profile_index(self, profile: Sequence[int]) -> int:
        idx = 0
        for a, m in zip(profile, self.actions):
            if not 0 <= a < m:
                raise DimensionMismatchError("action out of range")
            idx = idx * m + a
        return idx

    def payoff(self, player: int, profile: Sequence[int]) -> ApproxReal:
        return self.payoffs[player][self.profile_index(profile)]

    def all_profiles(self):
        return itertools.product(*(range(m) for m in self.actions))

    @property
    def num_vars(self) -> int:
        return sum(self.actions)

    def var_index(self, player: int, action: int) -> int:
        """1-based flat index of the probability variable sigma_player(action)."""
        return sum(self.actions[:player]) + action + 1


@dataclass
class StrategyProfile:
    """One probability vector per player; entries lie in [0,1] and sum to 1."""

    sigma: List[List[ApproxReal]]

    def exact(self) -> Optional[List[List[Fraction]]]:
        out = []
        for vec in self.sigma:
            vals = [c.exact for c in vec]
            if any(v is None for v in vals):
                return None
            out.append(vals)
        return out


@dataclass(frozen=True)
class Support:
    """Per player, the (nonempty) set of actions allowed positive weight."""

    sets: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for s in self.sets:
            if not s:
                raise ValueError("supports must be nonempty per player")

    @property
    def total_size(self) -> int:
        return sum(len(s) for s in self.sets)


def expected_payoff(G: Game, sigma: StrategyProfile, player: int) -> ApproxReal:
    """Multilinear expectation of the player's payoff under the profile."""
    if len(sigma.sigma) != G.n_players:
        raise DimensionMismatchError("profile shape mismatch")
    total = ApproxReal.from_rational(0)
    for profile in G.all_profiles():
        weight = ApproxReal.from_rational(1)
        for j, a in enumerate(profile):
            weight = real_mul(weight, sigma.sigma[j][a])
        total = real_add(total, real_mul(weight, G.payoff(player, profile)))
    return total


def deviation_payoff(G: Game, sigma: StrategyProfile, player: int,
                     action: int) -> ApproxReal:
    """Expectation when the player deviates to a pure action."""
    total = ApproxReal.from_rational(0)
    others = [range(m) for j, m in enumerate(G.actions) if j != player]
    for rest in itertools.product(*others):
        profile = list(rest[:player]) + [action] + list(rest[player:])
        weight = ApproxReal.from_rational(1)
        for j, a in enumerate(profile):
            if j == player:
                continue
            weight = real_mul(weight, sigma.sigma[j][a])
        total = real_add(total, real_mul(weight, G.payoff(player, profile)))
    return total


def _variable(G: Game, player: int, action: int) -> MultiPoly:
    return MultiPoly.variable(G.num_vars, G.var_index(player, action))


def _deviation_poly(G: Game, player: int, action: int) -> MultiPoly:
    """deviation_payoff as a multilinear polynomial in the other players'
    probability variables (embedded at the full variable level)."""
    n = G.num_vars
    total = MultiPoly.constant(n, 0)
    others = [range(m) for j, m in enumerate(G.actions) if j != player]
    for rest in itertools.product(*others):
        profile = list(rest[:player]) + [action] + list(rest[player:])
        term = MultiPoly.constant(n, G.payoff(player, profile))
        for j, a in enumerate(profile):
            if j == player:
                continue
            term = poly_mul(term, _variable(G, j, a))
        total = poly_add(total, term)
    return total


def support_system(G: Game, S: Support) -> IneqSystem:
    """The inequality system whose solutions are exactly the strategy
    profiles supported on S.

    Variables are all probabilities (sum of action counts, over the unit
    cube).  Constraints: nonnegativity for every variable; out-of-support
    probabilities additionally pinned to zero; per-player normalization as a
    pair of non-strict inequalities; and for every in-support action, its
    deviation payoff at least that of every other action (trivial
    self-comparisons omitted).
    """
    if len(S.sets) != G.n_players:
        raise ValueError("support shape mismatch")
    for i, s in enumerate(S.sets):
        for a in s:
            if not 0 <= a < G.actions[i]:
                raise ValueError("support action out of range")
    n = G.num_vars
    polys: List[MultiPoly] = []
    for i in range(G.n_players):
        in_support = set(S.sets[i])
        for a in range(G.actions[i]):
            var = _variable(G, i, a)
            polys.append(var)
            if a not in in_support:
                polys.append(poly_neg(var))
    for i in range(G.n_players):
        total = MultiPoly.constant(n, 0)
        for a in range(G.actions[i]):
            total = poly_add(total, _variable(G, i, a))
        one = MultiPoly.constant(n, 1)
        polys.append(poly_sub(total, one))
        polys.append(poly_sub(one, total))
    for i in range(G.n_players):
        devs = {a: _deviation_poly(G, i, a) for a in range(G.actions[i])}
        for a in sorted(S.sets[i]):
            for b in range(G.actions[i]):
                if b == a:
                    continue
                polys.append(poly_sub(devs[a], devs[b]))
    return IneqSystem(polys)


def enumerate_supports(G: Game) -> List[Support]:
    """All supports ordered by total size, then lexicographically."""
    per_player = []
    for m in G.actions:
        subsets = []
        for r in range(1, m + 1):
            subsets.extend(itertools.combinations(range(m), r))
        per_player.append(subsets)
    supports = [Support(sets=combo)
                for combo in itertools.product(*per_player)]
    supports.sort(key=lambda s: (s.total_size, s.sets))
    return supports


@dataclass
class SupportSelection:
    support: Support
    reason: str
    refuted: int
    depths_run: List[int]


def select_support(G: Game, depth_schedule: Sequence[int] = (4, 6, 8),
                   max_boxes: int = 20000,
                   stats: Optional[RunStats] = None) -> SupportSelection:
    """First support (in enumeration order) carrying some profile.

    Supports are refuted round-robin at increasing depth; refutation is
    sound, so a support with a solution is never eliminated, and equilibrium
    existence guarantees a survivor.  Selection ends when a single survivor
    remains or the depth schedule is exhausted (flagged)."""
    remaining = enumerate_supports(G)
    refuters = {}
    refuted_count = 0
    depths_run = []
    for depth in depth_schedule:
        depths_run.append(depth)
        still = []
        for support in remaining:
            if support not in refuters:
                refuters[support] = BoxRefuter(support_system(G, support))
            verdict = refuters[support].run(depth, max_boxes=max_boxes)
            if isinstance(verdict, Infeasible):
                refuted_count += 1
            else:
                still.append(support)
        remaining = still
        if stats is not None:
            stats.refutation_depths[f"depth_{depth}"] = sum(
                refuters[s].examined for s in refuters)
        if len(remaining) == 1:
            return SupportSelection(remaining[0], "unique survivor",
                                    refuted_count, depths_run)
        if not remaining:
            raise RuntimeError("all supports refuted; refutation unsound?")
    if stats is not None:
        stats.flag("support selection exhausted its depth schedule")
    return SupportSelection(remaining[0], "first survivor at schedule end",
                            refuted_count, depths_run)


def verify_epsilon_nash(G: Game, sigma: StrategyProfile, eps,
                        p: int = 30) -> Truth:
    """Certified check that no pure deviation gains more than eps."""
    eps = to_fraction(eps)
    any_unknown = False
    for i in range(G.n_players):
        base = expected_payoff(G, sigma, i)
        for b in range(G.actions[i]):
            gap = real_sub(deviation_payoff(G, sigma, i, b), base)
            if gap.exact is not None:
                if gap.exact > eps:
                    return Truth.FALSE
                continue
            enc = gap.enclosure_at(p)
            if enc.lo > eps:
                return Truth.FALSE
            if enc.hi > eps:
                any_unknown = True
    return Truth.UNKNOWN if any_unknown else Truth.TRUE


@dataclass
class NashResult:
    profile: StrategyProfile
    support: Support
    selection_reason: str
    eps: Fraction
    eps_verified: Truth
    bpineq_report: BPIneqReport
    stats: RunStats


def nash_solve(G: Game, p: int = 24, stage_budget: int = 64,
               depth_schedule: Sequence[int] = (4, 6, 8),
               eps=Fraction(1, 2**20),
               stats: Optional[RunStats] = None) -> NashResult:
    """Select a support, solve its system, renormalize, verify, report.

    Verification failure at the given budgets is reported in the result, not
    hidden."""
    if stats is None:
        stats = RunStats()
    selection = select_support(G, depth_schedule, stats=stats)
    system = support_system(G, selection.support)
    point, report = bpineq(system, p, stage_budget, stats)

    sigma: List[List[ApproxReal]] = []
    pos = 0
    for i, m in enumerate(G.actions):
        coords = [point[pos + a] for a in range(m)]
        pos += m
        vals = [c.exact for c in coords]
        if all(v is not None for v in vals):
            total = sum(vals, Fraction(0))
            if total > 0:
                coords = [ApproxReal.from_rational(v / total) for v in vals]
            else:
                stats.flag(f"player {i + 1} weights vanished; uniform fallback")
                coords = [ApproxReal.from_rational(Fraction(1, m))
                          for _ in range(m)]
        sigma.append(coords)
    profile = StrategyProfile(sigma)

    verified = verify_epsilon_nash(G, profile, eps, p=max(p, 30))
    if verified is not Truth.TRUE:
        stats.flag(f"epsilon-nash verification returned {verified.value}")
    return NashResult(profile=profile, support=selection.support,
                      selection_reason=selection.reason,
                      eps=to_fraction(eps), eps_verified=verified,
                      bpineq_report=report, stats=stats)
