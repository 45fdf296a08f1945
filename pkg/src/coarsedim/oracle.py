"""Brute-force checkers for tiny instances.

Nothing here reuses the measurement or verification code it is meant to
check; only raw distances ``space.d(i, j)`` are shared.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .covers import Cover, NotACover
from .metric import BudgetExceeded, FiniteMetricSpace
from .witness import WitnessFamily, WitnessReport


class NoCoverExists(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_points: int = 12
    max_candidate_sets: int = 8192
    time_limit: float = 60.0

    def __post_init__(self):
        if self.max_points <= 0 or self.max_candidate_sets <= 0 or self.time_limit <= 0:
            raise ValueError("budget limits must be positive")


def _ball(space: FiniteMetricSpace, x: int, r: float) -> frozenset:
    return frozenset(y for y in range(space.size) if space.d(x, y) <= r)


def _diameter_at_most(space: FiniteMetricSpace, subset, S: float) -> bool:
    return all(space.d(a, b) <= S for a, b in itertools.combinations(subset, 2))


def min_multiplicity_exhaustive(space: FiniteMetricSpace, S: float, L: float,
                                budget: OracleBudget | None = None) -> int:
    """Smallest k such that some cover has mesh <= S, every closed L-ball
    inside one element, and multiplicity <= k.

    Only elements that hold some ball need be chosen (dropping any other
    element keeps the cover valid and cannot raise multiplicity), so the search
    repeatedly takes the first point whose ball is not yet held and branches
    over the pool sets containing that ball.
    """
    budget = budget or OracleBudget()
    N = space.size
    if N > budget.max_points:
        raise BudgetExceeded(f"{N} points > oracle budget {budget.max_points}")
    deadline = time.monotonic() + budget.time_limit

    pool = []
    for size in range(1, N + 1):
        for subset in itertools.combinations(range(N), size):
            if _diameter_at_most(space, subset, S):
                pool.append(frozenset(subset))
                if len(pool) > budget.max_candidate_sets:
                    raise BudgetExceeded(f"more than {budget.max_candidate_sets} candidate sets")

    balls = [_ball(space, x, L) for x in range(N)]
    holders = [[s for s in pool if b <= s] for b in balls]
    for x, options in enumerate(holders):
        if not options:
            raise NoCoverExists(f"ball of radius {L} about {x} has diameter > {S}")

    def feasible(k: int) -> bool:
        counts = [0] * N
        chosen: list[frozenset] = []

        def fits(s):
            return all(counts[p] < k for p in s)

        def search() -> bool:
            if time.monotonic() > deadline:
                raise BudgetExceeded(f"oracle exceeded {budget.time_limit} s")
            open_points = [x for x in range(N) if not any(balls[x] <= c for c in chosen)]
            if not open_points:
                return True
            # every open ball must still have a holder that fits
            if any(not any(fits(s) for s in holders[x]) for x in open_points):
                return False
            for s in holders[open_points[0]]:
                if not fits(s):
                    continue
                for p in s:
                    counts[p] += 1
                chosen.append(s)
                if search():
                    return True
                chosen.pop()
                for p in s:
                    counts[p] -= 1
            return False

        return search()

    for k in range(1, N + 1):
        if feasible(k):
            return k
    raise AssertionError("balls themselves give a cover of multiplicity <= N")


def _naive_ratio(a, b):
    sym = [p for p in a if p not in b] + [p for p in b if p not in a]
    common = [p for p in a if p in b]
    if not common:
        return math.inf
    return Fraction(len(sym), len(common))


def independent_pair_scan(space: FiniteMetricSpace, family: WitnessFamily, R: float,
                          epsilon_bound, n: int | None = None) -> WitnessReport:
    """Double-loop twin of ``verify_witness``; must agree field for field."""
    eps = Fraction(epsilon_bound)
    N = space.size
    sets = [sorted(s) for s in family.sets]

    worst, worst_pair = Fraction(0), None
    checked, max_sym, min_common = 0, 0, None
    ratio_bad = []
    for x in range(N):
        for y in range(x + 1, N):
            if not space.d(x, y) <= R:
                continue
            checked += 1
            a, b = sets[x], sets[y]
            sym = len([p for p in a if p not in b]) + len([p for p in b if p not in a])
            common = len([p for p in a if p in b])
            if sym > max_sym:
                max_sym = sym
            if min_common is None or common < min_common:
                min_common = common
            r = _naive_ratio(a, b)
            if r > worst:
                worst, worst_pair = r, (x, y)
            if r >= eps:
                ratio_bad.append((x, y))

    support_bad = []
    for x in range(N):
        for p, lvl in sets[x]:
            if space.d(x, p) > family.radius_S:
                support_bad.append((x, p, lvl))

    max_proj = 0
    proj_bad = []
    for x in range(N):
        pts = []
        for p, _ in sets[x]:
            if p not in pts:
                pts.append(p)
        max_proj = max(max_proj, len(pts))
        if n is not None and len(pts) > n + 1:
            proj_bad.append(x)

    return WitnessReport(
        passed=not ratio_bad and not support_bad and not proj_bad,
        worst_ratio=worst, worst_pair=worst_pair, max_projection=max_proj,
        close_pairs_checked=checked, max_symdiff=max_sym, min_intersection=min_common,
        ratio_violations=ratio_bad, support_violations=support_bad,
        projection_violations=proj_bad, R=R, epsilon_bound=eps, n=n,
        symdiff_within_2n=None if n is None else max_sym <= 2 * n,
    )


def ball_inclusion_scan(space: FiniteMetricSpace, cover: Cover, L: float) -> bool:
    """True iff every closed L-ball lies inside some element of the cover."""
    elements = [set(e) for e in cover]
    covered = set().union(*elements) if elements else set()
    missing = [x for x in range(space.size) if x not in covered]
    if missing:
        raise NotACover(missing)
    for x in range(space.size):
        ball = [int(y) for y in (space.row(x) <= L).nonzero()[0]]
        if not any(all(y in e for y in ball) for e in elements if x in e):
            return False
    return True
