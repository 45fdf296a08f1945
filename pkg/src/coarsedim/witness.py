"""Witness families ``A_x`` of finite subsets of X x N and the two constructions
linking them to bounded covers.

A witness set is a frozenset of ``(point, level)`` pairs with ``level >= 1``.
Ratios are exact :class:`~fractions.Fraction` values, or :data:`INFINITE`
when two sets are disjoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .covers import Cover, lebesgue_margin, mesh, multiplicity, uncovered_points, NotACover
from .metric import FiniteMetricSpace, r_step_graph

INFINITE = math.inf
MAX_LEVEL = 2 ** 63 - 1

WitnessSet = frozenset  # of (point, level) tuples


class WitnessError(ValueError):
    pass


class EmptyWitnessSet(WitnessError):
    pass


class LebesgueTooSmall(WitnessError):
    pass


class CapOverflow(WitnessError):
    pass


class PremiseFailed(WitnessError):
    def __init__(self, report: "WitnessReport"):
        super().__init__("witness family does not satisfy the ratio/projection premise")
        self.report = report


def witness_set(pairs: Iterable[Sequence[int]]) -> frozenset:
    out = frozenset((int(p), int(level)) for p, level in pairs)
    if not out:
        raise EmptyWitnessSet("witness sets must be non-empty")
    if any(level < 1 for _, level in out):
        raise WitnessError("levels must be >= 1")
    return out


@dataclass(frozen=True)
class WitnessFamily:
    radius_S: float
    sets: tuple[frozenset, ...]

    def __init__(self, radius_S: float, sets: Iterable[Iterable[Sequence[int]]]):
        object.__setattr__(self, "radius_S", float(radius_S))
        object.__setattr__(self, "sets", tuple(witness_set(s) for s in sets))

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, x: int) -> frozenset:
        return self.sets[x]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value)


def variation_ratio(a: frozenset, b: frozenset):
    """``|a ^ b| / |a & b|`` as a Fraction, INFINITE for disjoint sets."""
    if not a or not b:
        raise EmptyWitnessSet("variation ratio of an empty set")
    common = len(a & b)
    if common == 0:
        return INFINITE
    return Fraction(len(a ^ b), common)


def projection(a: frozenset) -> set[int]:
    return {p for p, _ in a}


def projection_size(a: frozenset) -> int:
    return len(projection(a))


def column(a: frozenset, p: int) -> int:
    """Number of levels of ``a`` sitting over point ``p``."""
    return sum(1 for q, _ in a if q == p)


@dataclass
class WitnessReport:
    passed: bool
    worst_ratio: object  # Fraction or INFINITE
    worst_pair: tuple[int, int] | None
    max_projection: int
    close_pairs_checked: int
    max_symdiff: int
    min_intersection: int | None
    ratio_violations: list[tuple[int, int]] = field(default_factory=list)
    support_violations: list[tuple[int, int, int]] = field(default_factory=list)
    projection_violations: list[int] = field(default_factory=list)
    R: float | None = None
    epsilon_bound: Fraction | None = None
    n: int | None = None
    # whether every close pair keeps |A_x ^ A_y| <= 2n; None without n
    symdiff_within_2n: bool | None = None


def close_pairs(space: FiniteMetricSpace, R: float) -> Iterator[tuple[int, int]]:
    """Unordered pairs ``x < y`` with ``d(x, y) <= R``, lexicographically."""
    for x in range(space.size):
        row = space.row(x)
        for y in np.flatnonzero(row[x + 1:] <= R):
            yield x, x + 1 + int(y)


def verify_witness(space: FiniteMetricSpace, family: WitnessFamily, R: float,
                   epsilon_bound, n: int | None = None) -> WitnessReport:
    """Check the close-pair ratio bound, the support radius and, given ``n``,
    the projection bound ``n + 1``.  All ratio comparisons are strict."""
    if len(family) != space.size:
        raise WitnessError(f"family has {len(family)} sets for {space.size} points")
    eps = as_fraction(epsilon_bound)

    worst, worst_pair = Fraction(0), None
    checked, max_sym, min_common = 0, 0, None
    ratio_bad = []
    for x, y in close_pairs(space, R):
        a, b = family.sets[x], family.sets[y]
        checked += 1
        max_sym = max(max_sym, len(a ^ b))
        common = len(a & b)
        min_common = common if min_common is None else min(min_common, common)
        ratio = variation_ratio(a, b)
        if ratio > worst:
            worst, worst_pair = ratio, (x, y)
        if not ratio < eps:
            ratio_bad.append((x, y))

    support_bad = []
    for x, a in enumerate(family.sets):
        row = space.row(x)
        support_bad.extend((x, p, lvl) for p, lvl in sorted(a) if row[p] > family.radius_S)

    sizes = [projection_size(a) for a in family.sets]
    proj_bad = [x for x, s in enumerate(sizes) if s > n + 1] if n is not None else []

    return WitnessReport(
        passed=not (ratio_bad or support_bad or proj_bad),
        worst_ratio=worst, worst_pair=worst_pair, max_projection=max(sizes),
        close_pairs_checked=checked, max_symdiff=max_sym, min_intersection=min_common,
        ratio_violations=ratio_bad, support_violations=support_bad,
        projection_violations=proj_bad, R=R, epsilon_bound=eps, n=n,
        symdiff_within_2n=None if n is None else max_sym <= 2 * n,
    )


def choose_scale(R: float, epsilon, n: int) -> float:
    """Lebesgue scale L for which the cover-to-witness construction gets ratio < epsilon.

    Returns ``R * (ceil((2n+1)/epsilon) + 1)``; nudged upward by ulps if
    floating-point rounding would make ``floor(L/R)`` fall short.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    eps = as_fraction(epsilon)
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    steps = math.ceil(Fraction(2 * n + 1) / eps) + 1
    L = R * steps
    while math.floor(Fraction(L) / Fraction(R)) < steps:
        L = math.nextafter(L, math.inf)
    return L


@dataclass(frozen=True)
class ChainLengthTable:
    cap: int
    reps: tuple[int, ...]
    lengths: tuple[dict, ...]  # lengths[j][x] for x in element j


def _hops_to_outside(adj: list[np.ndarray], inside: np.ndarray, members: Sequence[int],
                     cap: int) -> dict[int, int]:
    # multi-source BFS seeded at every point outside the element
    hops = {}
    frontier = [x for x in members if len(adj[x]) and not inside[adj[x]].all()]
    level = 1
    seen = np.zeros(len(inside), dtype=bool)
    seen[~inside] = True
    while frontier and level < cap:
        for x in frontier:
            seen[x] = True
            hops[x] = level
        nxt = set()
        for x in frontier:
            for y in adj[x]:
                if not seen[y]:
                    nxt.add(int(y))
        frontier = sorted(nxt)
        level += 1
    return {x: hops.get(x, cap) for x in members}


def chain_length_table(space: FiniteMetricSpace, cover: Cover, R: float, cap: int,
                       adj: list[np.ndarray] | None = None) -> ChainLengthTable:
    """Fewest R-steps from each x in each element to the element's complement,
    capped at ``cap``.  Representatives are the smallest index of each element."""
    if cap < 1:
        raise ValueError("cap must be positive")
    missing = uncovered_points(space, cover)
    if missing:
        raise NotACover(missing)
    adj = r_step_graph(space, R) if adj is None else adj
    lengths = []
    for elem in cover:
        inside = np.zeros(space.size, dtype=bool)
        inside[list(elem)] = True
        lengths.append(_hops_to_outside(adj, inside, elem, cap))
    return ChainLengthTable(cap=cap, reps=tuple(e[0] for e in cover), lengths=tuple(lengths))


def witness_from_table(space: FiniteMetricSpace, cover: Cover,
                       table: ChainLengthTable) -> WitnessFamily:
    """``A_x`` = union over elements j containing x of the column
    ``{(rep_j, j*cap + t) : 1 <= t <= l_j(x)}``; support radius = mesh."""
    cap = table.cap
    if len(cover) * cap > MAX_LEVEL:
        raise CapOverflow(f"levels up to {len(cover) * cap} overflow int64")
    sets: list[set] = [set() for _ in range(space.size)]
    for j, elem in enumerate(cover):
        rep, base = table.reps[j], j * cap
        for x in elem:
            sets[x].update((rep, base + t) for t in range(1, table.lengths[j][x] + 1))
    return WitnessFamily(mesh(space, cover), sets)


def cover_to_witness(space: FiniteMetricSpace, cover: Cover, R: float, L: float) -> WitnessFamily:
    """Witness family from a bounded cover whose Lebesgue margin exceeds L."""
    if not R > 0:
        raise ValueError("R must be positive")
    if L < R:
        raise ValueError(f"L = {L} must be at least R = {R}")
    margin, per_point = lebesgue_margin(space, cover)
    if not margin > L:
        raise LebesgueTooSmall(
            f"min margin {margin} at point {int(np.argmin(per_point))} is not > L = {L}")
    cap = math.floor(Fraction(L) / Fraction(R)) + 1
    if len(cover) * cap > MAX_LEVEL:
        raise CapOverflow(f"levels up to {len(cover) * cap} overflow int64")
    return witness_from_table(space, cover, chain_length_table(space, cover, R, cap))


class DerivedCover(NamedTuple):
    cover: Cover
    centers: tuple[int, ...]  # defining point p of each element U_p
    selected: tuple[int, ...]  # selected[x] = point whose column in A_x is largest

    def element_of(self, p: int) -> tuple[int, ...]:
        j = self.centers.index(p)
        return self.cover[j]


def witness_to_cover(space: FiniteMetricSpace, family: WitnessFamily) -> DerivedCover:
    """Invert supports: ``U_p = {y : p in projection(A_y)}``.

    ``selected[x]`` is the point with the most levels in ``A_x``, ties to the
    smaller index.
    """
    members: dict[int, list[int]] = {}
    selected = []
    for y, a in enumerate(family.sets):
        cols: dict[int, int] = {}
        for p, _ in a:
            cols[p] = cols.get(p, 0) + 1
        for p in cols:
            members.setdefault(p, []).append(y)
        selected.append(min(cols, key=lambda p: (-cols[p], p)))
    centers = tuple(sorted(members))
    return DerivedCover(Cover(members[p] for p in centers), centers, tuple(selected))


def inclusion_violations(space: FiniteMetricSpace, family: WitnessFamily, R: float,
                         derived: DerivedCover | None = None) -> list[tuple[int, int, object]]:
    """Close ordered pairs ``(x, y)`` with ``y`` outside ``U_selected(x)``,
    each with its ratio ``|A_x ^ A_y| / |A_x & A_y|``."""
    derived = witness_to_cover(space, family) if derived is None else derived
    out = []
    for x in range(space.size):
        z = derived.selected[x]
        ball = np.flatnonzero(space.row(x) <= R)
        for y in ball.tolist():
            if all(p != z for p, _ in family.sets[y]):
                out.append((x, y, variation_ratio(family.sets[x], family.sets[y])))
    return out


@dataclass
class Certificate:
    premise: WitnessReport
    derived: DerivedCover
    multiplicity: int
    mesh: float
    radius_S: float
    multiplicity_ok: bool
    inclusion_ok: bool
    mesh_ok: bool
    column_bound_ok: bool
    min_column_fraction: Fraction  # min over x of |column of selected(x)| / |A_x|
    inclusion_failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.multiplicity_ok and self.inclusion_ok and self.mesh_ok and self.column_bound_ok


def certify_c_implies_a(space: FiniteMetricSpace, family: WitnessFamily, R: float,
                        n: int) -> Certificate:
    """Check the premise (ratio < 1/(n+1), projections <= n+1), build the
    derived cover, and measure its multiplicity, mesh and R-ball inclusion."""
    premise = verify_witness(space, family, R, Fraction(1, n + 1), n)
    if not premise.passed:
        raise PremiseFailed(premise)
    derived = witness_to_cover(space, family)
    mult = multiplicity(space, derived.cover)
    mesh_value = mesh(space, derived.cover)
    failures = inclusion_violations(space, family, R, derived)
    fractions = [Fraction(column(a, derived.selected[x]), len(a))
                 for x, a in enumerate(family.sets)]
    min_frac = min(fractions)
    return Certificate(
        premise=premise, derived=derived, multiplicity=mult, mesh=mesh_value,
        radius_S=family.radius_S,
        multiplicity_ok=mult <= n + 1,
        inclusion_ok=not failures,
        mesh_ok=mesh_value <= 2 * family.radius_S,
        column_bound_ok=min_frac >= Fraction(1, n + 1),
        min_column_fraction=min_frac,
        inclusion_failures=failures,
    )
