"""Covers of a finite metric space: multiplicity, mesh and Lebesgue margin."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .metric import FiniteMetricSpace, point_set, subset_diameter

INFINITE = math.inf


class CoverError(ValueError):
    pass


class EmptyCover(CoverError):
    pass


class NotACover(CoverError):
    def __init__(self, uncovered: Sequence[int]):
        self.uncovered = tuple(uncovered)
        head = ", ".join(map(str, self.uncovered[:10]))
        more = "..." if len(self.uncovered) > 10 else ""
        super().__init__(f"points not covered: {head}{more}")


class NotAGridSpace(CoverError):
    pass


class SideTooSmall(CoverError):
    pass


@dataclass(frozen=True)
class Cover:
    """A finite family of non-empty point sets, each stored sorted."""

    elements: tuple[tuple[int, ...], ...]

    def __init__(self, elements: Iterable[Iterable[int]]):
        canon = tuple(point_set(e) for e in elements)
        if any(len(e) == 0 for e in canon):
            raise ValueError("cover elements must be non-empty")
        object.__setattr__(self, "elements", canon)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, j: int) -> tuple[int, ...]:
        return self.elements[j]

    def memberships(self, size: int) -> list[list[int]]:
        """For every point, the indices of the elements containing it."""
        out: list[list[int]] = [[] for _ in range(size)]
        for j, elem in enumerate(self.elements):
            for p in elem:
                out[p].append(j)
        return out


@dataclass
class CoverReport:
    is_cover: bool
    multiplicity: int
    mesh: float
    min_margin: float
    margin_argmin: int | None
    uncovered: tuple[int, ...]
    n: int | None = None
    S: float | None = None
    L: float | None = None
    multiplicity_ok: bool | None = None
    mesh_ok: bool | None = None
    lebesgue_ok: bool | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _counts(space: FiniteMetricSpace, cover: Cover) -> np.ndarray:
    counts = np.zeros(space.size, dtype=np.int64)
    for elem in cover:
        counts[list(elem)] += 1
    return counts


def uncovered_points(space: FiniteMetricSpace, cover: Cover) -> tuple[int, ...]:
    return tuple(np.flatnonzero(_counts(space, cover) == 0).tolist())


def multiplicity(space: FiniteMetricSpace, cover: Cover) -> int:
    if len(cover) == 0:
        return 0
    return int(_counts(space, cover).max())


def mesh(space: FiniteMetricSpace, cover: Cover) -> float:
    if len(cover) == 0:
        raise EmptyCover("mesh of an empty cover")
    return max(subset_diameter(space, elem) for elem in cover)


def _element_margins(space: FiniteMetricSpace, elem: Sequence[int]) -> np.ndarray:
    """dist(x, X minus elem) for each x in elem; INFINITE when elem is X."""
    inside = np.zeros(space.size, dtype=bool)
    inside[list(elem)] = True
    outside = np.flatnonzero(~inside)
    out = np.full(len(elem), INFINITE)
    if len(outside) == 0:
        return out
    for rows, blk in space.iter_blocks(elem, outside):
        out[rows] = blk.min(axis=1)
    return out


def _margins(space: FiniteMetricSpace, cover: Cover) -> np.ndarray:
    # uncovered points keep margin 0: they fail every L >= 0
    per_point = np.zeros(space.size)
    for elem in cover:
        idx = list(elem)
        per_point[idx] = np.maximum(per_point[idx], _element_margins(space, elem))
    return per_point


def lebesgue_margin(space: FiniteMetricSpace, cover: Cover) -> tuple[float, np.ndarray]:
    """Return ``(min_margin, per_point)``.

    ``per_point[x]`` is the largest distance from x to the complement of an
    element containing x, so the closed ball of radius L about x lies in some
    element exactly when ``per_point[x] > L``.
    """
    missing = uncovered_points(space, cover)
    if missing:
        raise NotACover(missing)
    per_point = _margins(space, cover)
    return float(per_point.min()), per_point


def is_lebesgue_at_least(space: FiniteMetricSpace, cover: Cover, L: float) -> bool:
    return lebesgue_margin(space, cover)[0] > L


def brick_cover(space: FiniteMetricSpace, q: int) -> Cover:
    """Shifted-cube cover of an l-infinity grid with ``dim + 1`` colour classes.

    Colour c tiles the lattice by cubes of side ``(dim+1)*q`` shifted by
    ``c*q`` along every axis; cubes are clipped to the grid and empty ones
    are dropped.
    """
    grid = space.grid
    if grid is None or grid.norm != "linf":
        raise NotAGridSpace("brick_cover needs a space from gen_grid(..., norm='linf')")
    if q < 1:
        raise ValueError("q must be positive")
    width = (grid.dim + 1) * q
    if grid.side < width:
        raise SideTooSmall(f"side {grid.side} < (dim+1)*q = {width}")
    elements = []
    for color in range(grid.dim + 1):
        cube = (space.coords + color * q) // width
        keys, inverse = np.unique(cube, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(len(keys) + 1))
        for a, b in zip(bounds[:-1], bounds[1:]):
            elements.append(order[a:b].tolist())
    return Cover(elements)


def verify_cover(space: FiniteMetricSpace, cover: Cover, n: int | None = None,
                 S: float | None = None, L: float | None = None) -> CoverReport:
    """Measure a cover and check whichever of the bounds were supplied.

    Checks: multiplicity <= n+1, mesh <= S, min_margin > L.  Failures are
    recorded in the report, never raised.
    """
    counts = _counts(space, cover)
    uncovered = tuple(np.flatnonzero(counts == 0).tolist())
    mult = int(counts.max()) if len(cover) else 0
    mesh_value = mesh(space, cover) if len(cover) else 0.0
    per_point = _margins(space, cover)
    argmin = int(np.argmin(per_point))
    report = CoverReport(
        is_cover=not uncovered, multiplicity=mult, mesh=mesh_value,
        min_margin=float(per_point[argmin]), margin_argmin=argmin,
        uncovered=uncovered, n=n, S=S, L=L,
    )
    if uncovered:
        report.failures.append(f"{len(uncovered)} uncovered points")
    if n is not None:
        report.multiplicity_ok = mult <= n + 1
        if not report.multiplicity_ok:
            report.failures.append(f"multiplicity {mult} > n+1 = {n + 1}")
    if S is not None:
        report.mesh_ok = mesh_value <= S
        if not report.mesh_ok:
            report.failures.append(f"mesh {mesh_value} > S = {S}")
    if L is not None:
        report.lebesgue_ok = report.min_margin > L
        if not report.lebesgue_ok:
            report.failures.append(f"margin {report.min_margin} at point {argmin} <= L = {L}")
    return report
