"""Finite metric spaces on the points ``0..N-1``.

A space is backed either by an explicit distance matrix or, for lattice
spaces produced by :func:`gen_grid`, by integer coordinates plus a norm.  The
coordinate form never materializes the N x N matrix unless asked to, which
keeps 10^4-point grids cheap.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

DEFAULT_POINT_BUDGET = 20_000
BUDGET_ENV_VAR = "COARSE_BUDGET_POINTS"

# element count of one distance block; bounds memory of chunked scans
_BLOCK_ENTRIES = 1 << 22


class MetricError(ValueError):
    """Base class for rejected metric input."""


class NotSquare(MetricError):
    pass


class NonFiniteEntry(MetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f"distance ({i}, {j}) is not finite")
        self.i, self.j = i, j


class NegativeEntry(MetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f"distance ({i}, {j}) is negative")
        self.i, self.j = i, j


class NonzeroDiagonal(MetricError):
    def __init__(self, i: int):
        super().__init__(f"distance ({i}, {i}) is not zero")
        self.i = i


class AsymmetricMatrix(MetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f"distance ({i}, {j}) differs from ({j}, {i})")
        self.i, self.j = i, j


class TriangleViolation(MetricError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"d({i},{j}) > d({i},{k}) + d({k},{j})")
        self.i, self.j, self.k = i, j, k

    @property
    def indices(self) -> tuple[int, int, int]:
        return (self.i, self.j, self.k)


class DisconnectedGraph(MetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f"no path between {i} and {j}")
        self.i, self.j = i, j


class BudgetExceeded(ValueError):
    """Raised when an input would exceed a configured size budget."""


class EmptySubset(ValueError):
    pass


def point_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    return int(raw) if raw else DEFAULT_POINT_BUDGET


@dataclass(frozen=True)
class GridInfo:
    dim: int
    side: int
    norm: str  # "linf" | "l1"


class FiniteMetricSpace:
    """Points ``0..size-1`` with a validated metric.

    Use :func:`validate_space`, :func:`from_graph` or :func:`gen_grid` to build
    one; the constructor trusts its input.
    """

    def __init__(self, dist: np.ndarray | None = None, *, coords: np.ndarray | None = None,
                 grid: GridInfo | None = None):
        if (dist is None) == (coords is None):
            raise TypeError("exactly one of dist or coords is required")
        self._dist = dist
        self.coords = coords
        self.grid = grid
        self.size = int(dist.shape[0] if dist is not None else coords.shape[0])

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        kind = f"grid {self.grid}" if self.grid else "matrix"
        return f"FiniteMetricSpace(size={self.size}, {kind})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        if self.size != other.size:
            return False
        if self.grid is not None and other.grid is not None:
            return self.grid == other.grid
        return bool(np.array_equal(self.dist, other.dist))

    @property
    def dist(self) -> np.ndarray:
        """Full distance matrix (materialized and cached for grid spaces)."""
        if self._dist is None:
            idx = np.arange(self.size)
            self._dist = self.block(idx, idx)
        return self._dist

    def d(self, i: int, j: int) -> float:
        if self._dist is not None:
            return float(self._dist[i, j])
        diff = np.abs(self.coords[i] - self.coords[j])
        return float(diff.max() if self.grid.norm == "linf" else diff.sum())

    def row(self, i: int) -> np.ndarray:
        """Distances from ``i`` to every point."""
        if self._dist is not None:
            return self._dist[i]
        return self._grid_block(self.coords[i:i + 1], self.coords)[0]

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Distance submatrix ``d(rows[a], cols[b])``."""
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        if self._dist is not None:
            return self._dist[np.ix_(rows, cols)]
        return self._grid_block(self.coords[rows], self.coords[cols])

    def _grid_block(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # one axis at a time in int32: far less memory traffic than a 3-D diff
        a, b = a.astype(np.int32), b.astype(np.int32)
        combine = np.maximum if self.grid.norm == "linf" else np.add
        out = np.abs(a[:, None, 0] - b[None, :, 0])
        for k in range(1, a.shape[1]):
            combine(out, np.abs(a[:, None, k] - b[None, :, k]), out=out)
        return out.astype(np.float64)

    def iter_blocks(self, rows: Sequence[int], cols: Sequence[int]):
        """Yield ``(row_slice, block)`` pairs covering ``block(rows, cols)`` in chunks."""
        rows = np.asarray(rows, dtype=np.intp)
        step = max(1, _BLOCK_ENTRIES // max(1, len(cols)))
        for start in range(0, len(rows), step):
            yield slice(start, start + step), self.block(rows[start:start + step], cols)


@dataclass(frozen=True)
class ScaleParams:
    """The scale symbols R, epsilon, n, L, S in one record."""

    R: float
    epsilon: Fraction
    n: int
    L: float = 0.0
    S: float = 0.0

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("R must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.L < 0 or self.S < 0:
            raise ValueError("L and S must be nonnegative")


def point_set(points: Iterable[int], size: int | None = None) -> tuple[int, ...]:
    """Canonical point set: sorted, duplicate-free tuple of indices."""
    members = tuple(sorted({int(p) for p in points}))
    if size is not None and members and (members[0] < 0 or members[-1] >= size):
        raise IndexError(f"point index out of range [0, {size})")
    return members


def validate_space(dist) -> FiniteMetricSpace:
    """Check all metric axioms exhaustively and wrap ``dist``.

    The triangle inequality is checked for every triple, so this is O(N^3).
    Errors carry the first offending indices in lexicographic order.
    """
    d = np.array(dist, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
        raise NotSquare(f"expected a non-empty square matrix, got shape {d.shape}")
    bad = np.argwhere(~np.isfinite(d))
    if len(bad):
        raise NonFiniteEntry(*map(int, bad[0]))
    bad = np.argwhere(d < 0)
    if len(bad):
        raise NegativeEntry(*map(int, bad[0]))
    bad = np.flatnonzero(np.diagonal(d) != 0)
    if len(bad):
        raise NonzeroDiagonal(int(bad[0]))
    bad = np.argwhere(d != d.T)
    if len(bad):
        raise AsymmetricMatrix(*map(int, bad[0]))
    for i in range(d.shape[0]):
        # via[j, k] = d(i,k) + d(k,j), using symmetry for d(k,j)
        via = d[i][None, :] + d
        bad = np.argwhere(d[i][:, None] > via)
        if len(bad):
            j, k = map(int, bad[0])
            raise TriangleViolation(i, j, k)
    d.setflags(write=False)
    return FiniteMetricSpace(d)


def from_graph(n: int, edges: Iterable[Sequence[float]]) -> FiniteMetricSpace:
    """Shortest-path metric of an undirected graph with positive edge weights."""
    if n < 1:
        raise ValueError("graph needs at least one vertex")
    rows, cols, weights = [], [], []
    best: dict[tuple[int, int], float] = {}
    for i, j, w in edges:
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"edge ({i}, {j}) out of range")
        if not w > 0:
            raise ValueError(f"edge ({i}, {j}) has non-positive weight {w}")
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        best[key] = min(w, best.get(key, math.inf))
    for (i, j), w in best.items():
        rows.append(i)
        cols.append(j)
        weights.append(w)
    graph = coo_matrix((weights, (rows, cols)), shape=(n, n)).tocsr()
    d = shortest_path(graph, method="D", directed=False)
    bad = np.argwhere(~np.isfinite(d))
    if len(bad):
        raise DisconnectedGraph(*map(int, bad[0]))
    return validate_space(d)


def random_graph_space(n: int, p: float, rng: np.random.Generator,
                       max_weight: int = 3) -> FiniteMetricSpace:
    """Connected random graph metric with integer weights in ``[1, max_weight]``.

    A random spanning path guarantees connectivity; other edges appear with
    probability ``p``.
    """
    order = rng.permutation(n)
    edges = [(int(a), int(b), int(rng.integers(1, max_weight + 1)))
             for a, b in zip(order, order[1:])]
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges.append((i, j, int(rng.integers(1, max_weight + 1))))
    return from_graph(n, edges)


def gen_grid(dim: int, side: int, norm: str = "linf", budget: int | None = None) -> FiniteMetricSpace:
    """Lattice ``{0..side-1}^dim`` under the l-infinity or l1 norm, row-major order."""
    if dim < 1 or side < 1:
        raise ValueError("dim and side must be positive")
    if norm not in ("linf", "l1"):
        raise ValueError(f"unknown norm {norm!r}")
    budget = point_budget() if budget is None else budget
    if side ** dim > budget:
        raise BudgetExceeded(f"{side}^{dim} points exceeds budget {budget}")
    axes = [np.arange(side, dtype=np.int64)] * dim
    coords = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    coords.setflags(write=False)
    return FiniteMetricSpace(coords=coords, grid=GridInfo(dim, side, norm))


def closed_ball(space: FiniteMetricSpace, x: int, r: float) -> tuple[int, ...]:
    return tuple(np.flatnonzero(space.row(x) <= r).tolist())


def subset_diameter(space: FiniteMetricSpace, subset: Sequence[int]) -> float:
    if len(subset) == 0:
        raise EmptySubset("diameter of an empty subset")
    best = 0.0
    for _, blk in space.iter_blocks(subset, subset):
        best = max(best, float(blk.max()))
    return best


def r_step_graph(space: FiniteMetricSpace, R: float) -> list[np.ndarray]:
    """Adjacency lists of the graph joining distinct points at distance <= R."""
    if not R > 0:
        raise ValueError("R must be positive")
    adj = []
    for i in range(space.size):
        nbrs = np.flatnonzero(space.row(i) <= R)
        adj.append(nbrs[nbrs != i])
    return adj
