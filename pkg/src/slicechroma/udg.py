"""Unit-distance graphs over exact or float point sets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from slicechroma import kernels
from slicechroma.geom import (
    TAU_GEOM,
    BackingMismatchError,
    DimensionMismatchError,
    ExactPoint,
    FloatPoint,
    GeometryError,
    SliceSpec,
)

TAU_DEFAULT = 1e-9
# float prefilter half-width for exact builds; exact checks follow
_PREFILTER = 1e-6
_PREFILTER_MAX_COORD = 1e5


@dataclass(frozen=True)
class Predicate:
    kind: str = "exact"
    tau: float = 0.0

    def __post_init__(self):
        if self.kind not in ("exact", "tol"):
            raise ValueError(f"unknown predicate kind {self.kind!r}")
        if self.kind == "tol" and not (0.0 <= self.tau <= 0.1):
            raise ValueError(f"tolerance tau must lie in [0, 0.1], got {self.tau}")


EXACT = Predicate("exact")


def tolerance(tau: float = TAU_DEFAULT) -> Predicate:
    return Predicate("tol", float(tau))


class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        self.n = int(n)
        norm = set()
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) references a missing vertex")
            norm.add((min(i, j), max(i, j)))
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(norm))

    @property
    def n_vertices(self) -> int:
        return self.n

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> list[frozenset[int]]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return [frozenset(s) for s in nb]

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def induced(self, vertices: Sequence[int]) -> "Graph":
        keep = list(vertices)
        pos = {v: k for k, v in enumerate(keep)}
        sub = [(pos[i], pos[j]) for i, j in self.edges if i in pos and j in pos]
        return Graph(len(keep), sub)

    def to_dimacs(self) -> str:
        lines = [f"p edge {self.n} {len(self.edges)}"]
        lines += [f"e {i + 1} {j + 1}" for i, j in self.edges]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, edges={len(self.edges)})"


class UnitDistanceGraph(Graph):
    """Points plus the unit-distance edges between them."""

    def __init__(self, points: Sequence, edges, predicate: Predicate, slice: SliceSpec | None = None,
                 meta: dict | None = None):
        self.points = tuple(points)
        super().__init__(len(self.points), edges)
        self.predicate = predicate
        self.slice = slice
        self.meta = dict(meta or {})

    @property
    def backing(self) -> str:
        if not self.points:
            return "exact" if self.predicate.kind == "exact" else "float"
        return "exact" if isinstance(self.points[0], ExactPoint) else "float"

    def coords_float(self) -> np.ndarray:
        if not self.points:
            return np.zeros((0, 0))
        if self.backing == "exact":
            return np.array([[float(c) for c in p.coords] for p in self.points])
        return np.vstack([p.coords for p in self.points])

    def edge_sqlength(self, i: int, j: int):
        a, b = self.points[i], self.points[j]
        if isinstance(a, ExactPoint):
            return sum((x - y) ** 2 for x, y in zip(a.coords, b.coords))
        d = a.coords - b.coords
        return float(d @ d)


# ---------------------------------------------------------------------------


def _as_points(points, dim_main: int | None) -> tuple[list, str]:
    out = []
    kinds = set()
    if isinstance(points, np.ndarray):
        arr = np.atleast_2d(np.asarray(points, dtype=np.float64))
        n = arr.shape[1] if dim_main is None else dim_main
        return [FloatPoint(row, n, arr.shape[1] - n) for row in arr], "float"
    for p in points:
        if isinstance(p, ExactPoint):
            kinds.add("exact")
            out.append(p)
        elif isinstance(p, FloatPoint):
            kinds.add("float")
            out.append(p)
        elif isinstance(p, np.ndarray):
            kinds.add("float")
            n = p.shape[0] if dim_main is None else dim_main
            out.append(FloatPoint(p, n, p.shape[0] - n))
        else:
            seq = list(p)
            n = len(seq) if dim_main is None else dim_main
            if all(isinstance(c, (int, Fraction, str)) and not isinstance(c, bool) for c in seq):
                kinds.add("exact")
                out.append(ExactPoint(tuple(seq[:n]), tuple(seq[n:])))
            else:
                kinds.add("float")
                out.append(FloatPoint(np.array(seq, dtype=np.float64), n, len(seq) - n))
    if len(kinds) > 1:
        raise BackingMismatchError("point set mixes exact and float points")
    return out, (kinds.pop() if kinds else "exact")


def _float_matrix(points: list, backing: str) -> np.ndarray:
    if backing == "exact":
        return np.array([[float(c) for c in p.coords] for p in points], dtype=np.float64)
    return np.vstack([p.coords for p in points]) if points else np.zeros((0, 0))


def _dedup(points: list, backing: str) -> list:
    if backing == "exact":
        seen = set()
        out = []
        for p in points:
            if p.coords not in seen:
                seen.add(p.coords)
                out.append(p)
        return out
    if len(points) < 2:
        return list(points)
    coords = _float_matrix(points, backing)
    ii, jj = kernels.pairs_in_shell(coords, -1.0, TAU_GEOM**2)
    drop = set()
    for i, j in zip(ii.tolist(), jj.tolist()):
        if i not in drop:
            drop.add(j)
    return [p for k, p in enumerate(points) if k not in drop]


def _exact_unit_pairs(points: list[ExactPoint]) -> list[tuple[int, int]]:
    m = len(points)
    if m < 2:
        return []
    # common denominator so the unit test is integer arithmetic
    denom = 1
    for p in points:
        for c in p.coords:
            denom = math.lcm(denom, c.denominator)
    ints = [tuple(c.numerator * (denom // c.denominator) for c in p.coords) for p in points]
    target = denom * denom
    coords = np.array([[float(c) for c in p.coords] for p in points])
    if np.max(np.abs(coords)) < _PREFILTER_MAX_COORD:
        lo, hi = (1 - _PREFILTER) ** 2, (1 + _PREFILTER) ** 2
        ii, jj = kernels.pairs_in_shell(coords, lo, hi)
        cand: Iterable[tuple[int, int]] = zip(ii.tolist(), jj.tolist())
    else:
        cand = combinations(range(m), 2)
    edges = []
    for i, j in cand:
        a, b = ints[i], ints[j]
        if sum((x - y) * (x - y) for x, y in zip(a, b)) == target:
            edges.append((i, j))
    return edges


def build_udg(points, predicate: Predicate | str = EXACT, slice: SliceSpec | None = None,
              *, dim_main: int | None = None, dedup: bool = True, meta: dict | None = None
              ) -> UnitDistanceGraph:
    """Connect every pair of points at distance 1.

    ``predicate`` is :data:`EXACT` (squared distance exactly 1, exact points
    only) or ``tolerance(tau)`` (``| |p - q| - 1 | <= tau``, float points only).
    Duplicate points are dropped first, keeping the first occurrence.
    """
    if isinstance(predicate, str):
        predicate = EXACT if predicate == "exact" else tolerance()
    if dim_main is None and slice is not None:
        dim_main = slice.n
    pts, backing = _as_points(points, dim_main)
    dims = {len(p) for p in pts}
    if len(dims) > 1:
        raise DimensionMismatchError(f"points have differing dimensions {sorted(dims)}")
    if predicate.kind == "exact" and backing != "exact":
        raise BackingMismatchError("exact predicate needs exact (rational) points")
    if predicate.kind == "tol" and backing != "float":
        raise BackingMismatchError("tolerance predicate needs float points")
    if slice is not None:
        for idx, p in enumerate(pts):
            if not slice.contains(p, tol=0.0 if backing == "exact" else TAU_GEOM):
                raise GeometryError(f"point {idx} lies outside the slice (slab must be in [0, {slice.eps}])")
    if dedup:
        pts = _dedup(pts, backing)
    if backing == "exact":
        edges = _exact_unit_pairs(pts)
    else:
        tau = predicate.tau
        coords = _float_matrix(pts, backing)
        ii, jj = kernels.pairs_in_shell(coords, (1 - tau) ** 2, (1 + tau) ** 2) if len(pts) > 1 else ([], [])
        edges = list(zip(np.asarray(ii).tolist(), np.asarray(jj).tolist()))
    return UnitDistanceGraph(pts, edges, predicate, slice, meta)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphStats:
    vertices: int
    edges: int
    max_degree: int
    clique_number: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.vertices, self.edges, self.max_degree, self.clique_number)


def _clique_capped(adj: Sequence[frozenset[int]], cap: int) -> int:
    best = 0

    def grow(size: int, cand: set[int]):
        nonlocal best
        if size > best:
            best = size
        if best >= cap:
            return
        for v in sorted(cand):
            if size + len(cand) <= best:
                return
            grow(size + 1, cand & adj[v])
            cand = cand - {v}

    grow(0, set(range(len(adj))))
    return min(best, cap)


def graph_stats(g: Graph, clique_cap: int = 5) -> GraphStats:
    """Counts, maximum degree and the clique number (search stops at ``clique_cap``)."""
    if g.n == 0:
        return GraphStats(0, 0, 0, 0)
    adj = g.adjacency
    return GraphStats(g.n, g.n_edges, max(len(a) for a in adj), _clique_capped(adj, clique_cap))

