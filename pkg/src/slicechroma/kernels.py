"""Hot inner loops: pair scans over point clouds and batched Isbell colouring.

Each kernel has an ``@njit`` version and a vectorised numpy version with the
same signature and identical output (same pair order). The public names
dispatch on :data:`slicechroma._accel.USE_NUMBA`.
"""
from __future__ import annotations

import math

import numpy as np

from slicechroma._accel import NUMBA_IMPORTABLE, USE_NUMBA

SQRT3 = math.sqrt(3.0)

# candidate lattice offsets around floor() of the fractional lattice coords;
# the Voronoi cell of the triangular lattice is always hit by one of these
_ISBELL_OFFSETS = np.array(
    [[di, dj] for di in (-1, 0, 1, 2) for dj in (-1, 0, 1, 2)], dtype=np.int64
)


# --------------------------------------------------------------------------
# numpy paths


def pairs_in_shell_numpy(coords: np.ndarray, lo_sq: float, hi_sq: float, block: int = 512):
    """Index pairs i < j with ``lo_sq <= |p_i - p_j|^2 <= hi_sq``, row-major order."""
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    m = coords.shape[0]
    out_i: list[np.ndarray] = []
    out_j: list[np.ndarray] = []
    for start in range(0, m, block):
        stop = min(m, start + block)
        diff = coords[start:stop, None, :] - coords[None, :, :]
        d2 = np.einsum("abk,abk->ab", diff, diff)
        rows = np.arange(start, stop)[:, None]
        mask = (d2 >= lo_sq) & (d2 <= hi_sq) & (np.arange(m)[None, :] > rows)
        ii, jj = np.nonzero(mask)
        out_i.append(ii + start)
        out_j.append(jj)
    if not out_i:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(out_i).astype(np.int64), np.concatenate(out_j).astype(np.int64)


def max_pairwise_distance_numpy(coords: np.ndarray, block: int = 512) -> float:
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    m = coords.shape[0]
    best = 0.0
    for start in range(0, m, block):
        diff = coords[start : start + block, None, :] - coords[None, :, :]
        d2 = np.einsum("abk,abk->ab", diff, diff)
        if d2.size:
            best = max(best, float(d2.max()))
    return math.sqrt(best)


def isbell_colors_numpy(x: np.ndarray, y: np.ndarray, s: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    # tile centres: i*(sqrt3 s, 0) + j*(sqrt3 s / 2, 3 s / 2)
    fj = y / (1.5 * s)
    fi = x / (SQRT3 * s) - 0.5 * fj
    bi = np.floor(fi).astype(np.int64)
    bj = np.floor(fj).astype(np.int64)
    best_d = np.full(x.shape, np.inf)
    best_i = np.zeros(x.shape, np.int64)
    best_j = np.zeros(x.shape, np.int64)
    for di, dj in _ISBELL_OFFSETS:
        ci = bi + di
        cj = bj + dj
        cx = SQRT3 * s * (ci + 0.5 * cj)
        cy = 1.5 * s * cj
        d = (x - cx) ** 2 + (y - cy) ** 2
        better = d < best_d
        best_d = np.where(better, d, best_d)
        best_i = np.where(better, ci, best_i)
        best_j = np.where(better, cj, best_j)
    return np.mod(best_i + 3 * best_j, 7)


# --------------------------------------------------------------------------
# numba paths

if NUMBA_IMPORTABLE:
    from numba import njit

    @njit(cache=True)
    def _shell_count(coords, lo_sq, hi_sq):
        m, dim = coords.shape
        count = 0
        for i in range(m):
            for j in range(i + 1, m):
                d2 = 0.0
                for k in range(dim):
                    t = coords[i, k] - coords[j, k]
                    d2 += t * t
                if lo_sq <= d2 <= hi_sq:
                    count += 1
        return count

    @njit(cache=True)
    def _shell_fill(coords, lo_sq, hi_sq, out_i, out_j):
        m, dim = coords.shape
        c = 0
        for i in range(m):
            for j in range(i + 1, m):
                d2 = 0.0
                for k in range(dim):
                    t = coords[i, k] - coords[j, k]
                    d2 += t * t
                if lo_sq <= d2 <= hi_sq:
                    out_i[c] = i
                    out_j[c] = j
                    c += 1

    def pairs_in_shell_numba(coords: np.ndarray, lo_sq: float, hi_sq: float):
        coords = np.ascontiguousarray(coords, dtype=np.float64)
        n = _shell_count(coords, float(lo_sq), float(hi_sq))
        out_i = np.empty(n, np.int64)
        out_j = np.empty(n, np.int64)
        _shell_fill(coords, float(lo_sq), float(hi_sq), out_i, out_j)
        return out_i, out_j

    @njit(cache=True)
    def _max_d2(coords):
        m, dim = coords.shape
        best = 0.0
        for i in range(m):
            for j in range(i + 1, m):
                d2 = 0.0
                for k in range(dim):
                    t = coords[i, k] - coords[j, k]
                    d2 += t * t
                if d2 > best:
                    best = d2
        return best

    def max_pairwise_distance_numba(coords: np.ndarray) -> float:
        return math.sqrt(_max_d2(np.ascontiguousarray(coords, dtype=np.float64)))

    @njit(cache=True)
    def _isbell(x, y, s, offsets, out):
        w = SQRT3 * s
        for t in range(x.shape[0]):
            fj = y[t] / (1.5 * s)
            fi = x[t] / w - 0.5 * fj
            bi = np.int64(np.floor(fi))
            bj = np.int64(np.floor(fj))
            best_d = np.inf
            best_i = 0
            best_j = 0
            for o in range(offsets.shape[0]):
                ci = bi + offsets[o, 0]
                cj = bj + offsets[o, 1]
                cx = w * (ci + 0.5 * cj)
                cy = 1.5 * s * cj
                d = (x[t] - cx) ** 2 + (y[t] - cy) ** 2
                if d < best_d:
                    best_d = d
                    best_i = ci
                    best_j = cj
            out[t] = (best_i + 3 * best_j) % 7

    def isbell_colors_numba(x: np.ndarray, y: np.ndarray, s: float) -> np.ndarray:
        x = np.ascontiguousarray(x, dtype=np.float64).ravel()
        y = np.ascontiguousarray(y, dtype=np.float64).ravel()
        out = np.empty(x.shape[0], np.int64)
        _isbell(x, y, float(s), _ISBELL_OFFSETS, out)
        return out

else:  # pragma: no cover
    pairs_in_shell_numba = pairs_in_shell_numpy
    max_pairwise_distance_numba = max_pairwise_distance_numpy
    isbell_colors_numba = isbell_colors_numpy


if USE_NUMBA:
    pairs_in_shell = pairs_in_shell_numba
    max_pairwise_distance = max_pairwise_distance_numba
    isbell_colors = isbell_colors_numba
else:
    pairs_in_shell = pairs_in_shell_numpy
    max_pairwise_distance = max_pairwise_distance_numpy
    isbell_colors = isbell_colors_numpy
