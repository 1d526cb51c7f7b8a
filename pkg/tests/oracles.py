"""Small independent reference implementations used as test oracles."""
from __future__ import annotations

import itertools
import math

import numpy as np


def brute_chromatic(n: int, edges) -> int:
    """Smallest k admitting a proper colouring, by trying all k^n assignments."""
    if n == 0:
        return 0
    if not edges:
        return 1
    for k in range(1, n + 1):
        for colors in itertools.product(range(k), repeat=n):
            if all(colors[i] != colors[j] for i, j in edges):
                return k
    return n


def count_proper(n: int, edges, k: int) -> int:
    return sum(
        all(c[i] != c[j] for i, j in edges) for c in itertools.product(range(k), repeat=n)
    )


def dpll(nvars: int, clauses: list[list[int]]) -> dict[int, bool] | None:
    """Plain recursive DPLL with unit propagation; returns a model or None."""

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            reduced = [x for x in c if x != -lit]
            if not reduced:
                return None
            out.append(reduced)
        return out

    def solve(cls, model):
        while True:
            units = [c[0] for c in cls if len(c) == 1]
            if not units:
                break
            lit = units[0]
            model = {**model, abs(lit): lit > 0}
            cls = simplify(cls, lit)
            if cls is None:
                return None
        if not cls:
            return model
        lit = cls[0][0]
        for choice in (lit, -lit):
            nxt = simplify(cls, choice)
            if nxt is not None:
                res = solve(nxt, {**model, abs(choice): choice > 0})
                if res is not None:
                    return res
        return None

    model = solve([list(c) for c in clauses], {})
    if model is None:
        return None
    return {v: model.get(v, False) for v in range(1, nvars + 1)}


def bezout_brute(p_a, p_b, r_a, r_b, bound: int):
    """All (x, y) with |x|, |y| <= bound and x p_a/p_b + y r_a/r_b = 1."""
    from fractions import Fraction

    u, v = Fraction(p_a, p_b), Fraction(r_a, r_b)
    return [
        (x, y)
        for x in range(-bound, bound + 1)
        for y in range(-bound, bound + 1)
        if x * u + y * v == 1
    ]


def moser_spindle() -> np.ndarray:
    """Two unit rhombi sharing vertex 0, rotated so their far tips are 1 apart."""
    phi = 2 * math.asin(1 / (2 * math.sqrt(3)))

    def rhombus(theta):
        u = np.array([math.cos(theta - math.pi / 6), math.sin(theta - math.pi / 6)])
        v = np.array([math.cos(theta + math.pi / 6), math.sin(theta + math.pi / 6)])
        return [u, v, u + v]

    pts = [np.zeros(2)] + rhombus(0.0) + rhombus(phi)
    return np.array(pts)


def circumcenter_oracle(verts: np.ndarray) -> np.ndarray:
    """Least-squares circumcentre in the affine hull, via lstsq on |x|^2 equations."""
    v0 = verts[0]
    e = verts[1:] - v0
    rhs = 0.5 * np.sum(e * e, axis=1)
    lam, *_ = np.linalg.lstsq(e @ e.T, rhs, rcond=None)
    return v0 + lam @ e


def circumradius_sq_oracle(verts: np.ndarray) -> float:
    d = circumcenter_oracle(verts) - verts[0]
    return float(d @ d)


def volume_sq_oracle(verts: np.ndarray) -> float:
    """Gram determinant of edge vectors over (m!)^2."""
    e = verts[1:] - verts[0]
    m = e.shape[0]
    return float(np.linalg.det(e @ e.T)) / math.factorial(m) ** 2
