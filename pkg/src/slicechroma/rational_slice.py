"""Rational witness graphs with chromatic number 4 in Q^2 x [0, eps]^2.

Integer pairs with 3 b^2 - a^2 = 2 give rhombi A, B, C, D with five unit
edges and |AD| = a/b. In a 3-colouring A and D share a colour, so a chain of
rhombi transports one colour by any integer combination of the step lengths
a_n/b_n and a_{n+1}/b_{n+1}. Consecutive steps have coprime cross products,
so some combination equals 1, and the closing unit edge forces a fourth colour.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from slicechroma.geom import ExactPoint, GeometryError, SliceSpec, to_fraction
from slicechroma.udg import EXACT, UnitDistanceGraph, build_udg

MAX_WITNESS_VERTICES = 10**5
PELL_UNIT = (7, 4)  # 7 + 4 sqrt(3), norm 1


class WitnessTooLargeError(GeometryError):
    pass


@dataclass(frozen=True)
class PellPair:
    a: int
    b: int
    index: int

    def __post_init__(self):
        if 3 * self.b * self.b - self.a * self.a != 2:
            raise ValueError(f"(a, b) = ({self.a}, {self.b}) does not satisfy 3b^2 - a^2 = 2")

    @property
    def step(self) -> Fraction:
        """Length |AD| = a / b of the rhombus built on this pair."""
        return Fraction(self.a, self.b)

    @property
    def slab_sq(self) -> Fraction:
        """alpha^2 + beta^2 = (3b^2 - a^2) / (4b^2) = 1 / (2b^2)."""
        return Fraction(1, 2 * self.b * self.b)


def pell_solutions(count: int) -> list[PellPair]:
    """First ``count`` pairs from (1, 1) via (a, b) -> (7a + 12b, 4a + 7b)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = [PellPair(1, 1, 0)]
    while len(out) < count:
        p = out[-1]
        out.append(PellPair(7 * p.a + 12 * p.b, 4 * p.a + 7 * p.b, p.index + 1))
    for prev, nxt in zip(out, out[1:]):
        assert nxt.b > prev.b
    return out


def pell_pair(n: int) -> PellPair:
    return pell_solutions(n + 1)[n]


def z_sqrt3_norm(a: int, b: int) -> int:
    """Norm of a + b sqrt(3) in Z[sqrt 3]."""
    return a * a - 3 * b * b


def z_sqrt3_mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    (a, b), (c, d) = x, y
    return (a * c + 3 * b * d, a * d + b * c)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RhombusGadget:
    A: ExactPoint
    B: ExactPoint
    C: ExactPoint
    D: ExactPoint
    q: Fraction
    alpha: Fraction
    beta: Fraction

    @property
    def points(self) -> tuple[ExactPoint, ExactPoint, ExactPoint, ExactPoint]:
        return (self.A, self.B, self.C, self.D)

    def squared_lengths(self) -> dict[str, Fraction]:
        def d2(p, r):
            return sum((x - y) ** 2 for x, y in zip(p.coords, r.coords))

        return {
            "AB": d2(self.A, self.B),
            "AC": d2(self.A, self.C),
            "BC": d2(self.B, self.C),
            "BD": d2(self.B, self.D),
            "CD": d2(self.C, self.D),
            "AD": d2(self.A, self.D),
        }

    def slab_extent(self) -> Fraction:
        return max(max(p.slab) for p in self.points)


def rhombus_gadget(p: PellPair, eps, translate: Sequence = (0, 0, 0, 0), direction: int = 1) -> RhombusGadget:
    """Rhombus A=(0,0,0,0), B/C=(q, +-1/2, alpha, beta), D=(2q,0,0,0), shifted.

    q = a/(2b) and alpha = beta = 1/(2b). The admissibility test is
    1/(2b^2) < eps, i.e. the slab budget alpha^2 + beta^2 < eps; note that this
    does not by itself put alpha inside [0, eps] (see :func:`slab_fits`).
    ``direction=-1`` mirrors the gadget along the first axis.
    """
    eps = to_fraction(eps)
    if not p.slab_sq < eps:
        raise GeometryError(f"slab violation: 1/(2b^2) = {p.slab_sq} is not < eps = {eps}")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    t = [to_fraction(c) for c in translate]
    if len(t) != 4:
        raise ValueError("translate must be a rational 4-vector")
    q = Fraction(p.a, 2 * p.b)
    al = be = Fraction(1, 2 * p.b)
    half = Fraction(1, 2)
    sq = direction * q

    def pt(x, y, z, w):
        return ExactPoint((x + t[0], y + t[1]), (z + t[2], w + t[3]))

    g = RhombusGadget(
        A=pt(0, 0, 0, 0),
        B=pt(sq, half, al, be),
        C=pt(sq, -half, al, be),
        D=pt(2 * sq, 0, 0, 0),
        q=q,
        alpha=al,
        beta=be,
    )
    lengths = g.squared_lengths()
    for name in ("AB", "AC", "BC", "BD", "CD"):
        assert lengths[name] == 1, name
    return g


def slab_fits(p: PellPair, eps) -> bool:
    """Whether alpha = beta = 1/(2b) lies inside [0, eps]."""
    return Fraction(1, 2 * p.b) <= to_fraction(eps)


# ---------------------------------------------------------------------------


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def bezout_combination(n: int) -> tuple[int, int]:
    """Integers (x, y) with x a_n/b_n + y a_{n+1}/b_{n+1} = 1, minimising |x| + |y|."""
    if n < 0:
        raise ValueError("n must be >= 0")
    p, r = pell_solutions(n + 2)[n : n + 2]
    u = p.a * r.b  # coefficient of x after clearing denominators
    v = r.a * p.b  # coefficient of y
    target = p.b * r.b
    g, s, t = _ext_gcd(u, v)
    if target % g:
        raise ArithmeticError("no integer combination exists")  # unreachable: gcd is 1
    x0, y0 = s * (target // g), t * (target // g)
    du, dv = v // g, u // g  # x = x0 + k du, y = y0 - k dv
    centre = [-x0 / du, y0 / dv]
    best = None
    for k0 in centre:
        for k in range(math.floor(k0) - 1, math.floor(k0) + 3):
            x, y = x0 + k * du, y0 - k * dv
            key = (abs(x) + abs(y), abs(x), x)
            if best is None or key < best[0]:
                best = (key, x, y)
    _, x, y = best
    assert x * u + y * v == target
    assert x * Fraction(p.a, p.b) + y * Fraction(r.a, r.b) == 1
    return x, y


def witness_size(n: int) -> int:
    x, y = bezout_combination(n)
    return 1 + 3 * (abs(x) + abs(y))


def witness_graph(n: int, eps, *, max_vertices: int = MAX_WITNESS_VERTICES) -> UnitDistanceGraph:
    """Chain of rhombi from the origin to (1, 0, 0, 0) plus the closing unit edge.

    |x| gadgets of span a_n/b_n and |y| of span a_{n+1}/b_{n+1} are laid along
    the first axis (positive counts to the right first, then negative ones to
    the left), consecutive gadgets sharing their endpoint. Every edge is an
    exact unit distance. The graph's ``slice`` is attached only when every slab
    coordinate actually lies in [0, eps]; ``meta["in_slice"]`` records this.
    """
    eps = to_fraction(eps)
    p, r = pell_solutions(n + 2)[n : n + 2]
    for pair in (p, r):
        if not pair.slab_sq < eps:
            raise GeometryError(
                f"precondition 1/(2 b^2) < eps fails for b_{pair.index} = {pair.b} (eps = {eps})"
            )
    x, y = bezout_combination(n)
    size = 1 + 3 * (abs(x) + abs(y))
    if size > max_vertices:
        raise WitnessTooLargeError(f"witness for n={n} needs {size} vertices (cap {max_vertices})")
    moves = [(p, 1 if x > 0 else -1)] * abs(x) + [(r, 1 if y > 0 else -1)] * abs(y)
    moves.sort(key=lambda m: -m[1])  # rightward first so the chain stays compact
    origin = ExactPoint((0, 0), (0, 0))
    points = [origin]
    cur = origin
    for pair, direction in moves:
        gad = rhombus_gadget(pair, eps, translate=cur.coords, direction=direction)
        points.extend([gad.B, gad.C, gad.D])
        cur = gad.D
    end = ExactPoint((1, 0), (0, 0))
    if cur != end:
        raise AssertionError(f"chain ends at {cur}, expected (1, 0, 0, 0)")
    in_slice = all(0 <= c <= eps for pt in points for c in pt.slab)
    sl = SliceSpec(2, 2, eps) if in_slice else None
    meta = {
        "n": n,
        "eps": f"{eps.numerator}/{eps.denominator}",
        "bezout": [x, y],
        "pairs": [[p.a, p.b], [r.a, r.b]],
        "in_slice": in_slice,
        "slab_max": str(max(c for pt in points for c in pt.slab)),
    }
    g = build_udg(points, EXACT, sl, meta=meta)
    # origin and end must be adjacent: the closing edge
    if not g.has_edge(0, _index_of(g, end)):
        raise AssertionError("closing edge missing")
    return g


def _index_of(g: UnitDistanceGraph, pt: ExactPoint) -> int:
    for i, q in enumerate(g.points):
        if q == pt:
            return i
    raise KeyError(pt)
