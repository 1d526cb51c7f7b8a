"""Numeric replay of the 10-colour slice skeleton in R^3 x [0, eps]^6, and the
Isbell 7-colouring of the plane.

The replay builds one concrete instance of each geometric object and checks
its feasibility conditions; it does not (and cannot) range over colourings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from slicechroma import kernels
from slicechroma.geom import (
    GeometryError,
    Simplex,
    SphereDescriptor,
    _orthonormal_complement,
    _orthonormal_rows,
    attached_sphere_points,
    circumsphere,
    equator_points,
    regular_simplex,
)
from slicechroma.sphere_constructions import pentagon_offsets

MAIN_DIM = 3
SLAB_DIM = 6
TETRA_EDGE = 2 * math.sqrt(6)
LIMIT_RADIUS = math.sqrt(3) / 2
DEFAULT_DELTA = 1e-2  # in units of eps1
UNIT_TOL = 1e-9
RADIUS_TOL = 1e-10
EQUATOR_SAMPLES = 2000
V4_CANDIDATES = 4096


class ReplayError(GeometryError):
    pass


@dataclass
class ConstructionReport:
    v: np.ndarray  # (7, 9)
    r_attached_4: float
    equator_in_slice: bool
    r_attached_7: float
    residuals: dict[str, float]
    params: dict[str, float] = field(default_factory=dict)
    passed: bool = False
    failures: list[str] = field(default_factory=list)

    @property
    def gap(self) -> float:
        return abs(self.r_attached_7 - LIMIT_RADIUS)

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "failures": list(self.failures),
            "params": dict(self.params),
            "v": self.v.tolist(),
            "r_attached_4": self.r_attached_4,
            "r_attached_7": self.r_attached_7,
            "limit": LIMIT_RADIUS,
            "gap": self.gap,
            "equator_in_slice": self.equator_in_slice,
            "residuals": dict(self.residuals),
        }


def _separated_on_sphere(rng: np.random.Generator, center: np.ndarray, radius: float, count: int,
                         sep: float, budget: int = 10_000) -> np.ndarray:
    out: list[np.ndarray] = []
    for _ in range(budget):
        g = rng.standard_normal(center.shape[0])
        p = center + radius * g / np.linalg.norm(g)
        if all(np.linalg.norm(p - q) >= sep for q in out):
            out.append(p)
            if len(out) == count:
                return np.vstack(out)
    raise ReplayError(f"could not place {count} points {sep:.3e}-apart on a sphere of radius {radius:.3e}")


def _distance_to_affine(p: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance of each row of p from the affine hull of ``pts``."""
    q = _orthonormal_rows(pts[1:] - pts[0])
    rel = p - pts[0]
    return np.linalg.norm(rel - (rel @ q.T) @ q, axis=1)


def _lift(main: np.ndarray, slab: np.ndarray) -> np.ndarray:
    return np.concatenate([main, slab])


def slice_contains(points: np.ndarray, eps: float, tol: float = 0.0) -> np.ndarray:
    slab = np.atleast_2d(points)[:, MAIN_DIM:]
    return np.all((slab >= -tol) & (slab <= eps + tol), axis=1)


def replay_construction(eps: float, eps1: float, delta: float = DEFAULT_DELTA, seed: int = 0,
                        nu: float | None = None) -> ConstructionReport:
    """Build v1..v7 and the attached spheres for one (eps, eps1).

    ``delta`` is the packing separation on S^5_{eps1} measured in units of
    eps1 (absolute separation delta * eps1), and h = (delta * eps1)^{3/2} is the
    cell side. ``nu`` (default sqrt(eps)) is the pentagon radius on M.
    """
    if not 0 < eps1 < eps / 2:
        raise GeometryError(f"need 0 < eps1 < eps/2 (eps={eps}, eps1={eps1})")
    if not 0 < delta < 2:
        raise GeometryError("delta (relative to eps1) must lie in (0, 2)")
    nu = math.sqrt(eps) if nu is None else float(nu)
    if not 0 < nu < 1:
        raise GeometryError("nu must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    sep = delta * eps1
    h = sep**1.5
    res: dict[str, float] = {}
    fails: list[str] = []

    # Step 1: tetrahedron, slab sphere, three close points and the far v4
    T = regular_simplex(3, TETRA_EDGE)
    tv = T.as_float_array()
    edges = np.linalg.norm(tv[:, None] - tv[None], axis=2)[np.triu_indices(4, 1)]
    res["tetra_edge"] = float(np.max(np.abs(edges - TETRA_EDGE)))
    res["tetra_center"] = float(np.linalg.norm(tv.mean(axis=0)))
    s_center = np.full(SLAB_DIM, eps / 2)
    slab3 = _separated_on_sphere(rng, s_center, eps1, 3, sep)
    cell = np.zeros(MAIN_DIM)  # the cell [0, h)^3 meets T, whose centre is the origin
    main3 = cell + h * rng.random((3, MAIN_DIM))
    vprime = np.vstack([_lift(m, s) for m, s in zip(main3, slab3)])
    v_main = cell + h * rng.random(MAIN_DIM)
    g = rng.standard_normal((V4_CANDIDATES, SLAB_DIM))
    cand_slab = s_center + eps1 * g / np.linalg.norm(g, axis=1, keepdims=True)
    cands = np.hstack([np.tile(v_main, (V4_CANDIDATES, 1)), cand_slab])
    dist = _distance_to_affine(cands, vprime)
    v4 = cands[int(np.argmax(dist))]
    res["v4_plane_distance"] = float(dist.max())
    res["v4_plane_distance_over_eps1"] = float(dist.max() / eps1)
    v14 = np.vstack([vprime, v4])
    res["slab_sphere"] = float(np.max(np.abs(np.linalg.norm(v14[:, MAIN_DIM:] - s_center, axis=1) - eps1)))
    slab_gaps = np.linalg.norm(slab3[:, None] - slab3[None], axis=2)[np.triu_indices(3, 1)]
    res["slab_separation_over_delta"] = float(slab_gaps.min() / sep)
    res["main_spread_over_h"] = float(np.max(np.ptp(np.vstack([main3, v_main]), axis=0)) / h)
    if not bool(np.all(slice_contains(v14, eps))):
        fails.append("v1..v4 outside the slice")

    circ4 = circumsphere(Simplex(v14, n_main=MAIN_DIM), tol=1e-6)
    r4 = float(circ4.radius)
    res["circumradius_4"] = r4
    if not r4 < 1:
        raise ReplayError(f"circumradius {r4} of v1..v4 is not < 1")
    att4 = attached_sphere_points(v14)
    r_att4 = float(att4.radius)
    res["attached_4_formula"] = abs(r_att4 - math.sqrt(1 - r4 * r4))
    if res["attached_4_formula"] > RADIUS_TOL:
        fails.append("attached radius of v1..v4 disagrees with sqrt(1 - r^2)")

    # 2-equator M_E: the main axes projected into the attached sphere's subspace
    H = att4.basis  # (6, 9)
    e_main = np.eye(MAIN_DIM + SLAB_DIM)[:MAIN_DIM]
    eq_basis = _orthonormal_rows((e_main @ H.T) @ H)
    rest = _orthonormal_complement(eq_basis @ H.T, H.shape[0]) @ H  # (3, 9), completes H
    equator = SphereDescriptor(att4.center, att4.radius_sq, eq_basis)
    eq_pts = np.vstack([equator_points(equator, EQUATOR_SAMPLES), equator.sample(EQUATOR_SAMPLES, rng)])
    inside = slice_contains(eq_pts, eps)
    equator_ok = bool(np.all(inside))
    slab = eq_pts[:, MAIN_DIM:]
    res["equator_slab_min"] = float(slab.min())
    res["equator_slab_max_minus_eps"] = float(slab.max() - eps)
    if not equator_ok:
        fails.append("a sampled 2-equator point leaves the slice")
    d_eq = np.linalg.norm(eq_pts[:, None, :] - v14[None], axis=2)
    res["equator_unit"] = float(np.max(np.abs(d_eq - 1)))

    # Step 2: pentagon around a point u of M_E, placed on M
    loc = rng.standard_normal(3)
    u_loc = loc / np.linalg.norm(loc)
    R = r_att4
    off = pentagon_offsets(nu)[:, :2]
    w = np.array([
        att4.center + math.sqrt(1 - nu * nu) * R * (u_loc @ eq_basis) + R * (o[0] * rest[0] + o[1] * rest[1])
        for o in off
    ])
    best, best_key = None, None
    for a in range(5):
        for b in range(a + 1, 5):
            for c in range(b + 1, 5):
                tri = w[[a, b, c]]
                md = min(np.linalg.norm(tri[0] - tri[1]), np.linalg.norm(tri[0] - tri[2]),
                         np.linalg.norm(tri[1] - tri[2]))
                key = (-round(md, 12), (a, b, c))
                if best_key is None or key < best_key:
                    best, best_key = (a, b, c), key
    v57 = w[list(best)]
    res["pentagon_min_side_over_nu"] = -best_key[0] / nu
    cross = np.linalg.norm(v14[:, None] - v57[None], axis=2)
    res["unit_cross"] = float(np.max(np.abs(cross - 1)))
    if res["unit_cross"] > UNIT_TOL:
        fails.append("v_i to v_j (i <= 4 < j) not unit")
    v = np.vstack([v14, v57])
    res["min_pairwise_v"] = float(np.min(np.linalg.norm(v[:, None] - v[None], axis=2)[np.triu_indices(7, 1)]))

    # Step 3: attached sphere of all seven points
    att7 = attached_sphere_points(v)
    r_att7 = float(att7.radius)
    circ7 = math.sqrt(max(0.0, 1 - r_att7 * r_att7))
    res["circumradius_7"] = circ7
    d7 = np.linalg.norm(att7.sample(64, rng)[:, None] - v[None], axis=2)
    res["attached_7_unit"] = float(np.max(np.abs(d7 - 1)))
    if res["attached_7_unit"] > UNIT_TOL:
        fails.append("attached sphere of v1..v7 not at unit distance")
    if not r_att7 > 0.5:
        fails.append("attached radius of v1..v7 is not > 1/2")

    params = {"eps": eps, "eps1": eps1, "delta": delta, "delta_abs": sep, "h": h, "nu": nu, "seed": seed}
    return ConstructionReport(v, r_att4, equator_ok, r_att7, res, params, not fails, fails)


# ---------------------------------------------------------------------------
# Isbell colouring


def isbell_threshold() -> float:
    """Largest eps with 2s <= 1 - eps and (sqrt(21) - 2) s >= 1 + eps for some s."""
    return 1 - 4 / math.sqrt(21)


def isbell_side(eps: float) -> float:
    return (1 - eps) / 2


def isbell_color(x, y, s: float):
    """Colour in 0..6 of the 7-colour tiling by hexagons of side s.

    Hexagon centres form the lattice i (sqrt(3) s, 0) + j (sqrt(3) s / 2, 3 s / 2);
    the colour is (i + 3 j) mod 7. Scalars in, int out; arrays in, arrays out.
    """
    if not 0 < s < 1:
        raise ValueError("hexagon side must lie in (0, 1)")
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    c = kernels.isbell_colors(np.atleast_1d(xa), np.atleast_1d(ya), s).reshape(np.broadcast(xa, ya).shape)
    return int(c) if c.ndim == 0 else c


@dataclass
class IsbellReport:
    eps: float
    s: float
    pairs: int
    monochromatic: int
    threshold: float
    within_tile_diameter: float
    same_color_gap: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.monochromatic == 0

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "eps": self.eps,
            "s": self.s,
            "pairs": self.pairs,
            "monochromatic": self.monochromatic,
            "threshold": self.threshold,
            "derivation": "2s <= 1 - eps and (sqrt(21) - 2)s >= 1 + eps; s = (1 - eps)/2 gives eps < 1 - 4/sqrt(21)",
            "within_tile_diameter": self.within_tile_diameter,
            "same_color_gap": self.same_color_gap,
            "seed": self.seed,
        }


def isbell_check(eps: float = 0.1, pairs: int = 100_000, seed: int = 0, window: float = 20.0) -> IsbellReport:
    """Sample pairs at distance uniform in [1 - eps, 1 + eps] and count equal colours."""
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    s = isbell_side(eps)
    rng = np.random.default_rng(seed)
    p = rng.uniform(-window, window, size=(pairs, 2))
    theta = rng.uniform(0, 2 * math.pi, pairs)
    r = rng.uniform(1 - eps, 1 + eps, pairs)
    q = p + np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)
    c1 = isbell_color(p[:, 0], p[:, 1], s)
    c2 = isbell_color(q[:, 0], q[:, 1], s)
    mono = int(np.count_nonzero(c1 == c2))
    return IsbellReport(eps, s, pairs, mono, isbell_threshold(), 2 * s, (math.sqrt(21) - 2) * s, seed)
