"""Unit-edge paths and odd cycles on 2-spheres, and the pentagon frame.

A 2-sphere of radius r > sqrt(1/2) is handled in local coordinates: its
``SphereDescriptor`` basis maps R^3 onto the supporting subspace, so the same
code serves spheres embedded in higher-dimensional space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from slicechroma import kernels
from slicechroma.coloring import find_odd_cycle
from slicechroma.geom import FloatPoint, GeometryError, SphereDescriptor
from slicechroma.udg import UnitDistanceGraph, build_udg, tolerance

MIN_RADIUS = math.sqrt(0.5)
STEP_FRACTION = 0.9
EDGE_TOL = 1e-9


class ConstructionError(GeometryError):
    pass


def reach_radius(eps: float) -> float:
    """gamma(eps) = sin(eps/2) sin(eps/4): targets this close admit a 4-step unit path."""
    return math.sin(eps / 2) * math.sin(eps / 4)


def diameter_threshold(r: float) -> float:
    return math.sqrt(4 * r * r - 1) / r


def sphere2(radius: float, center=None, basis=None) -> SphereDescriptor:
    """A 2-sphere; defaults to the origin-centred sphere in R^3."""
    c = np.zeros(3) if center is None else np.asarray(center, dtype=np.float64)
    b = np.eye(3) if basis is None else np.asarray(basis, dtype=np.float64)
    if b.shape[0] != 3:
        raise GeometryError("a 2-sphere needs a 3-vector basis")
    return SphereDescriptor(c, float(radius) ** 2, b)


def _local(sph: SphereDescriptor, p) -> np.ndarray:
    return (np.asarray(p, dtype=np.float64) - sph.center) @ sph.basis.T


def _global(sph: SphereDescriptor, x: np.ndarray) -> np.ndarray:
    return sph.center + np.asarray(x) @ sph.basis


def _unit_pair_points(p: np.ndarray, q: np.ndarray, r: float, toward: np.ndarray | None) -> np.ndarray:
    """Point on |x| = r at distance 1 from both p and q (local coords).

    With x.p = x.q = r^2 - 1/2 the solution set is at most two points, or a
    circle when p = q; the one nearest ``toward`` is returned.
    """
    c0 = r * r - 0.5
    s = p + q
    ss = float(s @ s)
    if ss < 1e-30:
        raise ConstructionError("antipodal endpoints")
    axis = s / math.sqrt(ss)
    # component along p + q: x.(p+q) = 2 c0
    along = 2 * c0 / math.sqrt(ss)
    d = p - q
    dn = float(np.linalg.norm(d))
    if dn < 1e-15:
        # circle around axis; pick the direction of ``toward``
        ref = toward if toward is not None else np.array([1.0, 0.0, 0.0])
        perp = ref - (ref @ axis) * axis
        if np.linalg.norm(perp) < 1e-12:
            perp = np.cross(axis, [1.0, 0.0, 0.0])
            if np.linalg.norm(perp) < 1e-12:
                perp = np.cross(axis, [0.0, 1.0, 0.0])
        normal = perp / np.linalg.norm(perp)
    else:
        normal = np.cross(p, q)
        nn = float(np.linalg.norm(normal))
        if nn < 1e-15:
            raise ConstructionError("degenerate configuration")
        normal /= nn
        # x must also be orthogonal to p - q, which holds for span{axis, normal}
    h2 = r * r - along * along
    if h2 < 0:
        raise ConstructionError("endpoints too far apart for a 2-step unit path")
    h = math.sqrt(h2)
    cands = [along * axis + h * normal, along * axis - h * normal]
    if toward is None:
        return cands[0]
    return min(cands, key=lambda x: float(np.linalg.norm(x - toward)))


def _polish(x: np.ndarray, anchors: list[np.ndarray], r: float, iters: int = 3) -> np.ndarray:
    """Newton steps on |x| = r, |x - a| = 1 (square system for two anchors)."""
    for _ in range(iters):
        f = [x @ x - r * r] + [(x - a) @ (x - a) - 1.0 for a in anchors]
        jac = np.array([2 * x] + [2 * (x - a) for a in anchors])
        try:
            step = np.linalg.lstsq(jac, np.array(f), rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        x = x - step
    return x


def _tangent_frame(x: np.ndarray, toward: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit tangents at x: ``par`` points to ``toward``, ``perp`` is orthogonal to it."""
    nrm = x / np.linalg.norm(x)
    par = toward - (toward @ nrm) * nrm
    if np.linalg.norm(par) < 1e-14:
        par = np.cross(nrm, [1.0, 0.0, 0.0])
        if np.linalg.norm(par) < 1e-12:
            par = np.cross(nrm, [0.0, 1.0, 0.0])
    par = par / np.linalg.norm(par)
    return par, np.cross(nrm, par)


def four_step_path(sphere: SphereDescriptor, u, target, eps: float, toward=None,
                   check_reach: bool = True) -> list[np.ndarray]:
    """v1..v4 on the sphere with |u-v1| = |v1-v2| = |v2-v3| = |v3-v4| = 1, v4 = target.

    ``toward`` is the far point v with |u - v| = 1 that v1 and v3 should hug.
    v2 is displaced from u orthogonally to the direction of v, by
    l1 = (t_perp + 2 sin(eps/4)) / 2 where t_perp is the target's component
    along that orthogonal direction, so both u - v2 and v4 - v2 stay nearly
    orthogonal to uv. v1 and v3 are then the closed-form unit-circle
    intersections nearest v, followed by a Newton polish.
    Raises :class:`ConstructionError` with the residual when the result is
    not within 1e-11.
    """
    if sphere.sphere_dim != 2:
        raise GeometryError("four_step_path works on 2-spheres")
    r = float(sphere.radius)
    if not r > MIN_RADIUS:
        raise GeometryError(f"sphere radius {r} must exceed sqrt(1/2) = {MIN_RADIUS:.6f}")
    if not 0 < eps < 1:
        raise GeometryError("eps must lie in (0, 1)")
    lu, lt = _local(sphere, u), _local(sphere, target)
    gap = float(np.linalg.norm(lu - lt))
    if check_reach and gap > reach_radius(eps) * (1 + 1e-12):
        raise GeometryError(f"target at distance {gap:.3e} exceeds reach radius {reach_radius(eps):.3e}")
    if toward is None:
        # no preferred far point: step direction becomes the orthogonal axis
        d = lt - lu if gap > 0 else np.cross(lu, [1.0, 0.0, 0.0])
        if np.linalg.norm(np.cross(lu, d)) < 1e-14:
            d = np.cross(lu, [0.0, 1.0, 0.0])
        _, ref = _tangent_frame(lu, lu + d)
        lf = None
    else:
        lf = _local(sphere, toward)
        _, ref = _tangent_frame(lu, lf)
    if gap == 0.0:
        v2 = lu.copy()
    else:
        half = math.sin(eps / 4)
        l1 = 0.5 * float((lt - lu) @ ref) + half
        w = lu + l1 * ref
        v2 = r * w / np.linalg.norm(w)
    if lf is None:
        par, _ = _tangent_frame(lu, lu + ref)
        lf = _unit_pair_points(lu, lu, r, lu + par)
    v1 = _polish(_unit_pair_points(lu, v2, r, lf), [lu, v2], r)
    v3 = _polish(_unit_pair_points(v2, lt, r, lf), [v2, lt], r)
    chain = [lu, v1, v2, v3, lt]
    res = path_residual(chain, r)
    if res > 1e-11:
        raise ConstructionError(f"no convergence: residual {res:.3e}")
    return [_global(sphere, x) for x in (v1, v2, v3, lt)]


def path_residual(chain: list[np.ndarray], r: float, center=None) -> float:
    c = np.zeros_like(chain[0]) if center is None else center
    on_sphere = max(abs(float(np.linalg.norm(x - c)) - r) for x in chain)
    edges = max(abs(float(np.linalg.norm(a - b)) - 1.0) for a, b in zip(chain, chain[1:]))
    return max(on_sphere, edges)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SphereCurve:
    sphere: SphereDescriptor
    samples: np.ndarray
    diameter: float = field(init=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", s)
        r = float(self.sphere.radius)
        off = np.abs(np.linalg.norm(s - self.sphere.center, axis=1) - r)
        if off.size and off.max() > 1e-9:
            raise GeometryError(f"curve sample off the sphere by {off.max():.2e}")
        object.__setattr__(self, "diameter", kernels.max_pairwise_distance(s))

    def point_at(self, t: float) -> np.ndarray:
        """Radial projection of the polyline at parameter t in [0, len-1]."""
        i = min(int(math.floor(t)), len(self.samples) - 2)
        frac = t - i
        p = (1 - frac) * self.samples[i] + frac * self.samples[i + 1]
        rel = p - self.sphere.center
        return self.sphere.center + float(self.sphere.radius) * rel / np.linalg.norm(rel)

    def distance_to(self, p: np.ndarray) -> float:
        """Distance from p to the polyline through the samples."""
        a, b = self.samples[:-1], self.samples[1:]
        ab = b - a
        t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.maximum(np.einsum("ij,ij->i", ab, ab), 1e-300), 0, 1)
        proj = a + t[:, None] * ab
        return float(np.min(np.linalg.norm(proj - p, axis=1)))


def great_circle_curve(sphere: SphereDescriptor, samples: int = 10_000, arc: float = 2 * math.pi,
                       phase: float = 0.0) -> SphereCurve:
    """Polyline samples along a great circle (or an arc of it) in the sphere's first two axes."""
    th = phase + np.linspace(0.0, arc, samples, endpoint=arc < 2 * math.pi)
    local = np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)
    return SphereCurve(sphere, sphere.center + float(sphere.radius) * (local @ sphere.basis))


def circle_curve(sphere: SphereDescriptor, polar: float, samples: int = 10_000) -> SphereCurve:
    """Circle of latitude at polar angle ``polar`` (radius r sin(polar))."""
    th = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    sp, cp = math.sin(polar), math.cos(polar)
    local = np.stack([sp * np.cos(th), sp * np.sin(th), np.full_like(th, cp)], axis=1)
    return SphereCurve(sphere, sphere.center + float(sphere.radius) * (local @ sphere.basis))


@dataclass
class OddCycleConstruction:
    graph: UnitDistanceGraph
    cycle: list[int]
    chain: list[int]  # the constructed closed walk, in graph indices
    steps: int
    gamma: float
    max_edge_residual: float
    max_sphere_residual: float
    max_curve_distance: float

    def to_json(self) -> dict:
        return {
            "points": self.graph.coords_float().tolist(),
            "cycle": list(self.cycle),
            "chain": list(self.chain),
            "steps": self.steps,
            "gamma": self.gamma,
            "residuals": {
                "edge": self.max_edge_residual,
                "sphere": self.max_sphere_residual,
                "curve_distance": self.max_curve_distance,
            },
        }


def _curve_param_at_distance(curve: SphereCurve, u: np.ndarray, dist: float, start: float = 0.0):
    """First parameter t >= start where |curve(t) - u| crosses ``dist``."""
    s = curve.samples
    d = np.linalg.norm(s - u, axis=1) - dist
    i0 = int(math.ceil(start))
    for i in range(max(i0, 0), len(s) - 1):
        if d[i] == 0:
            return float(i)
        if d[i] * d[i + 1] < 0:
            lo, hi = float(i), float(i + 1)
            flo = d[i]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fm = float(np.linalg.norm(curve.point_at(mid) - u)) - dist
                if fm == 0 or hi - lo < 1e-15:
                    lo = hi = mid
                    break
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            return 0.5 * (lo + hi)
    return None


def _advance(curve: SphereCurve, t: float, p: np.ndarray, step: float, t_end: float) -> float:
    """Parameter of the next point on the curve at chord distance ``step`` from p."""
    lo, hi = t, t
    # march forward to bracket the chord length
    while hi < t_end:
        hi = min(t_end, hi + 1.0)
        if float(np.linalg.norm(curve.point_at(hi) - p)) >= step:
            break
    else:
        return t_end
    if float(np.linalg.norm(curve.point_at(hi) - p)) < step:
        return t_end
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if float(np.linalg.norm(curve.point_at(mid) - p)) < step:
            lo = mid
        else:
            hi = mid
    return lo


def odd_cycle_on_curve(curve: SphereCurve, eps: float, step_fraction: float = STEP_FRACTION,
                       tau: float = EDGE_TOL) -> OddCycleConstruction:
    """Odd cycle of unit edges inside the eps-neighbourhood of a curve.

    From u = curve start to the first curve point v with |u - v| = 1, walk the
    curve in chord steps of at most ``step_fraction * gamma(eps)``; each step
    becomes a 4-edge unit path whose far vertices hug the curve point at unit
    distance. With the closing edge uv the walk has length 4 * steps + 1.
    """
    if not 0 < eps < 1:
        raise GeometryError("eps must lie in (0, 1)")
    sph = curve.sphere
    r = float(sph.radius)
    if not r > MIN_RADIUS:
        raise GeometryError(f"sphere radius {r} must exceed sqrt(1/2)")
    thr = diameter_threshold(r)
    if not curve.diameter > thr:
        raise GeometryError(
            f"curve diameter {curve.diameter:.6f} must exceed sqrt(4r^2-1)/r = {thr:.6f}"
        )
    gamma = reach_radius(eps)
    step = step_fraction * gamma
    u = curve.samples[0]
    t_v = _curve_param_at_distance(curve, u, 1.0)
    if t_v is None:
        raise ConstructionError("no curve point at distance 1 from the start")
    v = curve.point_at(t_v)

    walk = [u]
    t = 0.0
    while float(np.linalg.norm(walk[-1] - v)) > step:
        nt = _advance(curve, t, walk[-1], step, t_v)
        if nt <= t:
            raise ConstructionError("curve walk stalled")
        walk.append(curve.point_at(nt))
        t = nt
    walk.append(v)

    pts: list[np.ndarray] = [walk[0]]
    far_t = t_v
    for a, b in zip(walk, walk[1:]):
        ft = _curve_param_at_distance(curve, a, 1.0, start=max(0.0, far_t - 50))
        if ft is None:
            ft = _curve_param_at_distance(curve, a, 1.0)
        far = curve.point_at(ft) if ft is not None else v
        far_t = ft if ft is not None else far_t
        path = four_step_path(sph, a, b, eps, toward=far, check_reach=True)
        path[-1] = b
        pts.extend(path)

    steps = len(walk) - 1
    chain_len = len(pts)  # 4 * steps + 1 points, closing edge back to pts[0]
    coords = np.vstack(pts)
    dim = coords.shape[1]
    graph = build_udg([FloatPoint(c, dim) for c in coords], tolerance(tau), dedup=False,
                      meta={"eps": eps, "gamma": gamma, "steps": steps})
    chain = list(range(chain_len))
    edges_ok = all(graph.has_edge(chain[i], chain[(i + 1) % chain_len]) for i in range(chain_len))
    if not edges_ok:
        raise ConstructionError("constructed walk is missing a unit edge")
    cycle = find_odd_cycle(graph)
    if cycle is None:
        raise ConstructionError("graph is bipartite; no odd cycle")
    closed = np.vstack([coords, coords[:1]])
    edge_res = float(np.max(np.abs(np.linalg.norm(np.diff(closed, axis=0), axis=1) - 1.0)))
    sph_res = float(np.max(np.abs(np.linalg.norm(coords - sph.center, axis=1) - r)))
    curve_dist = max(curve.distance_to(c) for c in coords)
    if curve_dist >= eps:
        raise ConstructionError(f"construction leaves the eps-neighbourhood ({curve_dist:.3e})")
    return OddCycleConstruction(graph, cycle, chain, steps, gamma, edge_res, sph_res, curve_dist)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PentagonFrame:
    u: FloatPoint
    nu: float
    w: np.ndarray  # shape (5, 6)

    @property
    def side(self) -> float:
        return 2 * self.nu * math.sin(math.pi / 5)

    @property
    def norm(self) -> float:
        """Distance of every w_k from the frame origin: sqrt(|u|^2 + nu^2)."""
        return float(np.linalg.norm(self.w[0]))


def pentagon_offsets(nu: float) -> np.ndarray:
    k = np.arange(1, 6)
    off = np.zeros((5, 3))
    off[:, 0] = nu * np.cos(2 * np.pi * k / 5)
    off[:, 1] = nu * np.sin(2 * np.pi * k / 5)
    return off


def pentagon_points(u, nu: float) -> PentagonFrame:
    """w_k = (u1, u2, u3, nu cos(2 pi k/5), nu sin(2 pi k/5), 0), k = 1..5.

    ``u`` is given in the 6-dimensional equator frame with its last three
    coordinates zero (a 3-vector is padded). Identical displacement blocks make
    |w_{p,k} - w_{q,k}| = |p - q| for every k.
    """
    if not 0 <= nu < 1:
        raise GeometryError("nu must lie in [0, 1)")
    c = u.coords if isinstance(u, FloatPoint) else np.asarray(u, dtype=np.float64)
    if c.shape[0] == 3:
        c = np.concatenate([c, np.zeros(3)])
    if c.shape[0] != 6:
        raise GeometryError("u must be a 3-vector or a 6-vector in the equator frame")
    if np.any(c[3:] != 0):
        raise GeometryError("u must have a zero displacement block")
    w = np.tile(c, (5, 1))
    w[:, 3:] = pentagon_offsets(nu)
    up = u if isinstance(u, FloatPoint) else FloatPoint(c, 3, 3)
    return PentagonFrame(up, float(nu), w)
