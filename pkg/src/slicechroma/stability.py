"""Monte-Carlo check of how volume, circumradius and hull angle react to
small perturbations orthogonal to R^3.

Four points y_i on a 2-sphere of radius r0 in P = R^3 are lifted to
z_i = (y_i, o_i) with slab offsets |o_i| <= h. The differences
|V0^2 - V^2|, |2r^2 - 2r0^2| and the angle between P and the affine hull of
the z_i should scale like h^2, h^2 and h.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from slicechroma.geom import (
    DegenerateSimplexError,
    GeometryError,
    Simplex,
    circumsphere,
    q11_circumradius_sq,
    simplex_volume_sq,
    subspace_angle,
)

MIN_VOLUME = 1e-12
# every vertex of a base simplex sits at least ALTITUDE_FACTOR * delta from the
# opposite face; without it thin simplices stay pre-asymptotic for h ~ 0.1
ALTITUDE_FACTOR = 0.5
REJECTION_BUDGET = 10_000
R2_CROSSCHECK_RTOL = 1e-8


class RejectionBudgetError(GeometryError):
    pass


@dataclass(frozen=True, eq=False)
class PerturbationSample:
    T0: Simplex
    T: Simplex
    delta: float
    h: float
    seed: int
    offsets: np.ndarray  # (4, ambient_k)

    @property
    def base_points(self) -> np.ndarray:
        return self.T0.as_float_array()[:, :3]


@dataclass(frozen=True)
class StabilityMeasurement:
    dV2: float
    dR2: float
    dPhi: float
    max_pair_dev: float  # max |d_ij^2 - d0_ij^2|
    identity_residual: float


def _random_sphere_points(rng: np.random.Generator, count: int, r0: float) -> np.ndarray:
    x = rng.standard_normal((count, 3))
    return r0 * x / np.linalg.norm(x, axis=1, keepdims=True)


def min_altitude(y: np.ndarray) -> float:
    """Smallest vertex-to-opposite-face distance of a tetrahedron in R^3."""
    vol = abs(np.linalg.det(y[1:] - y[0])) / 6
    out = np.inf
    for i in range(4):
        f = np.delete(y, i, axis=0)
        area = np.linalg.norm(np.cross(f[1] - f[0], f[2] - f[0])) / 2
        out = min(out, 3 * vol / area if area > 0 else 0.0)
    return float(out)


def _base_configuration(rng: np.random.Generator, r0: float, delta: float,
                        altitude_factor: float = ALTITUDE_FACTOR) -> np.ndarray:
    floor = altitude_factor * delta
    for _ in range(REJECTION_BUDGET):
        y = _random_sphere_points(rng, 4, r0)
        d = np.linalg.norm(y[:, None, :] - y[None, :, :], axis=2)
        if np.min(d[np.triu_indices(4, 1)]) < delta:
            continue
        vol = abs(np.linalg.det(y[1:] - y[0])) / 6
        if vol < MIN_VOLUME or min_altitude(y) < floor:
            continue
        return y
    raise RejectionBudgetError(
        f"no delta-separated quadruple with altitudes >= {floor:.3g} found on S^2({r0}) (delta={delta})"
    )


def _ball_offsets(rng: np.random.Generator, count: int, k: int) -> np.ndarray:
    """Uniform points of the closed unit ball in R^k."""
    x = rng.standard_normal((count, k))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rng.random((count, 1)) ** (1.0 / k)


def sample_perturbation(r0: float, delta: float, h: float, seed: int, ambient_k: int = 6) -> PerturbationSample:
    """Draw y_i and unit-ball offsets from ``seed``; offsets are scaled by h.

    The base points and offset directions depend only on the seed, so one seed
    traced over an h-grid is the same configuration at shrinking scale.
    """
    if delta > 2 * r0:
        raise RejectionBudgetError(f"delta={delta} exceeds the sphere diameter {2 * r0}")
    if not 0 <= h <= delta <= 1:
        raise GeometryError(f"need 0 <= h <= delta <= 1 (h={h}, delta={delta})")
    if ambient_k < 1:
        raise GeometryError("ambient_k must be >= 1")
    rng = np.random.default_rng(seed)
    y = _base_configuration(rng, r0, delta)
    off = h * _ball_offsets(rng, 4, ambient_k)
    y_full = np.hstack([y, np.zeros((4, ambient_k))])
    z = np.hstack([y, off])
    sample = PerturbationSample(Simplex(y_full, n_main=3), Simplex(z, n_main=3), delta, h, seed, off)
    assert np.all(np.linalg.norm(z - y_full, axis=1) <= h * (1 + 1e-12))
    return sample


def measure_stability(s: PerturbationSample) -> StabilityMeasurement:
    v0, v = float(simplex_volume_sq(s.T0)), float(simplex_volume_sq(s.T))
    if v0 < MIN_VOLUME**2 or v < MIN_VOLUME**2:
        raise DegenerateSimplexError("perturbation sample is degenerate")
    r0sq = circumsphere(s.T0).radius_sq
    rsq = circumsphere(s.T).radius_sq
    dR2 = abs(2 * float(rsq) - 2 * float(r0sq))
    dR2_q11 = abs(2 * float(q11_circumradius_sq(s.T)) - 2 * float(q11_circumradius_sq(s.T0)))
    if abs(dR2 - dR2_q11) > R2_CROSSCHECK_RTOL * max(1.0, float(r0sq)):
        raise GeometryError(f"circumradius cross-check failed: {dR2} vs {dR2_q11}")

    z = s.T.as_float_array()
    p_basis = np.eye(z.shape[1])[:3]
    dPhi = subspace_angle(z[1:] - z[0], p_basis) if s.h > 0 else 0.0

    d0 = np.asarray(s.T0.sqdist, dtype=np.float64)
    d = np.asarray(s.T.sqdist, dtype=np.float64)
    o = s.offsets
    gram = o @ o.T
    norms = np.diag(gram)
    predicted = norms[:, None] + norms[None, :] - 2 * gram
    np.fill_diagonal(predicted, 0.0)
    dev = d - d0
    return StabilityMeasurement(
        dV2=abs(v0 - v),
        dR2=dR2,
        dPhi=float(dPhi),
        max_pair_dev=float(np.max(np.abs(dev))),
        identity_residual=float(np.max(np.abs(dev - predicted))),
    )


# ---------------------------------------------------------------------------


@dataclass
class ScalingFit:
    slopes: dict[str, float]
    ci: dict[str, tuple[float, float]]
    envelopes: dict[str, list[float]]
    h_grid: list[float]
    rows: list[tuple[float, int, float, float, float]]
    max_pair_ratio: float  # max over samples of |d_ij^2 - d0_ij^2| / h^2

    @property
    def sV2(self) -> float:
        return self.slopes["dV2"]

    @property
    def sR2(self) -> float:
        return self.slopes["dR2"]

    @property
    def sPhi(self) -> float:
        return self.slopes["dPhi"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["h", "trial", "dV2", "dR2", "dPhi"])
        for h, t, a, b, c in self.rows:
            w.writerow([repr(h), t, repr(a), repr(b), repr(c)])
        return buf.getvalue()


def trial_seeds(seed: int, trials: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in ss.spawn(trials)]


def _run_trial(args):
    r0, delta, h_grid, tseed, k = args
    out = []
    for h in h_grid:
        m = measure_stability(sample_perturbation(r0, delta, h, tseed, k))
        out.append(m)
    return out


def fit_scaling_exponents(r0: float = 1.0, delta: float = 0.5, h_grid: Sequence[float] | None = None,
                          trials_per_h: int = 200, seed: int = 0, ambient_k: int = 6,
                          threads: int = 1, confidence: float = 0.95) -> ScalingFit:
    """Log-log least-squares slopes of the per-h maximum of each measurement."""
    if h_grid is None:
        h_grid = [0.1 * 2.0**-i for i in range(6)]
    hs = [float(h) for h in h_grid]
    if len(hs) < 5:
        raise ValueError("h_grid needs at least 5 points")
    if any(h <= 0 or h > delta for h in hs):
        raise ValueError("every h must lie in (0, delta]")
    ratios = [hs[i + 1] / hs[i] for i in range(len(hs) - 1)]
    if not np.allclose(ratios, ratios[0], rtol=1e-9):
        raise ValueError("h_grid must be geometric")
    seeds = trial_seeds(seed, trials_per_h)
    jobs = [(r0, delta, hs, s, ambient_k) for s in seeds]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_run_trial, jobs))
    else:
        results = [_run_trial(j) for j in jobs]

    names = ("dV2", "dR2", "dPhi")
    env = {n: [0.0] * len(hs) for n in names}
    rows = []
    worst = 0.0
    for t, per_h in enumerate(results):
        for i, m in enumerate(per_h):
            for n in names:
                env[n][i] = max(env[n][i], getattr(m, n))
            worst = max(worst, m.max_pair_dev / hs[i] ** 2)
    for i, h in enumerate(hs):
        for t, per_h in enumerate(results):
            m = per_h[i]
            rows.append((h, t, m.dV2, m.dR2, m.dPhi))

    slopes, ci = {}, {}
    logh = np.log(hs)
    tq = stats.t.ppf(0.5 + confidence / 2, len(hs) - 2)
    for n in names:
        vals = np.asarray(env[n])
        if np.any(vals <= 0):
            raise GeometryError(f"degenerate fit: {n} envelope has zero entries")
        fit = stats.linregress(logh, np.log(vals))
        slopes[n] = float(fit.slope)
        ci[n] = (float(fit.slope - tq * fit.stderr), float(fit.slope + tq * fit.stderr))
    return ScalingFit(slopes, ci, env, hs, rows, worst)


def max_pair_bound_ok(fit: ScalingFit) -> bool:
    """|d_ij^2 - d0_ij^2| <= 4 h^2 held in every sample."""
    return fit.max_pair_ratio <= 4.0 + 1e-9
