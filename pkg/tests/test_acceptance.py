"""The ten acceptance criteria, each timed against its runtime budget.

Every test prints one ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary.
"""
import math
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from _acceptance_log import LINES
from oracles import circumcenter_oracle, circumradius_sq_oracle, dpll, moser_spindle
from slicechroma.coloring import chromatic_number, export_dimacs_cnf, find_odd_cycle, is_odd_cycle, \
    parse_dimacs_cnf, verify_certificate
from slicechroma.geom import Simplex, attached_sphere, inradius, regular_simplex
from slicechroma.rational_slice import pell_pair, pell_solutions, rhombus_gadget, witness_graph
from slicechroma.replayer import LIMIT_RADIUS, isbell_check, isbell_threshold, replay_construction
from slicechroma.sphere_constructions import great_circle_curve, odd_cycle_on_curve, pentagon_points, \
    reach_radius, sphere2
from slicechroma.udg import build_udg, tolerance


def run_criterion(number: int, title: str, budget: float, body):
    t0 = time.perf_counter()
    error = None
    try:
        detail = body()
    except AssertionError as exc:
        error, detail = exc, f"assertion failed: {exc}"
    elapsed = time.perf_counter() - t0
    if error is None and elapsed >= budget:
        error = AssertionError(f"took {elapsed:.2f} s, budget {budget} s")
        detail = str(error)
    status = "PASS" if error is None else "FAIL"
    line = f"{status} criterion {number:2d} {title}: {elapsed:.3f} s (budget {budget:g} s)"
    if detail:
        line += f" | {detail}"
    LINES.append(line)
    print(line)
    if error is not None:
        raise error


def test_criterion_1_pell():
    def body():
        pairs = pell_solutions(10)
        assert len(pairs) == 10
        for p in pairs:
            assert 3 * p.b**2 - p.a**2 == 2
            assert p.a % 2 == 1 and p.b % 2 == 1
        assert all(q.b > p.b for p, q in zip(pairs, pairs[1:]))
        assert all(p.a * q.b - q.a * p.b == -8 for p, q in zip(pairs, pairs[1:]))
        return f"b_9 = {pairs[-1].b}"

    run_criterion(1, "Pell pairs", 1.0, body)


def test_criterion_2_rhombus():
    def body():
        for n in range(1, 6):
            p = pell_pair(n)
            g = rhombus_gadget(p, Fraction(1, p.b**2))
            lengths = g.squared_lengths()
            for name in ("AB", "AC", "BC", "BD", "CD"):
                assert lengths[name] == 1 and isinstance(lengths[name], Fraction), (n, name)
        return "n = 1..5 exact"

    run_criterion(2, "rhombus exactness", 1.0, body)


@pytest.mark.parametrize("n, eps", [(0, Fraction(1)), (1, Fraction(1, 100))])
def test_criterion_3_witness(n, eps):
    def body():
        g = witness_graph(n, eps)
        res = chromatic_number(g)
        assert res.exact and res.chi == 4
        assert verify_certificate(g, res.upper) and verify_certificate(g, res.lower)
        return f"|V| = {g.n}, chi = {res.chi}, lower = {res.lower.kind}"

    run_criterion(3, f"witness_graph({n}, {eps})", 60.0, body)


def test_criterion_4_moser():
    def body():
        g = build_udg(moser_spindle(), tolerance())
        assert len(g.edges) == 11
        adj = [(i, j) for i, j in g.edges]
        proper = sum(all(c[i] != c[j] for i, j in adj) for c in product(range(3), repeat=7))
        assert proper == 0
        res = chromatic_number(g)
        assert res.chi == 4 and verify_certificate(g, res.upper) and verify_certificate(g, res.lower)
        nvars, clauses = parse_dimacs_cnf(export_dimacs_cnf(g, 3))
        assert dpll(nvars, clauses) is None
        assert dpll(*parse_dimacs_cnf(export_dimacs_cnf(g, 4))) is not None
        return "3^7 assignments: 0 proper; CNF c=3 UNSAT"

    run_criterion(4, "Moser spindle", 5.0, body)


def test_criterion_5_geometry():
    def body():
        for n in range(1, 7):
            r = inradius(regular_simplex(n, edge_sq=2 * n * (n + 1)))
            assert r == 1 and isinstance(r, Fraction), n
        rng = np.random.default_rng(5)
        worst, done = 0.0, 0
        while done < 100:
            verts = rng.standard_normal((4, 6)) * rng.uniform(0.05, 0.4)
            r2 = circumradius_sq_oracle(verts)
            if r2 >= 1:
                continue
            sph = attached_sphere(Simplex(verts), 6)
            expected = math.sqrt(1 - r2)
            # sampled points must be unit distance from every vertex and at the
            # expected radius from the independently computed circumcentre
            pts = sph.sample(10, rng)
            unit = np.abs(np.linalg.norm(pts[:, None] - verts[None], axis=2) - 1)
            rad = np.abs(np.linalg.norm(pts - circumcenter_oracle(verts), axis=1) - expected)
            worst = max(worst, abs(float(sph.radius) - expected), float(unit.max()), float(rad.max()))
            done += 1
        assert worst < 1e-10
        return f"max radius/distance error {worst:.1e}"

    run_criterion(5, "geometry identities", 60.0, body)


def test_criterion_6_stability():
    from slicechroma.stability import fit_scaling_exponents, max_pair_bound_ok

    def body():
        fit = fit_scaling_exponents(1.0, 0.5, [0.1 * 2.0**-i for i in range(6)], 200, seed=0)
        assert 1.7 <= fit.sV2 <= 2.3, fit.slopes
        assert 1.7 <= fit.sR2 <= 2.3, fit.slopes
        assert 0.8 <= fit.sPhi <= 1.2, fit.slopes
        assert max_pair_bound_ok(fit), fit.max_pair_ratio
        return (f"sV2 = {fit.sV2:.3f}, sR2 = {fit.sR2:.3f}, sPhi = {fit.sPhi:.3f}, "
                f"max |dd|/h^2 = {fit.max_pair_ratio:.2f}")

    run_criterion(6, "stability exponents", 60.0, body)


def test_criterion_7_odd_cycle():
    def body():
        eps = 0.2
        out = odd_cycle_on_curve(great_circle_curve(sphere2(0.75)), eps)
        pts = out.graph.coords_float()
        lengths = [np.linalg.norm(pts[i] - pts[j]) for i, j in out.graph.edges]
        assert max(abs(x - 1) for x in lengths) <= 1e-9
        cyc = find_odd_cycle(out.graph)
        assert cyc is not None and is_odd_cycle(out.graph, cyc)
        gamma = math.sin(eps / 2) * math.sin(eps / 4)
        assert abs(reach_radius(eps) - gamma) <= 1e-12 and abs(out.gamma - gamma) <= 1e-12
        return f"{out.graph.n} vertices, odd cycle of length {len(cyc)}"

    run_criterion(7, "odd cycle on S^2_0.75", 30.0, body)


def test_criterion_8_pentagon():
    def body():
        rng = np.random.default_rng(8)
        R = LIMIT_RADIUS
        worst = 0.0
        for _ in range(100):
            p = rng.standard_normal(3)
            p *= R / np.linalg.norm(p)
            # q on the same sphere at chord length 1 from p
            t = rng.standard_normal(3)
            t -= (t @ p) / (p @ p) * p
            t /= np.linalg.norm(t)
            theta = 2 * math.asin(1 / (2 * R))
            q = math.cos(theta) * p + math.sin(theta) * R * t
            assert abs(np.linalg.norm(p - q) - 1) < 1e-14
            nu = rng.uniform(0, 0.5)
            wp, wq = pentagon_points(p, nu).w, pentagon_points(q, nu).w
            worst = max(worst, float(np.max(np.abs(np.linalg.norm(wp - wq, axis=1) - 1))))
        assert worst <= 1e-12
        return f"max error {worst:.1e}"

    run_criterion(8, "pentagon distance preservation", 1.0, body)


def test_criterion_9_replayer():
    def body():
        gaps = []
        for eps in (1e-2, 1e-3, 1e-4):
            rep = replay_construction(eps, 0.4 * eps)
            assert rep.passed, (eps, rep.failures)
            assert rep.equator_in_slice, eps
            gaps.append(rep.gap)
        assert gaps[0] > gaps[1] > gaps[2], gaps
        assert gaps[1] < 0.05, gaps
        return "gaps " + ", ".join(f"{g:.2e}" for g in gaps)

    run_criterion(9, "replayer limit", 60.0, body)


def test_criterion_10_isbell():
    def body():
        rep = isbell_check(0.1, 100_000, seed=0)
        out = rep.to_json()
        assert abs(rep.s - 0.45) < 1e-15
        assert out["monochromatic"] == 0 and out["pairs"] == 100_000
        assert abs(out["threshold"] - (1 - 4 / math.sqrt(21))) < 1e-15
        assert out["threshold"] < 0.13 and isbell_threshold() == out["threshold"]
        return f"0 / 100000 monochromatic, threshold {out['threshold']:.6f}"

    run_criterion(10, "Isbell band", 10.0, body)
