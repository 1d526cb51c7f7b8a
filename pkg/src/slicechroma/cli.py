"""``slice-chroma`` command line.

Exit codes: 0 success, 1 error (bad input, failed check), 2 inconclusive
solver budget.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from slicechroma import coloring, formats
from slicechroma.geom import (
    EmptyAttachedSphereError,
    GeometryError,
    Simplex,
    attached_sphere_points,
    cayley_menger_det,
    circumsphere,
    fraction_str,
    inradius,
    q11_circumradius_sq,
    regular_simplex,
    simplex_volume_sq,
)
from slicechroma.rational_slice import bezout_combination, pell_solutions, witness_graph

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 3 or 1/100, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else formats.dumps(payload)
    out = getattr(args, "out", None)
    if out:
        formats.atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _read_input(path: str | None) -> tuple[str, str]:
    if path is None or path == "-":
        return sys.stdin.read(), "<stdin>"
    with open(path, encoding="utf-8") as fh:
        return fh.read(), path


# ---------------------------------------------------------------------------


def cmd_pell(args) -> int:
    pairs = pell_solutions(args.count)
    if args.json:
        _emit(args, {"pairs": [[p.a, p.b] for p in pairs], "seed": args.seed})
    else:
        _emit(args, "".join(f"({p.a},{p.b})\n" for p in pairs))
    return EXIT_OK


def cmd_witness(args) -> int:
    g = witness_graph(args.n, args.eps)
    _emit(args, formats.graph_to_json(g, seed=args.seed))
    return EXIT_OK


def cmd_chroma(args) -> int:
    text, path = _read_input(args.input)
    g = formats.graph_from_json(text, path)
    res = coloring.chromatic_number(g, max_nodes=args.max_nodes, time_limit=args.time_limit)
    if args.out:
        formats.atomic_write(args.out, formats.dumps(formats.chromatic_to_json(res, seed=args.seed)))
    if res.exact:
        print(f"chi = {res.chi}")
    else:
        print(f"chi inconclusive: {res.lower_bound} <= chi <= {res.upper_bound}")
    print(f"upper: {res.upper.kind} ({res.upper.colors_used} colours)")
    print(f"lower: {res.lower.kind} ({res.lower.colors_used} colours)")
    if args.verbose and not args.out:
        sys.stdout.write(formats.dumps(formats.chromatic_to_json(res, seed=args.seed)))
    return EXIT_OK if res.exact else EXIT_INCONCLUSIVE


def cmd_export_cnf(args) -> int:
    text, path = _read_input(args.input)
    g = formats.graph_from_json(text, path)
    _emit(args, coloring.export_dimacs_cnf(g, args.colors))
    return EXIT_OK


def _num(x):
    return fraction_str(x) if isinstance(x, Fraction) else float(x)


def cmd_geom(args) -> int:
    if args.regular is not None:
        if args.edge_sq is not None:
            s = regular_simplex(args.regular, edge_sq=args.edge_sq)
        else:
            s = regular_simplex(args.regular, edge=args.edge if args.edge is not None else 1.0)
    else:
        text, path = _read_input(args.points)
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise formats.SchemaError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
        if not isinstance(raw, list) or not raw:
            raise formats.SchemaError("expected a non-empty list of points", path, 1)
        exact = all(isinstance(c, (int, str)) and not isinstance(c, bool) for row in raw for c in row)
        rows = [[Fraction(c) for c in row] for row in raw] if exact else raw
        s = Simplex(rows)
    out = {
        "vertices": s.count,
        "cm_det": _num(cayley_menger_det(s)),
        "volume_sq": _num(simplex_volume_sq(s)),
    }
    try:
        sph = circumsphere(s)
        out["circumradius_sq"] = _num(sph.radius_sq)
        out["q11_circumradius_sq"] = _num(q11_circumradius_sq(s))
        out["inradius"] = _num(inradius(s))
    except GeometryError as exc:
        out["degenerate"] = str(exc)
    if args.ambient and "circumradius_sq" in out:
        try:
            att = attached_sphere_points(s.as_float_array(), args.ambient)
            out["attached_radius"] = float(att.radius)
            out["attached_dim"] = att.sphere_dim
        except EmptyAttachedSphereError as exc:
            out["attached_radius"] = None
            out["attached_empty"] = str(exc)
    out["seed"] = args.seed
    _emit(args, out)
    return EXIT_OK


def cmd_stability(args) -> int:
    from slicechroma.stability import fit_scaling_exponents, max_pair_bound_ok

    grid = args.h_grid or [0.1 * 2.0**-i for i in range(6)]
    fit = fit_scaling_exponents(args.r0, args.delta, grid, args.trials, args.seed, threads=args.threads)
    if args.csv:
        formats.atomic_write(args.csv, fit.to_csv())
    report = {
        "slopes": fit.slopes,
        "ci95": {k: list(v) for k, v in fit.ci.items()},
        "envelopes": fit.envelopes,
        "h_grid": fit.h_grid,
        "max_pair_dev_over_h2": fit.max_pair_ratio,
        "pair_bound_4h2": max_pair_bound_ok(fit),
        "seed": args.seed,
    }
    _emit(args, report)
    return EXIT_OK if max_pair_bound_ok(fit) else EXIT_ERROR


def cmd_replay(args) -> int:
    from slicechroma.replayer import DEFAULT_DELTA, replay_construction

    eps1 = args.eps1 if args.eps1 is not None else 0.4 * args.eps
    delta = args.delta if args.delta is not None else DEFAULT_DELTA
    rep = replay_construction(args.eps, eps1, delta, args.seed, args.nu)
    out = rep.to_json()
    out["seed"] = args.seed
    _emit(args, out)
    return EXIT_OK if rep.passed else EXIT_ERROR


def cmd_isbell(args) -> int:
    from slicechroma.replayer import isbell_check

    rep = isbell_check(args.eps, args.pairs, args.seed)
    _emit(args, rep.to_json())
    return EXIT_OK if rep.passed else EXIT_ERROR


def cmd_bezout(args) -> int:
    x, y = bezout_combination(args.n)
    _emit(args, {"n": args.n, "x": x, "y": y, "vertices": 1 + 3 * (abs(x) + abs(y))})
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed recorded in every artifact")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", "-o", help="write the artifact here (atomically) instead of stdout")
    common.add_argument("--verbose", "-v", action="store_true")

    p = argparse.ArgumentParser(prog="slice-chroma", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pell", parents=[common], help="solutions of 3b^2 - a^2 = 2")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_pell)

    s = sub.add_parser("bezout", parents=[common], help="integer combination of consecutive rhombus steps")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_bezout)

    s = sub.add_parser("witness", parents=[common], help="rational 4-chromatic witness graph as JSON")
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--eps", type=_rational, default=Fraction(1))
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("chroma", parents=[common], help="chromatic number with certificates")
    s.add_argument("input", nargs="?", help="graph JSON or DIMACS file (default stdin)")
    s.add_argument("--max-nodes", type=int, default=coloring.DEFAULT_MAX_NODES)
    s.add_argument("--time-limit", type=float, default=coloring.DEFAULT_TIME_LIMIT)
    s.set_defaults(func=cmd_chroma)

    s = sub.add_parser("export-cnf", parents=[common], help="DIMACS CNF of c-colourability")
    s.add_argument("input", nargs="?")
    s.add_argument("--colors", "-c", type=int, required=True)
    s.set_defaults(func=cmd_export_cnf)

    s = sub.add_parser("geom", parents=[common], help="Cayley-Menger quantities of a simplex")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--regular", type=int, metavar="N", help="regular N-simplex")
    g.add_argument("--points", metavar="FILE", help="JSON list of vertices ('p/q' strings are exact)")
    s.add_argument("--edge", type=float)
    s.add_argument("--edge-sq", type=_rational)
    s.add_argument("--ambient", type=int, help="also report the attached sphere in R^AMBIENT")
    s.set_defaults(func=cmd_geom)

    s = sub.add_parser("stability", parents=[common], help="scaling exponents under orthogonal perturbation")
    s.add_argument("--r0", type=float, default=1.0)
    s.add_argument("--delta", type=float, default=0.5)
    s.add_argument("--h-grid", type=_float_list, help="comma-separated geometric grid (default 0.1*2^-i, i=0..5)")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--csv", help="per-sample rows: h, trial, dV2, dR2, dPhi")
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("replay", parents=[common], help="numeric replay of the slice construction")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--eps1", type=float)
    s.add_argument("--delta", type=float, help="packing separation in units of eps1")
    s.add_argument("--nu", type=float)
    s.set_defaults(func=cmd_replay)

    s = sub.add_parser("isbell-check", parents=[common], help="sample the Isbell 7-colouring band")
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--pairs", type=int, default=100_000)
    s.set_defaults(func=cmd_isbell)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except formats.SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (GeometryError, coloring.ColoringError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

