"""JSON artifacts and DIMACS input for graphs, certificates and reports.

Rationals are written as "p/q" strings (integers as "p") so exact data
round-trips; float coordinates are plain JSON numbers, which Python writes
with repr precision.
"""
from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction
from typing import Any

import numpy as np

from slicechroma.coloring import ChromaticResult
from slicechroma.geom import ExactPoint, FloatPoint, SliceSpec, fraction_str, to_fraction
from slicechroma.udg import Graph, Predicate, UnitDistanceGraph

GRAPH_FORMAT = "slicechroma.graph"
FORMAT_VERSION = 1


class SchemaError(ValueError):
    def __init__(self, msg: str, path: str = "<input>", line: int | None = None):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {msg}")


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def _line_of(text: str, needle: str) -> int | None:
    idx = text.find(needle)
    return None if idx < 0 else text.count("\n", 0, idx) + 1


# ---------------------------------------------------------------------------
# graphs


def graph_to_json(g: Graph, seed: int | None = None) -> dict:
    out: dict = {"format": GRAPH_FORMAT, "version": FORMAT_VERSION}
    if isinstance(g, UnitDistanceGraph):
        out["backing"] = g.backing
        out["dim_main"] = g.points[0].n if g.points and isinstance(g.points[0], ExactPoint) else (
            g.points[0].dim_main if g.points else 0)
        if g.backing == "exact":
            out["points"] = [[fraction_str(c) for c in p.coords] for p in g.points]
        else:
            out["points"] = [[float(c) for c in p.coords] for p in g.points]
        out["predicate"] = {"kind": g.predicate.kind, "tau": g.predicate.tau}
        out["slice"] = None if g.slice is None else {
            "n": g.slice.n, "k": g.slice.k, "eps": fraction_str(to_fraction(g.slice.eps))
            if not isinstance(g.slice.eps, float) else g.slice.eps}
        out["meta"] = g.meta
    else:
        out["vertices"] = g.n
    out["edges"] = [list(e) for e in g.edges]
    if seed is not None:
        out["seed"] = seed
    return out


def _parse_rational(x, path: str, where: str, text: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"{where}: expected a rational string 'p/q', got {x!r}", path, _line_of(text, where))
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: bad rational {x!r}", path, _line_of(text, str(x))) from None


def graph_from_json(text: str, path: str = "<input>") -> Graph:
    if not text.strip():
        raise SchemaError("empty input; expected a graph JSON object or DIMACS edge list", path, 1)
    if text.lstrip().startswith(("p ", "c ", "c\n", "e ")):
        return parse_dimacs_graph(text, path)
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    if not isinstance(d, dict):
        raise SchemaError("top level must be an object", path, 1)
    if d.get("format") != GRAPH_FORMAT:
        raise SchemaError(f"missing or wrong 'format' (expected {GRAPH_FORMAT!r})", path, _line_of(text, '"format"') or 1)
    edges = d.get("edges")
    if not isinstance(edges, list):
        raise SchemaError("'edges' must be a list of [i, j] pairs", path, _line_of(text, '"edges"'))
    for k, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in e)):
            raise SchemaError(f"edges[{k}] must be a pair of integers", path, _line_of(text, '"edges"'))
    if "points" in d:
        pts_raw = d["points"]
        if not isinstance(pts_raw, list) or not pts_raw:
            raise SchemaError("'points' must be a non-empty list", path, _line_of(text, '"points"'))
        backing = d.get("backing", "exact")
        dim_main = d.get("dim_main")
        width = len(pts_raw[0]) if isinstance(pts_raw[0], list) else -1
        if not isinstance(dim_main, int) or not 0 <= dim_main <= width:
            raise SchemaError("'dim_main' must be an integer within the point dimension", path,
                              _line_of(text, '"dim_main"') or _line_of(text, '"points"'))
        pts = []
        for i, row in enumerate(pts_raw):
            if not isinstance(row, list) or len(row) != width:
                raise SchemaError(f"points[{i}] has the wrong dimension", path, _line_of(text, '"points"'))
            if backing == "exact":
                coords = [_parse_rational(c, path, f"points[{i}]", text) for c in row]
                pts.append(ExactPoint(tuple(coords[:dim_main]), tuple(coords[dim_main:])))
            elif backing == "float":
                if not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in row):
                    raise SchemaError(f"points[{i}] must hold numbers", path, _line_of(text, '"points"'))
                pts.append(FloatPoint(np.array(row, dtype=np.float64), dim_main, width - dim_main))
            else:
                raise SchemaError(f"unknown backing {backing!r}", path, _line_of(text, '"backing"'))
        pred = d.get("predicate") or {"kind": "exact", "tau": 0.0}
        try:
            predicate = Predicate(pred.get("kind", "exact"), float(pred.get("tau", 0.0)))
        except (ValueError, AttributeError) as exc:
            raise SchemaError(f"bad predicate: {exc}", path, _line_of(text, '"predicate"')) from None
        sl = d.get("slice")
        spec = None
        if sl is not None:
            eps = sl["eps"]
            spec = SliceSpec(int(sl["n"]), int(sl["k"]), Fraction(eps) if isinstance(eps, str) else eps)
        n = len(pts)
        try:
            g = UnitDistanceGraph(pts, [tuple(e) for e in edges], predicate, spec, d.get("meta") or {})
        except ValueError as exc:
            raise SchemaError(str(exc), path, _line_of(text, '"edges"')) from None
        assert g.n == n
        return g
    nv = d.get("vertices")
    if not isinstance(nv, int) or nv < 1:
        raise SchemaError("graph needs 'points' or a positive 'vertices' count", path, _line_of(text, '"vertices"') or 1)
    try:
        return Graph(nv, [tuple(e) for e in edges])
    except ValueError as exc:
        raise SchemaError(str(exc), path, _line_of(text, '"edges"')) from None


_P_LINE = re.compile(r"^p\s+(edge|col)\s+(\d+)\s+(\d+)\s*$")


def parse_dimacs_graph(text: str, path: str = "<input>") -> Graph:
    """DIMACS ``p edge V E`` / ``e i j`` (1-indexed) edge lists."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            m = _P_LINE.match(line)
            if not m or n is not None:
                raise SchemaError("bad or repeated problem line", path, lineno)
            n = int(m.group(2))
            continue
        if line.startswith("e"):
            parts = line.split()
            if n is None or len(parts) != 3 or not all(p.isdigit() for p in parts[1:]):
                raise SchemaError("malformed edge line", path, lineno)
            i, j = int(parts[1]) - 1, int(parts[2]) - 1
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise SchemaError(f"edge ({i + 1}, {j + 1}) is invalid", path, lineno)
            edges.append((i, j))
            continue
        raise SchemaError(f"unexpected line {line!r}", path, lineno)
    if n is None:
        raise SchemaError("missing 'p edge' line", path, 1)
    if n < 1:
        raise SchemaError("graph has no vertices", path, 1)
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# results


def chromatic_to_json(res: ChromaticResult, seed: int | None = None) -> dict:
    out = {
        "chi": res.chi,
        "status": res.status,
        "lower_bound": res.lower_bound,
        "upper_bound": res.upper_bound,
        "upper": res.upper.to_json(),
        "lower": res.lower.to_json(),
        "nodes": res.nodes,
    }
    if seed is not None:
        out["seed"] = seed
    return out
