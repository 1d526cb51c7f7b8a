"""Exact chromatic numbers with checkable certificates.

Upper bounds are proper colourings. Lower bounds are, in order of preference,
a clique, an odd cycle, or a refutation transcript for (chi - 1) colours. A
transcript lists forced merges (two non-adjacent vertices that share a
(k-1)-clique of common neighbours must receive the same colour in every
k-colouring), followed either by a (k+1)-clique in the merged graph or by an
exhaustive DSATUR search over the merged graph. Both parts replay
deterministically in :func:`verify_certificate`.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from slicechroma.udg import Graph

DEFAULT_MAX_NODES = 10**8
DEFAULT_TIME_LIMIT = 60.0


class ColoringError(ValueError):
    pass


@dataclass
class ColoringCertificate:
    kind: str  # proper_coloring | clique_witness | odd_cycle_witness | exhaustive_unsat
    colors: dict[int, int] | None = None
    witness_vertices: tuple[int, ...] | None = None
    colors_used: int = 0
    transcript: dict | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "colors_used": self.colors_used}
        if self.colors is not None:
            out["colors"] = {str(v): c for v, c in sorted(self.colors.items())}
        if self.witness_vertices is not None:
            out["witness_vertices"] = list(self.witness_vertices)
        if self.transcript is not None:
            out["transcript"] = self.transcript
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> "ColoringCertificate":
        colors = d.get("colors")
        wv = d.get("witness_vertices")
        return cls(
            kind=d["kind"],
            colors=None if colors is None else {int(k): int(v) for k, v in colors.items()},
            witness_vertices=None if wv is None else tuple(int(v) for v in wv),
            colors_used=int(d.get("colors_used", 0)),
            transcript=d.get("transcript"),
        )


@dataclass
class ChromaticResult:
    chi: int | None
    lower_bound: int
    upper_bound: int
    upper: ColoringCertificate
    lower: ColoringCertificate
    status: str  # exact | inconclusive
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def __iter__(self):
        return iter((self.chi, self.upper, self.lower))


# ---------------------------------------------------------------------------
# basic checks


def verify_coloring(g: Graph, colors: Mapping[int, int] | Sequence[int]) -> bool:
    """True iff no edge is monochromatic. Every vertex must have a colour."""
    if isinstance(colors, Mapping):
        missing = [v for v in range(g.n) if v not in colors]
        if missing:
            raise ColoringError(f"no colour for vertex {missing[0]}")
        col = colors
    else:
        if len(colors) < g.n:
            raise ColoringError(f"no colour for vertex {len(colors)}")
        col = colors
    return all(col[i] != col[j] for i, j in g.edges)


def is_clique(g: Graph, vertices: Sequence[int]) -> bool:
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return False
    return all(g.has_edge(a, b) for a, b in combinations(vs, 2))


def is_odd_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    c = list(cycle)
    if len(c) < 3 or len(c) % 2 == 0 or len(set(c)) != len(c):
        return False
    return all(g.has_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def find_odd_cycle(g: Graph) -> list[int] | None:
    """An odd cycle (distinct vertices, closing edge implied), or None if bipartite."""
    adj = g.adjacency
    parent = [-1] * g.n
    depth = [-1] * g.n
    for root in range(g.n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if depth[w] < 0:
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif depth[w] == depth[u] and w != u:
                    return _cycle_through(u, w, parent, depth)
    return None


def _cycle_through(u: int, w: int, parent: list[int], depth: list[int]) -> list[int]:
    left, right = [u], [w]
    a, b = u, w
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    # left ends at the common ancestor; right repeats it
    return left + right[-2::-1]


# ---------------------------------------------------------------------------
# heuristics


def dsatur_coloring(g: Graph) -> list[int]:
    """Greedy DSATUR: max saturation, then max degree, then lowest index."""
    n = g.n
    adj = g.adjacency
    color = [-1] * n
    neigh_colors: list[set[int]] = [set() for _ in range(n)]
    deg = [len(a) for a in adj]
    for _ in range(n):
        best = -1
        key = None
        for v in range(n):
            if color[v] >= 0:
                continue
            k = (len(neigh_colors[v]), deg[v], -v)
            if key is None or k > key:
                key, best = k, v
        c = 0
        while c in neigh_colors[best]:
            c += 1
        color[best] = c
        for w in adj[best]:
            neigh_colors[w].add(c)
    return color


def max_clique(g: Graph, max_nodes: int = 10**6) -> list[int]:
    """Maximum clique by branch and bound with a greedy-colouring bound."""
    adj = g.adjacency
    best: list[int] = []
    nodes = 0

    def colour_bound(cand: list[int]) -> list[tuple[int, int]]:
        classes: list[list[int]] = []
        out = []
        for v in cand:
            for ci, cls in enumerate(classes):
                if not any(u in adj[v] for u in cls):
                    cls.append(v)
                    out.append((v, ci + 1))
                    break
            else:
                classes.append([v])
                out.append((v, len(classes)))
        return sorted(out, key=lambda t: t[1])

    def expand(clique: list[int], cand: list[int]):
        nonlocal best, nodes
        nodes += 1
        if nodes > max_nodes:
            return
        ordered = colour_bound(cand)
        while ordered:
            v, bound = ordered.pop()
            if len(clique) + bound <= len(best):
                return
            new_clique = clique + [v]
            new_cand = [u for u, _ in ordered if u in adj[v]]
            if not new_cand:
                if len(new_clique) > len(best):
                    best = new_clique
            else:
                expand(new_clique, new_cand)

    order = sorted(range(g.n), key=lambda v: (-len(adj[v]), v))
    expand([], order)
    return sorted(best)


# ---------------------------------------------------------------------------
# forced-merge refutation


class _Merged:
    """Union-find over vertices with class-level adjacency."""

    def __init__(self, g: Graph):
        self.parent = list(range(g.n))
        self.nbrs: dict[int, set[int]] = {v: set(g.adjacency[v]) for v in range(g.n)}

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def adjacent(self, a: int, b: int) -> bool:
        return self.find(b) in self.nbrs[self.find(a)]

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        keep, gone = min(ra, rb), max(ra, rb)
        self.parent[gone] = keep
        gone_nbrs = self.nbrs.pop(gone)
        for w in gone_nbrs:
            s = self.nbrs[w]
            s.discard(gone)
            s.add(keep)
        self.nbrs[keep] |= gone_nbrs
        return keep

    def classes(self) -> list[int]:
        return sorted(self.nbrs)


def _cliques_of_size(nbrs: dict[int, set[int]], size: int, limit: int):
    """Yield cliques (sorted tuples) of the given size, at most ``limit`` of them."""
    count = 0

    def rec(clique: list[int], cand: list[int]):
        nonlocal count
        if count >= limit:
            return
        if len(clique) == size:
            count += 1
            yield tuple(clique)
            return
        for idx, v in enumerate(cand):
            nxt = [u for u in cand[idx + 1 :] if u in nbrs[v]]
            if len(clique) + 1 + len(nxt) >= size:
                yield from rec(clique + [v], nxt)

    for v in sorted(nbrs):
        higher = sorted(u for u in nbrs[v] if u > v)
        yield from rec([v], higher)
        if count >= limit:
            return


def forced_merges(g: Graph, k: int, max_cliques: int = 200_000):
    """Apply the (k-1)-clique merge rule to a fixpoint.

    Returns ``(merged, steps, contradiction)`` where ``steps`` is a list of
    ``[u, v, clique]`` records (original vertex ids) and ``contradiction`` is a
    (k+1)-clique of class representatives, or None.
    """
    m = _Merged(g)
    steps: list[list] = []
    if k < 2:
        return m, steps, None
    changed = True
    while changed:
        changed = False
        for clique in list(_cliques_of_size(m.nbrs, k - 1, max_cliques)):
            if any(c not in m.nbrs for c in clique):
                continue  # merged away earlier in this sweep
            common = sorted(set.intersection(*(m.nbrs[c] for c in clique)))
            if len(common) < 2:
                continue
            for a, b in combinations(common, 2):
                if b in m.nbrs[a]:
                    return m, steps, sorted(list(clique) + [a, b])
            anchor = common[0]
            for other in common[1:]:
                steps.append([m.find(anchor), other, list(clique)])
                m.union(anchor, other)
            changed = True
    return m, steps, None


# ---------------------------------------------------------------------------
# exact k-colouring search


class _Budget:
    def __init__(self, max_nodes: int, time_limit: float):
        self.max_nodes = max_nodes
        self.deadline = time.monotonic() + time_limit
        self.nodes = 0
        self.exhausted = False

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.max_nodes or (self.nodes & 0x3FF == 0 and time.monotonic() > self.deadline):
            self.exhausted = True
        return not self.exhausted


def _search_k_coloring(n: int, adj: Sequence[Sequence[int]], k: int, seed_clique: Sequence[int],
                       budget: _Budget) -> list[int] | None:
    """DSATUR-order backtracking with forward checking.

    Returns a colouring, or None when the space is exhausted (check
    ``budget.exhausted`` to tell a refutation from a timeout).
    """
    color = [-1] * n
    forbid = [[0] * k for _ in range(n)]
    sat = [0] * n
    deg = [len(a) for a in adj]
    uncolored = set(range(n))

    def assign(v: int, c: int) -> bool:
        color[v] = c
        uncolored.discard(v)
        ok = True
        for w in adj[v]:
            fw = forbid[w]
            if fw[c] == 0:
                sat[w] += 1
            fw[c] += 1
            if color[w] < 0 and sat[w] == k:
                ok = False
        return ok

    def unassign(v: int):
        c = color[v]
        color[v] = -1
        uncolored.add(v)
        for w in adj[v]:
            fw = forbid[w]
            fw[c] -= 1
            if fw[c] == 0:
                sat[w] -= 1

    if len(seed_clique) > k:
        return None
    for c, v in enumerate(seed_clique):
        if not assign(v, c):
            return None
    used = len(seed_clique)

    def pick() -> int:
        best, key = -1, None
        for v in uncolored:
            kk = (sat[v], deg[v], -v)
            if key is None or kk > key:
                key, best = kk, v
        return best

    # explicit stack of (vertex, candidate colours, next index, used-before)
    stack: list[list] = []
    if not uncolored:
        return color[:]
    v = pick()
    cands = [c for c in range(min(k, used + 1)) if forbid[v][c] == 0]
    stack.append([v, cands, 0, used])
    while stack:
        frame = stack[-1]
        v, cands, idx, used_before = frame
        if color[v] >= 0:
            unassign(v)
        if idx >= len(cands) or budget.exhausted:
            stack.pop()
            continue
        c = cands[idx]
        frame[2] = idx + 1
        if not budget.tick():
            return None
        if not assign(v, c):
            continue
        used = max(used_before, c + 1)
        if not uncolored:
            return color[:]
        w = pick()
        wc = [c2 for c2 in range(min(k, used + 1)) if forbid[w][c2] == 0]
        stack.append([w, wc, 0, used])
    return None


def _class_graph(m: _Merged) -> tuple[list[int], list[list[int]]]:
    reps = m.classes()
    pos = {r: i for i, r in enumerate(reps)}
    adj = [sorted(pos[m.find(w)] for w in m.nbrs[r]) for r in reps]
    return reps, adj


def k_colorable(g: Graph, k: int, *, max_nodes: int = DEFAULT_MAX_NODES,
                time_limit: float = DEFAULT_TIME_LIMIT, seed_clique: Sequence[int] | None = None):
    """Decide k-colourability.

    Returns ``(status, payload, nodes)`` with status ``"sat"`` (payload is a
    colouring list), ``"unsat"`` (payload is a refutation transcript) or
    ``"unknown"`` (budget exhausted).
    """
    budget = _Budget(max_nodes, time_limit)
    m, steps, contradiction = forced_merges(g, k)
    transcript: dict = {"k": k, "merges": steps}
    if contradiction is not None:
        transcript["final_clique"] = list(contradiction)
        return "unsat", transcript, 0
    reps, cadj = _class_graph(m)
    pos = {r: i for i, r in enumerate(reps)}
    seed = []
    if seed_clique:
        seed_cls = []
        for v in seed_clique:
            r = pos[m.find(v)]
            if r not in seed_cls:
                seed_cls.append(r)
        seed = seed_cls if all(b in cadj[a] for a, b in combinations(seed_cls, 2)) else []
    col = _search_k_coloring(len(reps), cadj, k, seed, budget)
    if col is not None:
        full = [col[pos[m.find(v)]] for v in range(g.n)]
        return "sat", full, budget.nodes
    if budget.exhausted:
        return "unknown", None, budget.nodes
    transcript["search"] = {"nodes": budget.nodes, "seed_clique": [reps[i] for i in seed], "result": "unsat"}
    return "unsat", transcript, budget.nodes


def verify_refutation(g: Graph, transcript: Mapping, *, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    """Replay a k-colouring refutation step by step."""
    k = int(transcript["k"])
    m = _Merged(g)
    for u, v, clique in transcript["merges"]:
        ru, rv = m.find(u), m.find(v)
        rc = [m.find(c) for c in clique]
        if ru == rv or m.adjacent(ru, rv) or len(rc) != k - 1 or len(set(rc)) != k - 1:
            return False
        if any(not m.adjacent(a, b) for a, b in combinations(rc, 2)):
            return False
        if any(not (m.adjacent(c, ru) and m.adjacent(c, rv)) for c in rc):
            return False
        m.union(ru, rv)
    if "final_clique" in transcript:
        rc = [m.find(c) for c in transcript["final_clique"]]
        return len(rc) == k + 1 and len(set(rc)) == k + 1 and all(
            m.adjacent(a, b) for a, b in combinations(rc, 2)
        )
    search = transcript.get("search")
    if not search or search.get("result") != "unsat":
        return False
    reps, cadj = _class_graph(m)
    pos = {r: i for i, r in enumerate(reps)}
    seed = [pos[m.find(v)] for v in search.get("seed_clique", [])]
    if any(b not in cadj[a] for a, b in combinations(seed, 2)):
        return False
    budget = _Budget(max_nodes, float("inf"))
    col = _search_k_coloring(len(reps), cadj, k, seed, budget)
    return col is None and not budget.exhausted


def verify_certificate(g: Graph, cert: ColoringCertificate) -> bool:
    if cert.kind == "proper_coloring":
        return (
            cert.colors is not None
            and len(cert.colors) == g.n
            and verify_coloring(g, cert.colors)
            and len(set(cert.colors.values())) <= cert.colors_used
        )
    if cert.kind == "clique_witness":
        return cert.witness_vertices is not None and is_clique(g, cert.witness_vertices) and (
            len(cert.witness_vertices) == cert.colors_used
        )
    if cert.kind == "odd_cycle_witness":
        return cert.witness_vertices is not None and is_odd_cycle(g, cert.witness_vertices) and cert.colors_used == 3
    if cert.kind == "exhaustive_unsat":
        return cert.transcript is not None and int(cert.transcript["k"]) + 1 == cert.colors_used and (
            verify_refutation(g, cert.transcript)
        )
    return False
    return False


# ---------------------------------------------------------------------------


def chromatic_number(g: Graph, *, max_nodes: int = DEFAULT_MAX_NODES,
                     time_limit: float = DEFAULT_TIME_LIMIT) -> ChromaticResult:
    """Exact chromatic number with an upper and a lower certificate.

    On budget exhaustion the result is flagged ``inconclusive`` and carries
    the best proven bounds; ``chi`` is then None.
    """
    if g.n == 0:
        raise ColoringError("graph has no vertices")
    if max_nodes <= 0 or time_limit <= 0:
        raise ColoringError("budget must be positive")
    t0 = time.monotonic()
    clique = max_clique(g)
    lower = ColoringCertificate("clique_witness", witness_vertices=tuple(clique), colors_used=len(clique))
    lb = len(clique)

    greedy = dsatur_coloring(g)
    ub = max(greedy) + 1
    upper = ColoringCertificate("proper_coloring", colors=dict(enumerate(greedy)), colors_used=ub)

    if lb < 3 <= ub:
        cyc = find_odd_cycle(g)
        if cyc is not None:
            lb = 3
            lower = ColoringCertificate("odd_cycle_witness", witness_vertices=tuple(cyc), colors_used=3)
        else:
            # bipartite graphs are 2-coloured by BFS parity
            ub = 2 if g.n_edges else 1
            upper = ColoringCertificate("proper_coloring", colors=_bipartition(g), colors_used=ub)

    total_nodes = 0
    status = "exact"
    while lb < ub:
        remaining = time_limit - (time.monotonic() - t0)
        if remaining <= 0:
            status = "inconclusive"
            break
        outcome, payload, nodes = k_colorable(
            g, lb, max_nodes=max_nodes - total_nodes, time_limit=remaining, seed_clique=clique
        )
        total_nodes += nodes
        if outcome == "sat":
            ub = lb
            upper = ColoringCertificate("proper_coloring", colors=dict(enumerate(payload)), colors_used=ub)
        elif outcome == "unsat":
            lb += 1
            lower = ColoringCertificate("exhaustive_unsat", colors_used=lb, transcript=payload)
        else:
            status = "inconclusive"
            break

    if status == "exact":
        if not verify_certificate(g, upper) or not verify_certificate(g, lower):
            raise ColoringError("certificate failed re-verification")
    return ChromaticResult(
        chi=ub if status == "exact" else None,
        lower_bound=lb,
        upper_bound=ub,
        upper=upper,
        lower=lower,
        status=status,
        nodes=total_nodes,
        elapsed=time.monotonic() - t0,
    )


def _bipartition(g: Graph) -> dict[int, int]:
    side = [-1] * g.n
    for root in range(g.n):
        if side[root] >= 0:
            continue
        side[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    queue.append(w)
    return dict(enumerate(side))


# ---------------------------------------------------------------------------


def cnf_variable(v: int, t: int, c: int) -> int:
    return v * c + t + 1


def export_dimacs_cnf(g: Graph, c: int) -> str:
    """DIMACS CNF asserting a proper c-colouring (at-least-one per vertex,
    no shared colour across an edge)."""
    if c < 1:
        raise ColoringError("need at least one colour")
    n_vars = g.n * c
    n_clauses = g.n + g.n_edges * c
    lines = [f"p cnf {n_vars} {n_clauses}"]
    for v in range(g.n):
        lines.append(" ".join(str(cnf_variable(v, t, c)) for t in range(c)) + " 0")
    for i, j in g.edges:
        for t in range(c):
            lines.append(f"-{cnf_variable(i, t, c)} -{cnf_variable(j, t, c)} 0")
    return "\n".join(lines) + "\n"


def parse_dimacs_cnf(text: str) -> tuple[int, list[list[int]]]:
    n_vars = 0
    clauses: list[list[int]] = []
    cur: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            n_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    return n_vars, clauses

