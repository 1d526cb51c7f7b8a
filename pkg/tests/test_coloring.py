import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_chromatic, count_proper, dpll, moser_spindle
from slicechroma.coloring import (
    ColoringCertificate,
    ColoringError,
    chromatic_number,
    cnf_variable,
    dsatur_coloring,
    export_dimacs_cnf,
    find_odd_cycle,
    forced_merges,
    is_odd_cycle,
    k_colorable,
    max_clique,
    parse_dimacs_cnf,
    verify_certificate,
    verify_coloring,
    verify_refutation,
)
from slicechroma.udg import Graph, build_udg, tolerance


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph(n, list(itertools.combinations(range(n), 2)))


@st.composite
def small_graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, keep in zip(pairs, mask) if keep])


@given(small_graphs())
@settings(max_examples=150, deadline=None)
def test_chromatic_matches_bruteforce(g):
    res = chromatic_number(g)
    assert res.exact
    assert res.chi == brute_chromatic(g.n, g.edges)
    assert verify_certificate(g, res.upper)
    assert verify_certificate(g, res.lower)


@given(small_graphs(8))
@settings(max_examples=80, deadline=None)
def test_max_clique_matches_networkx(g):
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    best = max((len(c) for c in nx.find_cliques(nxg)), default=1)
    assert len(max_clique(g)) == best


def test_moser_spindle_exhaustive_oracle():
    g = build_udg(moser_spindle(), tolerance())
    assert count_proper(7, g.edges, 3) == 0  # 3^7 assignments, none proper
    assert count_proper(7, g.edges, 4) > 0
    chi, upper, lower = chromatic_number(g)
    assert chi == 4
    assert lower.kind == "exhaustive_unsat"
    assert verify_refutation(g, lower.transcript)


def test_refutation_tamper_detected():
    g = build_udg(moser_spindle(), tolerance())
    _, lower_payload, _ = k_colorable(g, 3)
    bad = json.loads(json.dumps(lower_payload))
    bad["merges"] = [[0, 1, [2, 3]]]
    assert not verify_refutation(g, bad)


def test_forced_merge_semantics():
    # diamond: 0 and 3 share the edge {1, 2}, so they are merged for k = 3
    g = Graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    m, steps, contra = forced_merges(g, 3)
    assert contra is None
    assert steps == [[0, 3, [1, 2]]]


def test_odd_cycles():
    assert is_odd_cycle(cycle(5), find_odd_cycle(cycle(5)))
    assert find_odd_cycle(cycle(6)) is None
    res = chromatic_number(cycle(5))
    assert res.chi == 3 and res.lower.kind == "odd_cycle_witness"
    assert chromatic_number(cycle(6)).chi == 2


def test_complete_and_empty():
    assert chromatic_number(complete(5)).chi == 5
    assert chromatic_number(Graph(3, [])).chi == 1
    with pytest.raises(ColoringError):
        chromatic_number(Graph(0, []))


def test_grotzsch_graph():
    nxg = nx.mycielski_graph(4)
    g = Graph(nxg.number_of_nodes(), list(nxg.edges()))
    res = chromatic_number(g)
    assert res.chi == 4 and max(len(c) for c in nx.find_cliques(nxg)) == 2


def test_budget_gives_inconclusive():
    nxg = nx.mycielski_graph(5)  # chi 5, triangle-free
    g = Graph(nxg.number_of_nodes(), list(nxg.edges()))
    res = chromatic_number(g, max_nodes=3)
    assert res.status == "inconclusive" and res.chi is None
    assert res.lower_bound <= 5 <= res.upper_bound


def test_dsatur_is_proper():
    nxg = nx.gnp_random_graph(40, 0.3, seed=2)
    g = Graph(40, list(nxg.edges()))
    assert verify_coloring(g, dsatur_coloring(g))


def test_verify_coloring_rejects():
    g = cycle(3)
    assert not verify_coloring(g, [0, 0, 1])
    with pytest.raises(ColoringError):
        verify_coloring(g, {0: 0, 1: 1})


def test_certificate_json_roundtrip():
    res = chromatic_number(build_udg(moser_spindle(), tolerance()))
    for cert in (res.upper, res.lower):
        back = ColoringCertificate.from_json(json.loads(json.dumps(cert.to_json())))
        assert back == cert


def test_cnf_encoding_shape():
    g = Graph(2, [(0, 1)])
    assert export_dimacs_cnf(g, 1) == "p cnf 2 3\n1 0\n2 0\n-1 -2 0\n"
    assert cnf_variable(3, 2, 4) == 15


@given(small_graphs(6), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_cnf_roundtrip_with_dpll(g, c):
    nvars, clauses = parse_dimacs_cnf(export_dimacs_cnf(g, c))
    model = dpll(nvars, clauses)
    assert (model is not None) == (brute_chromatic(g.n, g.edges) <= c)
    if model is not None:
        colors = [next(t for t in range(c) if model[cnf_variable(v, t, c)]) for v in range(g.n)]
        assert verify_coloring(g, colors)


def test_moser_cnf_unsat_at_3():
    g = build_udg(moser_spindle(), tolerance())
    nvars, clauses = parse_dimacs_cnf(export_dimacs_cnf(g, 3))
    assert nvars == 21 and len(clauses) == 7 + 33
    assert dpll(nvars, clauses) is None
    assert dpll(*parse_dimacs_cnf(export_dimacs_cnf(g, 4))) is not None
