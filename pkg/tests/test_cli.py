import json
import subprocess
import sys

import pytest

from slicechroma import formats
from slicechroma.cli import main
from slicechroma.rational_slice import witness_graph


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_pell(capsys):
    code, out, _ = run(["pell", "--count", "3"], capsys)
    assert code == 0 and out.split() == ["(1,1)", "(19,11)", "(265,153)"]


def test_witness_pipe_to_chroma():
    cmd = [sys.executable, "-m", "slicechroma.cli"]
    w = subprocess.run(cmd + ["witness", "--n", "0", "--eps", "1/1"], capture_output=True, text=True, check=True)
    c = subprocess.run(cmd + ["chroma"], input=w.stdout, capture_output=True, text=True)
    assert c.returncode == 0
    assert c.stdout.splitlines()[0] == "chi = 4"
    assert "proper_coloring" in c.stdout and "clique_witness" in c.stdout


def test_empty_graph_file(tmp_path, capsys):
    f = tmp_path / "empty.json"
    f.write_text("")
    code, _, err = run(["chroma", str(f)], capsys)
    assert code == 1 and "schema error" in err and f"{f}:1" in err


def test_schema_error_reports_line(capsys, monkeypatch):
    bad = '{"format": "slicechroma.graph",\n "vertices": 3,\n "edges": [[0, 1], [1]]}\n'
    code, _, err = run(["chroma"], capsys, stdin=bad, monkeypatch=monkeypatch)
    assert code == 1 and "<stdin>:3" in err
    code, _, err = run(["chroma"], capsys, stdin='{"format": ', monkeypatch=monkeypatch)
    assert code == 1 and "invalid JSON" in err


def test_dimacs_input(capsys, monkeypatch):
    text = "c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n"
    code, out, _ = run(["chroma"], capsys, stdin=text, monkeypatch=monkeypatch)
    assert code == 0 and out.startswith("chi = 3")


def test_inconclusive_exit_code(tmp_path, capsys):
    import networkx as nx

    g = nx.mycielski_graph(5)
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"format": "slicechroma.graph", "vertices": g.number_of_nodes(),
                             "edges": [list(e) for e in g.edges()]}))
    code, out, _ = run(["chroma", str(f), "--max-nodes", "3"], capsys)
    assert code == 2 and "inconclusive" in out


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["pell", "--bogus"])
    assert exc.value.code == 2


def test_graph_json_roundtrip():
    g = witness_graph(1, "1/100")
    text = formats.dumps(formats.graph_to_json(g, seed=0))
    back = formats.graph_from_json(text)
    assert formats.dumps(formats.graph_to_json(back, seed=0)) == text
    assert back.points == g.points and back.edges == g.edges


def test_float_graph_roundtrip():
    from oracles import moser_spindle
    from slicechroma.udg import build_udg, tolerance

    g = build_udg(moser_spindle(), tolerance())
    text = formats.dumps(formats.graph_to_json(g))
    back = formats.graph_from_json(text)
    assert formats.dumps(formats.graph_to_json(back)) == text


def test_atomic_out_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["replay", "--eps", "1e-2", "--seed", "3", "--out", str(a)]) == 0
    assert main(["replay", "--eps", "1e-2", "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    d = json.loads(a.read_text())
    assert d["seed"] == 3 and d["status"] == "pass"
    assert not list(tmp_path.glob(".tmp-*"))


def test_export_cnf(capsys, monkeypatch):
    code, out, _ = run(["export-cnf", "-c", "1"], capsys, stdin="p edge 2 1\ne 1 2\n", monkeypatch=monkeypatch)
    assert code == 0 and out == "p cnf 2 3\n1 0\n2 0\n-1 -2 0\n"


def test_geom(capsys):
    code, out, _ = run(["geom", "--regular", "4", "--edge-sq", "40"], capsys)
    d = json.loads(out)
    assert code == 0 and d["inradius"] == "1/1"


def test_isbell_and_stability(tmp_path, capsys):
    code, out, _ = run(["isbell-check", "--pairs", "2000"], capsys)
    assert code == 0 and json.loads(out)["monochromatic"] == 0
    csv = tmp_path / "s.csv"
    code, out, _ = run(["stability", "--trials", "10", "--csv", str(csv), "--threads", "2"], capsys)
    assert code == 0 and json.loads(out)["pair_bound_4h2"]
    assert csv.read_text().startswith("h,trial,dV2,dR2,dPhi\n")


def test_replay_precondition_exit(capsys):
    code, _, err = run(["replay", "--eps", "1e-3", "--eps1", "6e-4"], capsys)
    assert code == 1 and "eps1" in err
