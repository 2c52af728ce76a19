import json

import pytest

from tedgraph.cli import main

from conftest import MUTAG_DIR

HEX = "6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n"
TRI2 = "6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "c6.txt").write_text(HEX)
    (tmp_path / "t.txt").write_text(TRI2)
    (tmp_path / "star.json").write_text('{"n":4,"edges":[[0,1],[0,2],[0,3]]}')
    (tmp_path / "p4.json").write_text('{"n":4,"edges":[[0,1],[1,2],[2,3]]}')
    (tmp_path / "bad.txt").write_text("3\n0 1\nx\n")
    return tmp_path


def test_compare_exit_codes(files, capsys):
    assert main(["compare", str(files / "c6.txt"), str(files / "t.txt")]) == 0
    out = capsys.readouterr().out
    assert "wl_distinguish: false" in out and "ted_equal: false" in out and "cell: ted_only" in out
    assert main(["compare", str(files / "c6.txt"), str(files / "c6.txt")]) == 1
    assert main(["compare", str(files / "star.json"), str(files / "p4.json")]) == 0
    assert "cell: both" in capsys.readouterr().out
    assert main(["compare", str(files / "c6.txt"), str(files / "bad.txt")]) == 2
    assert "bad.txt:3:" in capsys.readouterr().err


def test_bad_flags_exit_2(files):
    with pytest.raises(SystemExit) as exc:
        main(["diagram", str(files / "c6.txt"), "--emit", "png"])
    assert exc.value.code == 2


def test_diagram_json_and_csv(files, capsys):
    assert main(["diagram", str(files / "c6.txt")]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert len(obj["ph0"]) == 6 and obj["ph1"] == [["1/2", "inf"]]
    assert main(["diagram", str(files / "c6.txt"), "--emit", "csv"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "1,0.5,inf"


def test_diagram_initial_coloring(files, capsys):
    assert main(["diagram", str(files / "star.json"), "--coloring", "initial"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert len(obj["ph0"]) == 4 and obj["ph1"] == []


def test_diagram_svg_and_out(files):
    out = files / "d.svg"
    assert main(["diagram", str(files / "c6.txt"), "--emit", "svg", "--out", str(out)]) == 0
    first = out.read_bytes()
    assert main(["diagram", str(files / "c6.txt"), "--emit", "svg", "--out", str(out)]) == 0
    assert out.read_bytes() == first


def test_diagram_corpus_outputs(files, capsys):
    assert main(["diagram", str(MUTAG_DIR), "--emit", "csv", "--out", str(files / "m.csv")]) == 0
    lines = (files / "m.csv").read_text().splitlines()
    assert lines[0] == "graph,dim,birth,death"
    assert lines[-1].startswith("187,")
    assert main(["diagram", str(MUTAG_DIR), "--format", "tu"]) == 0
    assert len(json.loads(capsys.readouterr().out)) == 188
    assert main(["diagram", str(MUTAG_DIR), "--emit", "svg"]) == 2


def test_wl_trace(files, capsys):
    assert main(["wl", str(files / "star.json")]) == 0
    out = capsys.readouterr().out
    assert "round 1: 2 classes" in out and "stable at round 1" in out
    assert main(["wl", str(files / "c6.txt"), "--variant", "sum", "--rounds", "3"]) == 0
    assert "histogram: 0:6" in capsys.readouterr().out


def test_wl_round_cap(files, capsys):
    (files / "p.txt").write_text("8\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n")
    assert main(["wl", str(files / "p.txt"), "--rounds", "1"]) == 0
    assert "not stable" in capsys.readouterr().out


def test_discriminate_report(files, capsys):
    corpus = files / "corpus.json"
    corpus.write_text(json.dumps([
        {"n": 6, "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 0]]},
        {"n": 6, "edges": [[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]]},
        {"n": 4, "edges": [[0, 1], [0, 2], [0, 3]]},
    ]))
    rep = files / "r.json"
    assert main(["discriminate", str(corpus), "--report", str(rep), "--oracle-max", "10", "--jobs", "2"]) == 0
    obj = json.loads(rep.read_text())
    assert obj["pair_counts"]["ted_only"] == 1 and obj["pair_counts"]["wl_only"] == 0
    assert "ted only" in capsys.readouterr().out


def test_certify(capsys):
    assert main(["certify-filtration", str(MUTAG_DIR)]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["certified"] and len(cert["filtrations"]) == 2
    assert all(f["injective"] and f["max_value"] == "1/2" for f in cert["filtrations"])


def test_fuse(files, capsys):
    assert main(["fuse", str(files / "c6.txt")]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["certificate"]["checked"] and obj["certificate"]["unique"]
    out = files / "f.json"
    assert main(["fuse", str(MUTAG_DIR), "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert not summary["certificate"]["checked"]
    assert len(json.loads(out.read_text())["fingerprints"]) == 188
    assert main(["fuse", str(files / "c6.txt"), "--bound", "2"]) == 2
