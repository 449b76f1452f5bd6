from __future__ import annotations

import json

import pytest

from bnideal.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3")
    assert code == 0 and json.loads(out)["count"] == 5


def test_gen_ideal(capsys, tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps({"children": [[], [1], [2]], "levels": [2, 2, 2]}))
    code, out, _ = run(capsys, "gen-ideal", "--net", str(path))
    data = json.loads(out)
    assert code == 0 and data["statements"] and len(data["generators"]) == 2
    code, out, _ = run(capsys, "gen-ideal", "--net", "K23", "--plain")
    assert len(json.loads(out)["generators"]) == 26


def test_groebner_from_ideal_file(capsys, tmp_path):
    code, out, _ = run(capsys, "gen-ideal", "--net", "K23", "--out", str(tmp_path / "i.json"))
    assert code == 0 and out == ""
    code, out, _ = run(capsys, "groebner", "--ideal", str(tmp_path / "i.json"))
    data = json.loads(out)
    assert code == 0 and data["codim"] == 14 and data["size"] == len(data["generators"])


def test_groebner_lex(capsys, tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps({"children": [[], [1], [2]], "levels": [2, 3, 2]}))
    code, out, _ = run(capsys, "groebner", "--net", str(path), "--order", "lex")
    data = json.loads(out)
    assert code == 0 and data["order"].startswith("lex") and data["degree"] == 8


def test_kerphi_four_node(capsys, tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps({"children": [[], [1], [1], [2]], "levels": [2, 2, 2, 2]}))
    code, out, _ = run(capsys, "kerphi", "--net", str(path))
    data = json.loads(out)
    assert code == 0 and data["equal"] is True


def test_decompose(capsys, tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps({"children": [[], [1], [2], [3]], "levels": [2, 2, 2, 2]}))
    code, out, _ = run(capsys, "decompose", "--net", str(path), "--certify")
    data = json.loads(out)
    assert code == 0 and data["components"] == 3 and data["radical"] == "radical"


def test_classify_table1(capsys, tmp_path):
    code, _, err = run(capsys, "classify", "--csv", str(tmp_path / "t.csv"), "--budget", "0",
                       "--cache", str(tmp_path / "c"))
    assert code == 0 and "mismatch" not in err
    assert (tmp_path / "t.csv").read_text().startswith("index,codim")


def test_classify_requires_opt_in(capsys):
    code, _, err = run(capsys, "classify", "--mode", "five-full")
    assert code == 2 and "opt-in" in err


def test_secant(capsys):
    code, out, _ = run(capsys, "secant", "--shape", "2,2,2,2", "--r", "3")
    data = json.loads(out)
    assert code == 0 and (data["expected"], data["actual"]) == (14, 13)
    code, out, _ = run(capsys, "secant", "--shape", "3,3,3", "--task", "cubics")
    assert json.loads(out)["cubics"] == 222
    code, out, _ = run(capsys, "secant", "--shape", "2,2,3", "--task", "ideal")
    assert json.loads(out)["degree"] == 6


def test_bad_input(capsys):
    code, _, err = run(capsys, "gen-ideal", "--net", "no-such-file.json")
    assert code == 2 and err.startswith("error")
    with pytest.raises(SystemExit):
        main(["secant"])
