import json
import subprocess
import sys
from io import StringIO

import pytest

from fischerdecomp.cli import CAP_ENV, main


def run(*argv):
    out, err = StringIO(), StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    return code, json.loads(out), err


def test_decompose_one_variable_square():
    code, data, err = run_json("decompose", "--k", "1", "--m", "2", "-e", "x1_1^2")
    assert code == 0 and err == ""
    assert data == [
        {"n": [[1, 1, 0]], "harmonic": "1/2*x1_1^2 - 1/2*x1_2^2"},
        {"n": [[1, 1, 1]], "harmonic": "1/2"},
    ]


def test_decompose_collapse_warns():
    code, data, err = run_json("decompose", "--k", "2", "--m", "1", "-e", "x1_1^2*x2_1^2")
    assert code == 0
    assert "non-unique" in err
    assert data


def test_decompose_zero():
    code, data, _ = run_json("decompose", "--k", "2", "--m", "3", "-e", "0")
    assert code == 0 and data == []


def test_decompose_table_and_csv():
    code, out, _ = run("decompose", "--k", "1", "--m", "2", "-e", "x1_1^2")
    assert code == 0 and "r11" in out
    code, out, _ = run("decompose", "--k", "1", "--m", "2", "-e", "x1_1^2", "--format", "csv")
    assert out.splitlines() == ["n11,harmonic", "0,1/2*x1_1^2 - 1/2*x1_2^2", "1,1/2"]


def test_decompose_from_file(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("x1_1*x2_1\n")
    code, data, _ = run_json("decompose", "--k", "2", "--m", "1", "-f", str(path))
    assert code == 0
    assert data == [{"n": [[1, 1, 0], [1, 2, 1], [2, 2, 0]], "harmonic": "1"}]


def test_decompose_parse_error():
    code, out, err = run("decompose", "--k", "1", "--m", "2", "-e", "x1_3^2")
    assert code == 2 and "error" in err and out == ""
    code, _, err = run("decompose", "--k", "1", "--m", "2", "-e", "2 x1_1")
    assert code == 2 and "position" in err


def test_directness_examples():
    assert run("directness", "--k", "2", "--m", "3", "--degree", "4")[0] == 0
    assert run("directness", "--k", "1", "--m", "4", "--degree", "6")[0] == 0
    code, out, _ = run("directness", "--k", "2", "--m", "1", "--degree", "4")
    assert code == 1
    assert "collapse at 2,2" in out


def test_directness_json_witness():
    code, data, _ = run_json("directness", "--k", "2", "--m", "1", "--degree", "4")
    assert code == 1 and data["direct"] is False
    rec = [r for r in data["records"] if r["multidegree"] == [2, 2]][0]
    assert rec["witnesses"] == [["1", "-1"]]


def test_verma_examples():
    assert run("verma", "--k", "2", "--m", "3", "--partition", "0,0")[0] == 0
    assert run("verma", "--k", "2", "--m", "3", "--partition", "4,1")[0] == 0
    code, out, _ = run("verma", "--k", "2", "--m", "2", "--partition", "0,0")
    assert code == 1 and "VIOLATED" in out


def test_verma_detect_json():
    code, data, _ = run_json("verma", "--k", "2", "--m", "1", "--partition", "0,0", "--detect")
    assert code == 1
    assert data["collapse"][2] == {"g": 2, "free_dim": 6, "realized_dim": 5, "collapsed": True}
    assert data["conditions"][0]["value"] == "-2"


def test_verma_bad_partition():
    assert run("verma", "--k", "2", "--m", "3", "--partition", "1,2")[0] == 2
    assert run("verma", "--k", "2", "--m", "3", "--partition", "1,1,1")[0] == 2


@pytest.mark.parametrize("k, m, span, gl", [(1, 3, 3, 1), (2, 4, 10, 4), (2, 3, 10, 4)])
def test_relations(k, m, span, gl):
    code, data, _ = run_json("relations", "--k", str(k), "--m", str(m))
    assert code == 0
    assert data["span_dim"] == span and data["gl_dim"] == gl and data["closed"]


def test_relations_expression():
    code, data, _ = run_json("relations", "--k", "2", "--m", "3", "-e", "[D12,R12]")
    assert code == 0
    assert data["coefficients"] == {"H11": "1", "H22": "1"}


def test_harmonics_and_simplicial():
    code, data, _ = run_json("harmonics", "--k", "1", "--m", "3", "--multidegree", "2")
    assert code == 0 and data["dimension"] == 5 and len(data["basis"]) == 5
    code, data, _ = run_json("simplicial", "--k", "2", "--m", "3", "--partition", "1,0")
    assert code == 0 and data["dimension"] == 3
    assert run("harmonics", "--k", "2", "--m", "3", "--multidegree", "2")[0] == 2


def test_isotypic():
    code, data, _ = run_json("isotypic", "--k", "2", "--m", "3", "--degree", "4")
    assert code == 0 and all(r["match"] for r in data) and len(data) == 15
    code, out, _ = run("isotypic", "--k", "2", "--m", "3", "--multidegree", "1,1")
    assert code == 0 and "yes" in out


def test_cap_flag_and_environment(monkeypatch):
    args = ("harmonics", "--k", "2", "--m", "5", "--multidegree", "4,4")
    assert run(*args, "--cap", "100")[0] == 3
    monkeypatch.setenv(CAP_ENV, "100")
    assert run(*args)[0] == 3
    assert run(*args, "--cap", "100000")[0] == 0
    monkeypatch.setenv(CAP_ENV, "lots")
    assert run(*args)[0] == 2


def test_usage_errors():
    assert run()[0] == 2
    assert run("decompose", "--k", "0", "--m", "1", "-e", "1")[0] == 2


def test_output_is_deterministic():
    args = ("directness", "--k", "2", "--m", "2", "--degree", "4", "--format", "json")
    assert run(*args) == run(*args)
    assert run(*args)[1] == run(*args[:-2], "--jobs", "2", "--format", "json")[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fischerdecomp", "decompose", "--k", "1", "--m", "2",
                           "--format", "json"], input="x1_1^2", capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)) == 2
