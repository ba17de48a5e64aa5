import json
import os
import subprocess
import sys

import pytest

from artin_indep.cli import main


def run(*args, env=None):
    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "artin_indep", *args], capture_output=True,
                          text=True, env=e)


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing_ms", None)
    return doc


def test_verify_theorem7_cyclotomic5(tmp_path):
    out = tmp_path / "r.json"
    p = run("verify", "theorem7", "--context", "cyclotomic:5", "--m", "2", "--n", "200",
            "--mode", "exact", "--out", str(out))
    assert p.returncode == 0, p.stderr
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "independent-certified" and doc["certified_rank"] == 12


def test_verify_formalism_exit_zero():
    p = run("verify", "formalism", "--context", "cyclotomic:4", "--powers", "1,1", "--n", "500")
    assert p.returncode == 0, p.stderr
    assert json.loads(p.stdout)["verdict"] == "identical"


def test_insufficient_bound_exits_2():
    assert run("verify", "theorem7", "--context", "cyclotomic:4", "--m", "0",
               "--n", "1").returncode == 2


def test_exit_codes_for_bad_input():
    assert run("verify", "theorem7", "--context", "cyclotomic:99").returncode == 1
    assert run("verify", "theorem7", "--context", "cyclotomic:5", "--chars", "2,2").returncode == 1
    assert run("verify", "nonsense").returncode == 64
    assert run("verify", "theorem7", "--m", "notanint").returncode == 64
    assert run("verify", "theorem7").returncode == 64
    assert run().returncode == 64


def test_unwritable_path_exits_74(tmp_path):
    p = run("verify", "theorem7", "--context", "cyclotomic:4", "--out",
            str(tmp_path / "missing" / "r.json"))
    assert p.returncode == 74
    assert run("export", "--context", "cyclotomic:4", "--out", str(tmp_path)).returncode == 74


def test_catalog():
    p = run("catalog")
    assert p.returncode == 0
    assert "s3_x3_minus_2: 3 classes, degrees 1,1,2, ramified {2,3}" in p.stdout
    assert "cyclotomic:3: 2 classes" in p.stdout
    assert "quadratic:-4" in p.stdout
    assert "provenance: external" in p.stdout


def test_export_import_roundtrip(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("export", "--context", "cyclotomic:4", "--chars", "2", "--n", "100",
               "--out", str(a)).returncode == 0
    assert run("import", str(a), "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    c, d = tmp_path / "c.json", tmp_path / "d.json"
    assert run("export", "--context", "s3_x3_minus_2", "--out", str(c)).returncode == 0
    doc = json.loads(c.read_text())
    assert {v["provenance"] for v in doc["ramified"].values()} == {"external"}
    assert run("import", str(c), "--out", str(d)).returncode == 0
    assert c.read_bytes() == d.read_bytes()
    p = run("verify", "theorem7", "--context", str(c), "--m", "1")
    assert p.returncode == 0


def test_float_export_digits(tmp_path):
    a = tmp_path / "f.json"
    assert run("export", "--context", "cyclotomic:5", "--chars", "2", "--n", "20",
               "--mode", "float", "--out", str(a)).returncode == 0
    doc = json.loads(a.read_text())
    for re, im in doc["coefficients"]:
        assert re == format(float(re), ".17g") and im == format(float(im), ".17g")


def test_import_rejects_garbage(tmp_path):
    a = tmp_path / "g.json"
    a.write_text("{\"hello\": 1}")
    assert run("import", str(a)).returncode == 1
    a.write_text("not json")
    assert run("import", str(a)).returncode == 1


def test_determinism_except_timing(tmp_path):
    docs = []
    for i, threads in enumerate(("1", "4")):
        out = tmp_path / f"r{i}.json"
        p = run("verify", "algebraic", "--context", "quadratic:-4", "--degree", "2",
                "--out", str(out), env={"ARTIN_INDEP_THREADS": threads})
        assert p.returncode == 0
        docs.append(strip_timing(json.loads(out.read_text())))
    assert docs[0] == docs[1]


def test_residual_and_decay_commands():
    p = run("verify", "residual", "--context", "cyclotomic:4", "--q", "1;-1",
            "--sigma-grid", "2")
    assert p.returncode == 0
    assert json.loads(p.stdout)["verdict"] == "nonzero-exhibited"
    p = run("verify", "decay", "--function", "poly:0,0,0,1")
    assert json.loads(p.stdout)["verdict"] == "consistent-with-B_eps"
    p = run("verify", "decay", "--function", "exp:-2", "--a-grid", "0.5,1")
    assert json.loads(p.stdout)["verdict"] == "consistent-with-V_eps"
    p = run("verify", "decay", "--function", "exp:3")
    assert p.returncode == 2
    p = run("verify", "decay", "--function", "poly:1", "--sigma-grid", "2:10:5")
    assert p.returncode == 1


def test_main_in_process(capsys):
    assert main(["catalog"]) == 0
    assert "cyclotomic:4" in capsys.readouterr().out
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 64
