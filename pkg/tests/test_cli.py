import json
import subprocess
import sys

import pytest

from powersums.cli import main

FCHECK = "x0^4+2*x0^3*x1+2*x0*x1^3+x1^4"
OMEGA = "1/288*y0^4+1/72*y0^3*y1-1/48*y0^2*y1^2+1/72*y0*y1^3+1/288*y1^4"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out) if out.strip() else None, err


def test_dual(capsys):
    code, out, _ = run_json(capsys, "dual", "--form", FCHECK, "--nvars", "2")
    assert code == 0
    assert out == {"dual": OMEGA, "kappa": "1"}
    code, out, _ = run_json(capsys, "dual", "--form", "x0^4+x1^4+x0^2*x1^2", "--nvars", "2")
    assert code == 2 and out["dual"] is None
    code, out, _ = run_json(capsys, "dual", "--form", "x0^4", "--nvars", "2")
    assert code == 2 and out["degenerate"]


def test_certify(capsys):
    code, out, _ = run_json(capsys, "certify", "--form", OMEGA, "--points", "1,0;0,1;1,-1", "--dual-form", FCHECK)
    assert code == 0
    assert out["alphas"] == ["1/144", "1/144", "-1/288"]
    assert out["kappa"] == "1" and all(out["checks"].values())
    code, out, _ = run_json(capsys, "certify", "--form", OMEGA, "--points", "1,0;0,1;1,1")
    assert code == 2 and out["representable"] is False
    code, out, _ = run_json(capsys, "certify", "--form", "y0^4", "--points", "1,0;0,1")
    assert code == 2 and out["zero_indices"] == [1]


def test_conjugate(capsys):
    code, out, _ = run_json(capsys, "conjugate", "--form", FCHECK, "--points", "1,0;0,1;1,-1")
    assert code == 0 and out["verdict"] == "PASS" and out["diagonal"] == ["12", "12", "-24"]
    code, out, _ = run_json(capsys, "conjugate", "--form", FCHECK, "--points", "1,0;0,1;1,1")
    assert code == 2 and out["verdict"] == "FAIL" and [0, 2] in out["failures"]


def test_pair_polar_cat(capsys):
    code, out, _ = run_json(capsys, "pair", "--form", "x0^2+2*x0*x1+x1^2", "--dual-form", "y0^2+2*y0*y1+y1^2")
    assert code == 0 and out["pairing"] == "8"
    code, out, _ = run_json(capsys, "polar", "--form", "x0^4+x1^4", "--dual-form", "y0^2+y1^2")
    assert out["polar"] == "12*x0^2+12*x1^2"
    code, out, _ = run_json(capsys, "cat", "--form", "x0^4+x1^4+x0^2*x1^2", "--degree", "2")
    assert out["matrix"] == [["12", "0", "2"], ["0", "4", "0"], ["2", "0", "12"]]
    assert out["source_basis"] == ["y0^2", "y0*y1", "y1^2"] and out["rank"] == 3


def test_synth_and_sylvester(capsys):
    code, out, _ = run_json(capsys, "synth", "--points", "1,0;0,1", "--degree", "5")
    assert code == 0 and out["form"] == "y0^5+y1^5"
    code, out, _ = run_json(capsys, "synth", "--points", "1,2;1,-1", "--alphas", "1,1", "--degree", "5")
    form = out["form"].replace("y", "x")
    code, out, _ = run_json(capsys, "sylvester", "--form", form)
    assert code == 0 and out["rank"] == 2 and out["exact"]
    code, out, _ = run_json(capsys, "sylvester", "--form", "2*x0^3+12*x0*x1^2")
    assert code == 2 and out["rank"] == 2 and out["rational_roots"] == []


def test_decompose_numeric(capsys):
    code, out, _ = run_json(
        capsys, "decompose-numeric", "--form", "x0^5+x1^5+x0^3*x1^2", "--n", "3", "--seed", "1"
    )
    assert code == 0 and out["residual"] < 1e-8
    assert out["expected_nullity"] == 0
    code, _, err = run(capsys, "decompose-numeric", "--form", "x0^5+x1^5", "--n", "2")
    assert code == 1 and "--seed" in err
    code, out, _ = run_json(capsys, "decompose-numeric", "--form", "x0^5+x1^5+x0^3*x1^2", "--n", "1", "--seed", "1")
    assert code == 2 and not out["success"]


def test_terracini_and_rank_table(capsys):
    code, out, _ = run_json(capsys, "terracini", "--degree", "4", "--nvars", "3", "--n", "5")
    assert code == 0 and out["computed_dim"] == 14 and out["defect"] == 1
    code, out, _ = run_json(capsys, "rank-table", "--max-m", "3", "--max-v", "2", "--extra", "5,2")
    assert code == 0
    assert [(r["m"], r["v"]) for r in out["rows"]] == [(2, 1), (2, 2), (3, 1), (3, 2), (5, 2)]
    assert out["exceptional"] == [[2, 2]]
    assert out["rows"][-1]["generic_rank"] == 7


def test_surface(capsys):
    code, out, _ = run_json(capsys, "surface", "--d", "7")
    assert code == 0
    assert (out["s"], out["n"], out["g"], out["deg_Gamma"], out["pa_Gamma"]) == (10, 15, 5, 20, 31)
    assert all(out["checks"].values())
    code, out, _ = run_json(capsys, "surface", "--d", "5..30")
    assert [r["d"] for r in out["rows"]] == list(range(5, 31))
    code, _, _ = run(capsys, "surface", "--d", "4")
    assert code == 1


def test_usage_errors(capsys):
    code, _, err = run(capsys, "dual", "--form", "x0^4+", "--nvars", "2")
    assert code == 1 and "grammar" in err and "--form" in err
    code, _, err = run(capsys, "bogus")
    assert code == 1
    code, _, err = run(capsys, "certify", "--form", OMEGA)
    assert code == 1 and "--points" in err
    code, _, err = run(capsys, "certify", "--form", OMEGA, "--points", "1,0;0")
    assert code == 1
    code, _, err = run(capsys, "dual", "--form", "@/nonexistent/file")
    assert code == 1 and "cannot read" in err
    code, _, err = run(capsys, "dual", "--form", FCHECK, "--nvars", "2", "--seed", "x")
    assert code == 1


def test_json_is_canonical(capsys):
    _, out, _ = run(capsys, "certify", "--form", OMEGA, "--points", "1,0;0,1;1,-1", "--dual-form", FCHECK, "--json")
    assert out.endswith("\n") and out.count("\n") == 1
    assert json.dumps(json.loads(out), sort_keys=True, ensure_ascii=False) + "\n" == out


def test_at_path_input_and_store(capsys, tmp_path):
    f = tmp_path / "form.txt"
    f.write_text(FCHECK + "\n")
    store = tmp_path / "jobs.jsonl"
    for _ in range(2):
        code, _, _ = run(capsys, "dual", "--form", f"@{f}", "--nvars", "2", "--store", str(store))
        assert code == 0
    run(capsys, "dual", "--form", "x0^4+x1^4+x0^2*x1^2", "--nvars", "2", "--store", str(store))
    lines = store.read_text().splitlines()
    assert len(lines) == 3
    recs = [json.loads(line) for line in lines]
    assert set(recs[0]) == {"command", "input_digest", "parameters", "result", "status", "timestamp"}
    assert recs[0]["result"] == recs[1]["result"] == {"dual": OMEGA, "kappa": "1"}
    assert recs[0]["input_digest"] == recs[1]["input_digest"] != recs[2]["input_digest"]
    assert recs[2]["status"] == 2


def test_human_output(capsys):
    code, out, _ = run(capsys, "cat", "--form", "x0^4", "--degree", "2", "--nvars", "2")
    assert code == 0 and "matrix:" in out and "rank: 1" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "powersums", "surface", "--d", "6", "--json"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pa_Gamma"] == 19
