import json
import subprocess
import sys

import pytest

from gfano.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--format", "json", *argv)
    return code, json.loads(out), out


def test_ring(capsys):
    code, out, _ = run(capsys, "ring", "--ambient", "2,2,2", "--hyps", "0,1,1;1,0,1;1,1,0",
                       "--class", "1,1,1")
    assert code == 0 and out.splitlines()[0] == "30"
    code, out, _ = run(capsys, "ring", "--ambient", "1,1,1,1", "--hyps", "1,1,1,1",
                       "--class", "1,1,1,1")
    assert code == 0 and out.splitlines()[0] == "24"
    code, d, _ = run_json(capsys, "ring", "--ambient", "3,3", "--hyps", "1,1;1,1;1,1")
    assert code == 0 and d["value"] == 20
    code, d, _ = run_json(capsys, "ring", "--ambient", "1,1,1", "--cover", "2,2,2")
    assert d["value"] == 12


def test_ring_budget_and_bad_input(capsys):
    code, _, err = run(capsys, "ring", "--ambient", "1,1", "--hyps", "3,3", "--class", "1,1")
    assert code == 2 and "budget" in err
    assert run(capsys, "ring", "--ambient", "2,x")[0] == 2
    assert run(capsys, "ring", "--ambient", "2,2", "--hyps", "1,1,1")[0] == 2


def test_lattice_aut(capsys):
    code, d, _ = run_json(capsys, "lattice", "aut", "--variety", "mm-P1P1P1")
    assert code == 0 and d["order"] == 6 and d["witness"]["order"] == 3
    for row in ("row2", "row3"):
        code, d, _ = run_json(capsys, "lattice", "aut", "--variety", row)
        assert d["order"] == 2 and d["witness"]["order"] == 2
    code, out, _ = run(capsys, "lattice", "aut", "--form", "1,3,3,1", "--c1", "1,1")
    assert out.startswith("order 2")
    assert run(capsys, "lattice", "aut", "--variety", "mm-9.9")[0] == 2


@pytest.mark.parametrize("bound", ["3", "4", "5"])
def test_entry_bound_either_side(capsys, bound):
    a = run(capsys, "--entry-bound", bound, "lattice", "aut", "--variety", "row1")
    b = run(capsys, "lattice", "aut", "--variety", "row1", "--entry-bound", bound)
    assert a == b and a[0] == 0


def test_lattice_rank_and_eval(capsys):
    assert run(capsys, "lattice", "rank", "--variety", "mm-P1P1P1", "--gens", "cycle3")[:2] == (0, "1\n")
    assert run(capsys, "lattice", "rank", "--variety", "mm-P1P1P1", "--gens", "swap")[:2] == (0, "2\n")
    assert run(capsys, "lattice", "eval", "--variety", "row3", "--vecs", "1,1;1,0;2,-1")[:2] == (0, "4\n")
    code, _, err = run(capsys, "lattice", "rank", "--variety", "row3", "--gens", "2,0;0,1")
    assert code == 1 and "isometry" in err
    assert run(capsys, "lattice", "eval", "--variety", "row3", "--vecs", "1,1;1,0")[0] == 2


def test_orders(capsys):
    assert run(capsys, "orders", "3")[1].splitlines()[0] == "2, 4, 6"
    assert run(capsys, "orders", "1")[1].splitlines()[0] == "2"
    code, d, _ = run_json(capsys, "orders", "4")
    assert 9 in d["values"] and 384 in d["values"]
    assert run(capsys, "orders", "4", "--rho")[1].splitlines()[0] == "2, 4, 6"
    assert run(capsys, "orders", "7")[0] == 2


def test_constraints(capsys):
    assert run(capsys, "constraints", "disc", "2", "1", "12")[1] == "6\n"
    assert run(capsys, "constraints", "disc", "2", "1", "26")[1] == "infeasible\n"
    assert run(capsys, "constraints", "hodge", "2", "1", "10")[1] == "9\n"
    assert run(capsys, "constraints", "genus", "8")[1] == "21\n"
    assert run(capsys, "constraints", "dp", "2", "1", "12", "6")[0] == 1
    assert run(capsys, "constraints", "dp", "3", "1", "24", "8")[0] == 0
    assert run(capsys, "constraints", "product", "8")[1].startswith("excluded")
    code, d, _ = run_json(capsys, "constraints", "rho2", "1")
    assert [c["r"] for c in d["cases"]] == [3, 4]
    assert run(capsys, "constraints", "adim", "20")[1] == "12\n"
    assert run(capsys, "constraints", "sing", "14", "4")[1] == "1, 2\n"
    code, d, _ = run_json(capsys, "constraints", "triples")
    assert d["triples"] == [[4, 24, 3], [6, 18, 10], [8, 12, 21]]
    assert run(capsys, "constraints", "hodge", "1", "1", "0")[0] == 2


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--rho", "5")
    assert code == 0
    assert out.count("ELIMINATED") == 3
    code, d, _ = run_json(capsys, "classify", "--rho", "4")
    kept = [t["id"] for t in d["traces"] if not t["verdict"].startswith("ELIMINATED")]
    assert kept == ["mm-4.1"]


def test_verify(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0 and out.splitlines()[-1] == "8/8 rows pass, 8 survivors: OK"
    assert run(capsys, "verify", "--catalog", "/nonexistent/cat.json")[0] == 2


def test_verify_mutated_catalog(capsys, tmp_path):
    from gfano.catalog import default_catalog_path

    doc = json.loads(default_catalog_path().read_text())
    for e in doc["entries"]:
        if e["id"] == "mm-3.13":
            e["minusK3"] = 40
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, d, _ = run_json(capsys, "verify", "--catalog", str(p))
    assert code == 1 and not d["passed"] and "40" in d["error"]
    p.write_text("{ not json")
    assert run(capsys, "verify", "--catalog", str(p))[0] == 2


def test_json_round_trip_and_position(capsys):
    _, _, before = run_json(capsys, "verify")
    code, after, _ = run(capsys, "verify", "--format", "json")
    assert before == after
    assert json.dumps(json.loads(before), sort_keys=True, indent=2) + "\n" == before


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gfano", "orders", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "2, 3"
