import io
import json
import subprocess
import sys

from imulip.cli import main
from imulip.formula import normalize_top, parse
from imulip.prover import G3Prover
from imulip.sequent import Sequent


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_prove_exit_codes():
    assert run("prove", "[](p&q) => []p & []q")[0] == 0
    assert run("prove", "--calculus", "g3", "[]p, []q => [](p&q)")[0] == 1
    assert run("prove", "[]p, []q => [](p&q)")[0] == 1
    assert run("prove", "p ->")[0] == 2
    assert run("prove", "--calculus", "g5", "p")[0] == 2
    assert run("bogus")[0] == 2


def test_prove_formula_without_arrow():
    code, text = run("prove", "p -> p")
    assert code == 0
    assert "RImp" in text


def test_prove_emits_json_and_latex():
    code, text = run("prove", "--emit", "json", "[](p&q) => []p")
    doc = json.loads(text)
    assert code == 0 and doc["provable"] and doc["derivation"]["rule"] == "M"
    code, text = run("prove", "--emit", "latex", "p & q => p")
    assert code == 0 and "\\begin{prooftree}" in text


def test_explain_lists_rules():
    code, text = run("prove", "--explain", "p, p -> q => q")
    assert code == 0
    assert "LpImp" in text


def test_lyndon():
    code, text = run("lyndon", "p & q", "q | r")
    assert code == 0
    theta = normalize_top(parse(text.strip()))
    g3 = G3Prover()
    assert g3.provable(Sequent.of([parse("p & q")], theta))
    assert g3.provable(Sequent.of([theta], parse("q | r")))
    assert theta.pos <= {"q"} and not theta.neg
    assert run("lyndon", "p", "q")[0] == 1


def test_interpolate_and_verify():
    code, text = run("interpolate", "q -> p", "--atom", "p", "--polarity", "+",
                     "--verify-bound", "3", "--emit", "json")
    doc = json.loads(text)
    assert code == 0
    assert doc["verified"]["var"] and doc["verified"]["c1"]
    assert doc["verified"]["c2"]["counterexamples"] == []
    code, text = run("interpolate", "=> []q", "--kind", "forall", "--simplify")
    assert code == 0 and text.strip() == "[] q"
    assert run("interpolate", "p", "--polarity", "x")[0] == 2


def test_uip():
    code, text = run("uip", "q & p")
    assert code == 0 and text.strip() == "q"


def test_budget_exceeded_is_a_failure(tmp_path):
    cfg = tmp_path / "imulip.cfg"
    cfg.write_text("recursion_budget = 2\n")
    assert run("--config", str(cfg), "uip", "(p -> q) -> p")[0] == 1
    cfg.write_text("colour = blue\n")
    assert run("--config", str(cfg), "uip", "p")[0] == 2


def test_json_is_byte_identical():
    args = ("interpolate", "(p -> q) -> p", "--polarity", "-", "--verify-bound", "2",
            "--emit", "json")
    assert run(*args)[1] == run(*args)[1]
    args = ("prove", "--emit", "json", "[](p & q), q -> r => []q & r | p")
    assert run(*args)[1] == run(*args)[1]


def test_verify_suites():
    code, text = run("verify", "--suite", "equivalence", "--weight-bound", "3")
    doc = json.loads(text)
    assert code == 0 and doc["disagreements"] == [] and doc["sequents"] > 0
    code, text = run("verify", "--suite", "admissibility", "--samples", "20",
                     "--weight-bound", "4")
    assert code == 0
    code, text = run("verify", "--suite", "ulip", "--weight-bound", "2", "--context-bound", "3")
    assert code == 0 and json.loads(text)["violations"] == []


def test_corpus(tmp_path):
    corpus = tmp_path / "seqs.txt"
    corpus.write_text("# comment\np => p\n[]p, []q => [](p & q)\np -> \n")
    report = tmp_path / "out.jsonl"
    code, text = run("verify", "--suite", "equivalence", "--corpus", str(corpus),
                     "--report", str(report))
    rows = [json.loads(line) for line in report.read_text().splitlines()]
    assert code == 1  # the malformed line counts as a failure
    assert [r.get("line") for r in rows[:3]] == [2, 3, 4]
    assert rows[0]["ok"] and rows[1]["ok"] and not rows[2]["ok"]
    assert json.loads(text) == {"suite": "equivalence", "items": 3, "failed": 1}


def test_persistent_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("IMULIP_CACHE_DIR", str(tmp_path))
    assert run("prove", "p & q => q")[0] == 0
    store = (tmp_path / "g4.tsv").read_text()
    assert "p & q => q\t1" in store
    assert run("prove", "p & q => q")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "imulip", "prove", "p => p"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Ax" in proc.stdout


def test_selftest():
    code, text = run("selftest")
    assert code == 0
    assert text.count("PASS") == 5
