import io
import json
import os
import subprocess
import sys

import pytest

from conftest import GOLDEN
from ratdigits import cli, verify
from ratdigits.verify import VerifyReport


def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out.strip(), err


def _load(name):
    with open(os.path.join(GOLDEN, name)) as fh:
        return json.load(fh)


# -------------------------------------------------------------- expand

def test_small_expansion_rows(capsys):
    for w, digits in _load("small_expansions.json")["rows"].items():
        assert run(capsys, "--field", "2", "-P", "X^2+1", "-Q", "X", "expand", w)[:2] == (0, digits)


def test_expand_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "expand", "X^2+X")
    assert code == 0
    d = json.loads(out)
    assert d["digits"] == ["X", "X+1", "X+1"] and d["base"] == {"P": "X^2+1", "Q": "X"}


def test_options_after_subcommand(capsys):
    assert run(capsys, "expand", "X", "--field", "3")[:2] == (0, "X,2")
    assert run(capsys, "expand", "X^2+X", "--format", "json")[0] == 0


# -------------------------------------------------------------- series-expand

def test_reference_series_example(capsys):
    g = _load("series_example.json")
    for part in ("alpha", "floor", "frac"):
        extra = [] if part == "alpha" else ["--part", part]
        code, out, _ = run(capsys, "series-expand", g["series"], "--digits", "10", *extra)
        assert (code, out) == (0, g[part])


def test_zero_series(capsys):
    assert run(capsys, "series-expand", "0", "--digits", "5")[:2] == (0, "0.0,0,0,0,0")


def test_integer_part_matches_expand(capsys):
    _, whole, _ = run(capsys, "expand", "X^2+X")
    _, series, _ = run(capsys, "series-expand", "X^2+X", "--digits", "3")
    assert series.split(".")[0] == whole


def test_series_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("; periodic(|1)\n"))
    assert run(capsys, "series-expand", "-", "--digits", "4")[:2] == (0, ".X,X+1,X+1,0")


# -------------------------------------------------------------- machines

def test_substitution_terms(capsys):
    code, out, _ = run(capsys, "machine", "substitution", "--terms", "23")
    indices = _load("substitution_fixed_point.json")["indices"]
    names = ["0", "1", "X", "X+1"]
    assert code == 0 and out == ",".join(names[i] for i in indices)


def test_machine_runs(capsys):
    assert run(capsys, "machine", "mulx", "--run", "X,1,X")[:2] == (0, "X,1,0,1")
    assert run(capsys, "machine", "s0-dfao", "--run", "X^2+X")[:2] == (0, "X+1")
    assert run(capsys, "machine", "sm-dfao", "--m", "1", "--run", "X^3")[:2] == (0, "0")


def test_mulx_dot(capsys):
    code, out, _ = run(capsys, "machine", "mulx", "--export-dot")
    assert code == 0 and out.startswith("digraph mulx {") and out.endswith("}")
    assert out.count("shape=circle") == 2


def test_machine_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "machine", "mulx")
    assert code == 0
    assert set(json.loads(out)) == {"states", "initial", "transitions", "end_outputs"}


# -------------------------------------------------------------- verify

@pytest.mark.parametrize("suite", sorted(verify.SUITES))
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", suite)
    assert code == 0 and out.startswith(f"{suite}: pass")


def test_verify_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "graph", "--depth", "3")
    d = json.loads(out)
    assert code == 0 and d["passed"] and d["details"]["arity"] == 2 and d["details"]["self_loops"] == ["0"]


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(verify, "check_graph", lambda ds, depth: VerifyReport("graph", False, 1, ["boom"]))
    code, out, _ = run(capsys, "verify", "graph")
    assert code == 5 and "FAIL" in out and "boom" in out


# -------------------------------------------------------------- mahler, kernel, graph

def test_mahler(capsys):
    code, out, _ = run(capsys, "mahler", "; periodic(|1,0,1)", "--depth", "20")
    assert code == 0 and out.startswith("minimal-from")
    code, out, _ = run(capsys, "--format", "json", "mahler", "; periodic(|1,0,1)", "--depth", "6")
    d = json.loads(out)
    assert d["verdict"] == "minimal-from" and len(d["rows"]) == 7
    assert all(row["in_Y"] for row in d["rows"][d["index"]:])


def test_kernel_verdicts(capsys):
    frozen = _load("kernel_profiles.json")["f2"]
    code, out, _ = run(capsys, "--format", "json", "kernel", "powers-of-two")
    assert code == 0 and json.loads(out) == frozen["powers-of-two"]
    code, out, _ = run(capsys, "kernel", "squares", "--depth", "4096", "--max-e", "6")
    assert code == 0 and out.splitlines()[-1] == "growing-so-far"


def test_kernel_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "kernel", "squares", "--depth", "256", "--max-e", "3")
    assert code == 0 and out.splitlines()[:2] == ["e,depth,classes", "0,8,1"]


def test_graph_bn(capsys):
    assert run(capsys, "graph", "--bn", "5")[:2] == (0, "0\n1\nX\nX+1\nX^2+1")


# -------------------------------------------------------------- errors and budgets

def test_exit_codes(capsys):
    assert run(capsys, "expand", "X^^")[0] == 2
    assert run(capsys, "-P", "X", "-Q", "X^2", "expand", "1")[0] == 3
    assert run(capsys, "--field", "4", "expand", "1")[0] == 3
    assert run(capsys, "--budget", "3", "graph", "--depth", "6")[0] == 4
    assert run(capsys, "--budget", "0", "expand", "1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("RATDIGITS_BUDGET", "3")
    code, _, err = run(capsys, "graph", "--depth", "6")
    assert code == 4 and "budget 3" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ratdigits", "expand", "X^2+1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "X,1,0"
