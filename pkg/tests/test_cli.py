import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from adralg import cli
from adralg import endoalg as ea

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    try:
        code = cli.main([str(a) for a in argv])
    except SystemExit as exc:  # argparse exits directly on usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    data = json.loads(out)
    assert data["schema"] == 1
    return code, data


@pytest.mark.parametrize("name, expected", [
    ("branching.alg", "dim A = 9, m = 3"),
    ("loop.alg", "dim A = 5, m = 3"),
    ("truncated1.alg", "dim A = 1, m = 1"),
])
def test_basis(capsys, name, expected):
    code, out, _ = run(capsys, "basis", DATA / name)
    assert code == 0 and out.startswith(expected)


def test_basis_json(capsys):
    code, data = run_json(capsys, "basis", DATA / "branching.alg")
    assert code == 0 and data["command"] == "basis"
    assert data["dim"] == 9 and len(data["basis"]) == 9 and data["loewy_length"] == 3


def test_stratify_branching(capsys):
    code, data = run_json(capsys, "stratify", DATA / "branching.alg", DATA / "branching.mod")
    assert code == 0 and data["n_M"] == 4
    assert {k: set(v) for k, v in data["layers"].items()} == {
        "F_0,1": {"P(1)/S(4)", "P(1)/S(3)"},
        "F_0,2": {"P(1)"},
        "F_1,1": {"P(1)/P(1)J^2", "P(2)/S(3)"},
        "F_2,1": {"S(1)", "S(2)"},
    }
    code, out, _ = run(capsys, "stratify", DATA / "branching.alg", DATA / "branching.mod")
    assert "n_M = 4" in out and "F_0,2 = {P(1)}" in out


def test_stratify_star_and_simple(capsys, tmp_path):
    code, data = run_json(capsys, "stratify", DATA / "star3.alg", DATA / "star3.mod")
    assert data["n_M"] == 3
    mod = tmp_path / "s.mod"
    mod.write_text("local X = S 2\n")
    code, data = run_json(capsys, "stratify", DATA / "branching.alg", mod)
    assert data["n_M"] == 1 and data["catalog"] == ["X"]


def test_verify(capsys):
    ex = (DATA / "branching.alg", DATA / "branching.mod")
    lp = (DATA / "loop.alg", DATA / "loop.mod")
    assert run(capsys, "verify", *ex)[0] == 0
    code, out, _ = run(capsys, "verify", *lp, "--mode", "rejective")
    assert code == 1 and "FAILED" in out
    code, out, _ = run(capsys, "verify", *lp, "--mode", "rejective", "--search")
    assert code == 0
    assert "{P(1)} < {P(1)/P(1)J^2} < {P(1)/socP(1)} < {S(1), P(2)}" in out
    assert run(capsys, "verify", *ex, "--mode", "rejective")[0] == 0


def test_verify_total_scope(capsys):
    code, data = run_json(capsys, "verify", DATA / "loop.alg", DATA / "loop.mod", "--mode", "rejective",
                          "--scope", "total")
    assert code == 1 and data["report"]["kind"] == "total-rejective"


def test_gldim(capsys, tmp_path):
    code, out, _ = run(capsys, "gldim", DATA / "star4.alg", DATA / "star4.mod")
    assert code == 0 and out.startswith("gl B = 3, n_M = 4, classical bound 6")
    code, out, _ = run(capsys, "gldim", DATA / "truncated1.alg")
    assert code == 0 and out.startswith("gl B = 0")
    dump = tmp_path / "b.json"
    code, data = run_json(capsys, "gldim", DATA / "branching.alg", DATA / "branching.mod", "--dump-b", dump)
    assert code == 0 and data["gldim"] == 2 and data["dim_B"] == 20
    b = ea.BasicAlgebra.from_json(json.loads(dump.read_text()))
    assert b.dim == 20 and ea.global_dimension(b) == 2


def test_gldim_cap_is_invariant_violation(capsys):
    code, _, err = run(capsys, "gldim", DATA / "loop.alg", DATA / "loop.mod", "--resolution-cap", "1")
    assert code == 2 and "CapExceeded" in err


def test_thm2(capsys):
    code, out, _ = run(capsys, "thm2", DATA / "truncated4.alg")
    assert code == 0 and out.count("True") == 4
    code, data = run_json(capsys, "thm2", DATA / "branching.alg")
    assert all(data[k] for k in ("i", "ii", "iii", "iv"))
    assert sorted(data["J_decomposition"]) == ["P(2)", "S(3)", "S(4)"]
    code, data = run_json(capsys, "thm2", DATA / "kronecker.alg")
    assert code == 0 and data["agree"]
    code, out, _ = run(capsys, "thm2", DATA / "loop.alg")
    assert code == 0 and out.count("False") == 4 and "failing chain steps: 1" in out


def test_thm2_loewy_length_one(capsys):
    code, _, err = run(capsys, "thm2", DATA / "truncated1.alg")
    assert code == 65 and "LoewyLengthOne" in err


def test_qh(capsys):
    lp = (DATA / "loop.alg", DATA / "loop.mod")
    code, data = run_json(capsys, "qh", *lp, "--order", DATA / "loop.order")
    assert code == 0 and data["strong"]
    code, out, _ = run(capsys, "qh", *lp, "--order", DATA / "loop.order")
    assert "strongly quasi-hereditary: True" in out


def test_qh_adr_order_on_loop(capsys, tmp_path):
    order = tmp_path / "adr.order"
    order.write_text("order: {P(1)} < {P(1)/socP(1)} < {P(1)/P(1)J^2} < {S(1), P(2)}\n")
    lp = (DATA / "loop.alg", DATA / "loop.mod")
    assert run(capsys, "qh", *lp, "--order", order)[0] == 1
    assert run(capsys, "qh", *lp, "--order", order, "--side", "left")[0] == 0


def test_search_chain(capsys):
    code, data = run_json(capsys, "search-chain", DATA / "loop.alg", DATA / "loop.mod")
    assert code == 0 and data["found"] and data["strongly_qh"]
    code, _, err = run(capsys, "search-chain", DATA / "branching.alg", DATA / "branching.mod", "--bound", "3")
    assert code == 64 and "--bound" in err
    code, out, _ = run(capsys, "search-chain", DATA / "loop.alg")
    assert code == 1 and "no rejective chain" in out


def test_fuzz(capsys):
    code, data = run_json(capsys, "--seed", "1", "fuzz", "--count", "50")
    assert code == 0 and data["ok"] and data["failures"] == []
    assert all(data["passed"][k] + data["not_applicable"][k] == 50 for k in data["passed"])
    code, data = run_json(capsys, "fuzz", "--count", "0")
    assert code == 0 and data["ok"] and set(data["passed"].values()) == {0}


def test_fuzz_replay_is_deterministic(capsys):
    a = run(capsys, "--seed", "3", "fuzz", "--count", "5", "--suite", "four-way")
    b = run(capsys, "--seed", "3", "fuzz", "--count", "5", "--suite", "four-way")
    assert a[0] == 0 and a[1] == b[1]
    code, out, _ = run(capsys, "--seed", "3", "fuzz", "--suite", "radical-quotients-in-add", "--replay", "2")
    assert code == 0 and out.strip() in ("pass", "not applicable")


@pytest.mark.parametrize("argv", [
    ["stratify", "branching.alg", "branching.mod"],
    ["gldim", "loop.alg", "loop.mod"],
    ["thm2", "branching.alg"],
])
def test_reports_are_byte_identical(capsys, argv):
    args = ["--json"] + [str(DATA / a) if a.endswith((".alg", ".mod")) else a for a in argv]
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    assert json.loads(json.dumps(json.loads(first))) == json.loads(first)


def test_usage_errors(capsys):
    assert run(capsys)[0] == 64
    assert run(capsys, "nonsense")[0] == 64
    assert run(capsys, "--prime", "4", "basis", DATA / "loop.alg")[0] == 64
    assert run(capsys, "fuzz", "--count", "-1")[0] == 64


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("quiver\nvertices: 1\narrows:\n  a: 1 -> 9\n")
    code, _, err = run(capsys, "basis", bad)
    assert code == 65 and "bad.alg:" in err
    code, _, err = run(capsys, "basis", tmp_path / "missing.alg")
    assert code == 65
    mod = tmp_path / "m.mod"
    mod.write_text("local X = P 1\nmodule M = X + Y\n")
    code, _, err = run(capsys, "stratify", DATA / "branching.alg", mod)
    assert code == 65 and "m.mod:2:" in err


def test_console_script():
    exe = shutil.which("adralg")
    cmd = [exe] if exe else [sys.executable, "-m", "adralg.cli"]
    done = subprocess.run(cmd + ["basis", str(DATA / "branching.alg")], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout.startswith("dim A = 9, m = 3")
