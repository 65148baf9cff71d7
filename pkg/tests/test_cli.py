import csv
import io
import json
import subprocess
import sys

import pytest

from tcand.cli import main
from tcand.fd import parse_instance
from tcand.generators import gen_gap_instance
from tcand.solve import RAND_RETRIES, applicable, run_mode

CHAIN = "a -> b\nb -> c\ntarget: c\n"


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def chain_file(tmp_path):
    p = tmp_path / "chain.fd"
    p.write_text(CHAIN)
    return str(p)


@pytest.fixture
def gap_file(tmp_path):
    p = tmp_path / "gap.fd"
    assert run(["gen", "gap", "--g", "5", "--rounds", "2", "--out", str(p)])[0] == 0
    return str(p)


def test_closure_full(chain_file):
    code, text = run(["closure", chain_file, "--attrs", "a"])
    assert code == 0
    data = json.loads(text)
    assert data["closure"] == ["a", "b", "c"]
    assert data["input"] == ["a"] and data["schema_version"] == 1


def test_closure_bounded(chain_file):
    code, text = run(["closure", chain_file, "--attrs", "a", "--rounds", "1"])
    assert json.loads(text)["closure"] == ["a", "b"]


def test_closure_empty(tmp_path):
    p = tmp_path / "empty.fd"
    p.write_text("")
    code, text = run(["closure", str(p)])
    assert code == 0 and json.loads(text)["closure"] == []


def test_closure_unknown_attribute(chain_file):
    assert run(["closure", chain_file, "--attrs", "zz"])[0] == 3


def test_parse_error_exit_code(tmp_path):
    p = tmp_path / "bad.fd"
    p.write_text("a b ->\n")
    assert run(["solve", str(p)])[0] == 2
    assert run(["closure", str(tmp_path / "missing.fd")])[0] == 2


def test_solve_gap_exact(gap_file):
    code, text = run(["solve", gap_file, "--mode", "exact"])
    data = json.loads(text)
    assert code == 0 and data["size"] == 5 and data["feasible"]
    for key in ("schema_version", "mode", "solution", "size", "feasible", "lp_bound", "ratio_vs_lp", "elapsed_ms"):
        assert key in data


def test_solve_gap_lp_det(gap_file):
    data = json.loads(run(["solve", gap_file, "--mode", "lp-det"])[1])
    assert data["feasible"]
    assert data["size"] <= 9 * data["lp_bound"] + 1e-6


def test_solve_simple_chain(chain_file):
    data = json.loads(run(["solve", chain_file, "--mode", "simple"])[1])
    assert data["size"] == 1 and data["solution"] == ["a"]


def test_mode_preconditions(gap_file, tmp_path):
    assert run(["solve", gap_file, "--mode", "simple"])[0] == 3
    assert run(["solve", gap_file, "--mode", "rbsc-greedy"])[0] == 3
    big = tmp_path / "big.fd"
    big.write_text("target: " + " ".join(f"a{i}" for i in range(30)) + "\n")
    assert run(["solve", str(big), "--mode", "exact"])[0] == 3
    assert run(["solve", gap_file, "--c", "0.5", "--mode", "lp-rand"])[0] == 3


def test_compare_tabulates_against_exact(gap_file):
    code, text = run(["solve", gap_file, "--compare"])
    data = json.loads(text)
    assert code == 0 and data["exact"] == 5
    modes = [r["mode"] for r in data["results"]]
    assert modes == ["exact", "lp-det", "lp-rand"]
    assert all(r["feasible"] and r["ratio_vs_exact"] >= 1 for r in data["results"])
    code, text = run(["solve", gap_file, "--compare", "--pretty"])
    assert code == 0 and text.splitlines()[0].startswith("mode")


def test_solve_rbsc_file(tmp_path):
    p = tmp_path / "rb.txt"
    p.write_text("red: r1 r2\nblue: b1 b2\nset: r1 b1 b2\nset: b1\nset: r2 b2\n")
    data = json.loads(run(["solve", str(p), "--mode", "exact"])[1])
    assert data["red_cost"] == 1 and data["feasible"]
    data = json.loads(run(["solve", str(p), "--compare"])[1])
    assert [r["red_cost"] for r in data["results"]][0] == 1
    assert all(r["feasible"] for r in data["results"])
    assert run(["solve", str(p), "--mode", "simple"])[0] == 3


def test_gen_outputs(tmp_path):
    code, text = run(["gen", "gap", "--g", "5", "--rounds", "1"])
    assert code == 0 and sum("->" in line for line in text.splitlines()) == 10
    code, text = run(["gen", "vc", "--edges", "0-1,1-2,0-2"])
    inst = parse_instance(text)
    assert inst.n == 6 and len(inst.fds) == 6
    a = run(["gen", "random", "--seed", "7"])[1]
    b = run(["gen", "random", "--seed", "7"])[1]
    assert a == b
    assert run(["gen", "vc"])[0] == 3
    assert run(["gen", "vc", "--edges", "0_1"])[0] == 2
    assert run(["gen", "gap", "--g", "2"])[0] == 3


def test_gen_vc_edge_file(tmp_path):
    edges = tmp_path / "edges.txt"
    edges.write_text("u-v\nv-w\n")
    out = tmp_path / "vc.fd"
    assert run(["gen", "vc", "--edge-file", str(edges), "--out", str(out)])[0] == 0
    assert parse_instance(out.read_text()).targets


def test_bench_repeat_and_outputs(tmp_path):
    csv_path = tmp_path / "vc.csv"
    code, text = run(["bench", "vc", "--repeat", "3", "--csv", str(csv_path), "--plot-dir", str(tmp_path / "figs")])
    data = json.loads(text)
    assert code == 0 and data["schema_version"] == 1 and data["suite"] == "vc"
    assert all(len(r["times_ms"]) == 3 for r in data["rows"])
    rows = list(csv.DictReader(csv_path.open()))
    assert len(rows) == len(data["rows"])
    assert {"instance", "mode", "size", "ratio_vs_lp"} <= set(rows[0])
    for fig in data["figures"]:
        with open(fig, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"


def test_bench_gap_ratios():
    data = json.loads(run(["bench", "gap"])[1])
    for r in data["rows"]:
        assert r["ip_lp_ratio"] >= 2 ** r["rounds"] - 1e-3


def test_bench_random_small_all_feasible():
    code, text = run(["bench", "random-small", "--pretty"])
    assert code == 0 and "instance" in text.splitlines()[0]


def test_run_mode_lp_rand_records_attempts():
    inst = gen_gap_instance(5, 1)
    res = run_mode(inst, "lp-rand", seed=4)
    assert res.feasible
    assert 1 <= res.extra["attempts"] <= RAND_RETRIES
    assert applicable(inst, "rbsc-greedy") and not applicable(inst, "simple")


def test_module_entry_point(chain_file):
    proc = subprocess.run(
        [sys.executable, "-m", "tcand", "closure", chain_file, "--attrs", "a", "b"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["closure"] == ["a", "b", "c"]


def test_failed_randomized_run_exits_4(gap_file, monkeypatch):
    import tcand.solve as solve

    monkeypatch.setattr(solve, "round_randomized_d", lambda inst, seed, c: frozenset())
    code, text = run(["solve", gap_file, "--mode", "lp-rand"])
    data = json.loads(text)
    assert code == 4 and not data["feasible"] and data["attempts"] == RAND_RETRIES


def test_solver_error_exits_5(gap_file, monkeypatch):
    import tcand.cli as cli
    from tcand.errors import SolverError

    def boom(*args, **kwargs):
        raise SolverError("iteration limit")

    monkeypatch.setattr(cli, "run_mode", boom)
    assert run(["solve", gap_file, "--mode", "lp-det"])[0] == 5
