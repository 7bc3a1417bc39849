import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

TREES = Path(__file__).resolve().parent.parent / "demos" / "trees"


def run_cli(*argv, env_mode=None):
    env = dict(os.environ)
    if env_mode:
        env["VLMC_NUMERIC_MODE"] = env_mode
    proc = subprocess.run(
        [sys.executable, "-m", "vlmc.cli", *argv],
        capture_output=True,
        text=True,
        env=env,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_validate_comb():
    rc, out, _ = run_cli("validate", str(TREES / "comb_half.json"))
    assert rc == 0
    assert "height inf" in out
    assert "['1']" in out  # minimal contexts


def test_validate_bad_tree(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"finite_contexts": [{"word": "0", "q0": "0.5"}]}))
    rc, _, err = run_cli("validate", str(bad))
    assert rc == 1 and "validation error" in err


def test_missing_file_is_io_error():
    rc, _, err = run_cli("validate", "no-such-file.json")
    assert rc == 3


def test_stationary_four_flower():
    rc, out, _ = run_cli("stationary", str(TREES / "four_flower.json"))
    assert rc == 0
    doc = json.loads(out)
    assert doc["pi"]["1"] == "100/167"
    assert doc["case"] == "finite-tree"


def test_stationary_reducible_needs_parameter(tmp_path):
    spec = {
        "numeric_mode": "rational",
        "infinite_branches": [
            {"period": "0", "family": {"kind": "constant", "p": "0.5"},
             "q_infinite_leaf_0": "1"}
        ],
    }
    f = tmp_path / "red.json"
    f.write_text(json.dumps(spec))
    rc, _, err = run_cli("stationary", str(f))
    assert rc == 2 and "MissingParameter" in err
    rc, out, _ = run_cli("stationary", str(f), "--a", "1/3")
    assert rc == 0
    assert json.loads(out)["case"] == "reducible-family"


def test_simulate_deterministic():
    rc1, out1, _ = run_cli(
        "simulate", str(TREES / "bamboo_half.json"), "--n", "64", "--seed", "9",
        "--no-report",
    )
    rc2, out2, _ = run_cli(
        "simulate", str(TREES / "bamboo_half.json"), "--n", "64", "--seed", "9",
        "--no-report",
    )
    assert rc1 == rc2 == 0 and out1 == out2
    seq = out1.splitlines()[0]
    assert len(seq) == 64 and set(seq) <= {"0", "1"}


def test_map_export_csv():
    rc, out, err = run_cli("map-export", str(TREES / "four_flower.json"), "--depth", "5")
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0].keys() == {"word", "left", "right", "slope", "target_left", "target_right"}
    words = {r["word"] for r in rows}
    assert "000" in words and "11" in words
    sl = next(r for r in rows if r["word"] == "000")
    assert sl["slope"] == "5/2"


def test_orbit_csv():
    rc, out, _ = run_cli(
        "orbit", str(TREES / "comb_half.json"), "--x", "3/4", "--n", "4", "--depth", "10"
    )
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["n"] for r in rows] == ["0", "1", "2", "3"]
    assert rows[0]["x_n"] == "3/4" and rows[0]["Y_n"] == "1"


def test_dirichlet_csv_and_pole():
    rc, out, _ = run_cli(
        "dirichlet", str(TREES / "comb_half.json"), "--s", "2", "--oracle-maxlen", "8"
    )
    assert rc == 0
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert row["value"] == "2" and row["oracle_partial"] == "255/256"
    rc, _, err = run_cli("dirichlet", str(TREES / "comb_half.json"), "--s", "1")
    assert rc == 2 and "PoleAt" in err


def test_dirichlet_grid():
    rc, out, _ = run_cli(
        "dirichlet", str(TREES / "comb_half.json"), "--grid", "2:3:0.5"
    )
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["s"] for r in rows] == ["2.0", "2.5", "3.0"]


def test_occurrence_csv_with_oracle():
    rc, out, _ = run_cli(
        "occurrence", str(TREES / "comb_half.json"), "--word", "101", "--r", "2",
        "--nmax", "12", "--oracle",
    )
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(r["abs_diff"] == "0" for r in rows)


def test_occurrence_internal_node_exit_2():
    rc, _, err = run_cli(
        "occurrence", str(TREES / "comb_half.json"), "--word", "000", "--nmax", "6"
    )
    assert rc == 2 and "InternalNodeWord" in err


def test_tree_flag_alias():
    rc, out, _ = run_cli("validate", "--tree", str(TREES / "comb_half.json"))
    assert rc == 0


def test_numeric_mode_env_override(tmp_path):
    spec = {
        "finite_contexts": [
            {"word": "0", "q0": "0.4"},
            {"word": "1", "q0": "0.7"},
        ]
    }
    f = tmp_path / "t.json"
    f.write_text(json.dumps(spec))
    rc, out, _ = run_cli("stationary", str(f), env_mode="float")
    assert rc == 0
    assert "/" not in json.loads(out)["pi"]["1"]  # float formatting


def test_check_runs_green():
    rc, out, _ = run_cli("check", str(TREES / "four_flower.json"), "--depth", "6")
    assert rc == 0
    assert "FAIL" not in out
