"""Tests for the molsplit CLI commands and exit codes."""

from __future__ import annotations

import itertools
import json
from pathlib import Path
from unittest.mock import patch

import pandas as pd
import pytest
from click.testing import CliRunner

from molsplit.cli import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, EXIT_TIME_BUDGET, cli, run
from molsplit.errors import TimeBudgetError
from molsplit.molio.dataset import load_dataset, write_dataset
from molsplit.molio.fingerprint import Fingerprint
from molsplit.split import check_lo_manifest, load_manifest
from molsplit.synthetic import make_island_dataset

GOLDEN_DIR = Path(__file__).parent / "golden"

_A, _B, _HUB = "e000000000000000", "0038000000000000", "c030000000000000"

# two groups of three, joined only by a hub at similarity exactly 0.4
HUB_CSV = (
    "id,fp\n"
    + "".join(f"a{i},{_A}\n" for i in range(3))
    + "".join(f"b{i},{_B}\n" for i in range(3))
    + f"hub,{_HUB}\n"
)

# six analogs with a value std of 0.816, plus two unrelated molecules
LO_CSV = (
    "id,fp,value\n"
    + "".join(f"l{i},{_A},{v}\n" for i, v in enumerate(["5.0", "6.0", "7.0", "5.0", "6.0", "7.0"]))
    + "n0,0000080000000000,6.0\n"
    + "n1,0000000200000000,6.5\n"
)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def islands_csv(tmp_path):
    ds = make_island_dataset(n_islands=6, island_size=8, n_noise=0, seed=3)
    return str(write_dataset(ds, tmp_path / "islands.csv"))


@pytest.fixture
def lo_csv(tmp_path):
    ds = make_island_dataset(n_islands=5, island_size=(6, 12), n_noise=6, seed=2)
    return str(write_dataset(ds, tmp_path / "lo.csv"))


@pytest.fixture
def smiles_csv(tmp_path):
    path = tmp_path / "mols.csv"
    path.write_text(
        "id,smiles,value,label\n"
        "m1,CCO,6.5,1\n"
        "m2,c1ccccc1,5.0,0\n"
        "m3,CC(=O)O,7.2,1\n"
        "m4,CCN(CC)CC,4.9,0\n",
        encoding="utf-8",
    )
    return str(path)


@pytest.fixture
def path_problem(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({
        "vertices": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        "edges": [["a", "b"], ["b", "c"]],
        "k": 2,
        "bounds": [1, 1],
    }), encoding="utf-8")
    return str(path)


def _snapshot(directory: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


# -- molsplit (root) -------------------------------------------------------

class TestRoot:
    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "molsplit 0.1.0 (format 1)" in result.output

    def test_help_lists_commands(self, runner):
        result = runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        for name in ("hi-split", "lo-split", "greedy-split", "kcut-solve", "audit", "metrics", "circles"):
            assert name in result.output

    def test_run_help_is_ok(self, capsys):
        assert run(["hi-split", "--help"]) == EXIT_OK
        assert "--train-fraction" in capsys.readouterr().out


# -- exit codes ------------------------------------------------------------

class TestExitCodes:
    def test_missing_input_file(self, tmp_path, capsys):
        code = run(["hi-split", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o")])
        assert code == EXIT_INPUT
        assert "not found" in capsys.readouterr().err

    def test_bad_smiles_reports_line(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("id,smiles\na,CC\nb,C1CC\n", encoding="utf-8")
        assert run(["circles", "--in", str(path)]) == EXIT_INPUT
        assert "line 3" in capsys.readouterr().err

    def test_missing_required_option(self, capsys):
        assert run(["metrics", "--predictions", "x.csv"]) == EXIT_INPUT
        assert "--mode" in capsys.readouterr().err

    def test_bounds_with_train_fraction(self, islands_csv, tmp_path):
        code = run([
            "hi-split", "--in", islands_csv, "--out", str(tmp_path / "o"),
            "--bounds", "1,1", "--train-fraction", "0.9",
        ])
        assert code == EXIT_INPUT

    def test_bad_bounds_list(self, islands_csv, tmp_path):
        assert run(["hi-split", "--in", islands_csv, "--out", str(tmp_path / "o"), "--bounds", "1,x"]) == EXIT_INPUT

    def test_infeasible(self, tmp_path, capsys):
        path = tmp_path / "same.csv"
        fp = Fingerprint.from_indices([1, 2, 3], 64).to_hex()
        path.write_text("id,fp\n" + "".join(f"m{i},{fp}\n" for i in range(10)), encoding="utf-8")
        code = run(["hi-split", "--in", str(path), "--out", str(tmp_path / "o"), "--k", "2", "--time-budget", "5"])
        assert code == EXIT_INFEASIBLE
        assert "--slack" in capsys.readouterr().err

    @patch("molsplit.cli.solve_cmd.get_solver")
    def test_time_budget(self, mock_get_solver, path_problem, capsys):
        mock_get_solver.return_value.solve.side_effect = TimeBudgetError("time budget of 1s exhausted")
        assert run(["kcut-solve", "--problem", path_problem, "--time-budget", "1"]) == EXIT_TIME_BUDGET
        assert "exhausted" in capsys.readouterr().err

    def test_bad_threads_env(self, islands_csv, tmp_path, monkeypatch):
        monkeypatch.setenv("MOLSPLIT_THREADS", "many")
        assert run(["hi-split", "--in", islands_csv, "--out", str(tmp_path / "o")]) == EXIT_INPUT

    @pytest.mark.parametrize("content", [b"", b"smiles,value\nC\xffC,10\n"], ids=["empty", "not-utf8"])
    def test_unreadable_activity_file(self, tmp_path, capsys, content):
        raw = tmp_path / "raw.csv"
        raw.write_bytes(content)
        assert run(["preprocess", "--in", str(raw), "--out", str(tmp_path / "ds.csv")]) == EXIT_INPUT
        assert "cannot read CSV" in capsys.readouterr().err

    @pytest.mark.parametrize("content", [b"", b"id,truth,score\na\xff,1,0.5\n"], ids=["empty", "not-utf8"])
    def test_unreadable_predictions_file(self, tmp_path, capsys, content):
        pred = tmp_path / "pred.csv"
        pred.write_bytes(content)
        assert run(["metrics", "--predictions", str(pred), "--mode", "hi"]) == EXIT_INPUT
        assert "cannot read CSV" in capsys.readouterr().err


# -- molsplit fingerprint / preprocess --------------------------------------

class TestDataCommands:
    def test_fingerprint(self, runner, smiles_csv, tmp_path):
        out = tmp_path / "fp.csv"
        result = runner.invoke(cli, ["fingerprint", "--in", smiles_csv, "--out", str(out), "--nbits", "512"])
        assert result.exit_code == 0
        assert "Wrote 4 fingerprints (512 bits, radius 2)" in result.output
        direct = load_dataset(smiles_csv, nbits=512)
        assert (load_dataset(out).fingerprint_matrix == direct.fingerprint_matrix).all()

    def test_preprocess(self, runner, tmp_path):
        raw = tmp_path / "raw.csv"
        raw.write_text("smiles,value,relation\nCCO,100,=\nCCO,10,=\nCCN,50000,>\nCCC,20000,<\n", encoding="utf-8")
        out = tmp_path / "ds.csv"
        result = runner.invoke(cli, ["preprocess", "--in", str(raw), "--out", str(out)])
        assert result.exit_code == 0
        assert "Kept 2 of 4 rows" in result.output
        frame = pd.read_csv(out)
        assert frame["id"].tolist() == ["CCO", "CCN"]
        assert frame["label"].tolist() == [1, 0]


# -- molsplit hi-split / lo-split / greedy-split -----------------------------

class TestSplitCommands:
    def test_hi_split(self, runner, islands_csv, tmp_path):
        out = tmp_path / "hi"
        result = runner.invoke(cli, ["hi-split", "--in", islands_csv, "--out", str(out), "--k", "3", "--time-budget", "10"])
        assert result.exit_code == 0, result.output
        assert "Wrote 3 fold(s)" in result.output
        manifest = load_manifest(out)
        assert manifest.removed == []
        assert manifest.config["subcommand"] == "hi-split"
        assert manifest.config["bounds"] == [14, 14, 14]
        assert "threads" not in manifest.config

    def test_hi_split_train_fraction(self, runner, islands_csv, tmp_path):
        out = tmp_path / "hi90"
        result = runner.invoke(cli, [
            "hi-split", "--in", islands_csv, "--out", str(out), "--train-fraction", "0.9", "--time-budget", "10",
        ])
        assert result.exit_code == 0, result.output
        manifest = load_manifest(out)
        assert manifest.k == 1
        assert len(manifest.folds[0].train) > len(manifest.folds[0].test)

    def test_hi_split_is_byte_identical(self, islands_csv, tmp_path):
        out = tmp_path / "hi"
        args = ["hi-split", "--in", islands_csv, "--out", str(out), "--seed", "7", "--time-budget", "10"]
        assert run(args) == EXIT_OK
        first = _snapshot(out)
        assert run(args) == EXIT_OK
        assert _snapshot(out) == first

    def test_lo_split(self, runner, lo_csv, tmp_path):
        out = tmp_path / "lo"
        result = runner.invoke(cli, ["lo-split", "--in", lo_csv, "--out", str(out)])
        assert result.exit_code == 0, result.output
        manifest = load_manifest(out)
        assert manifest.clusters
        assert check_lo_manifest(manifest, load_dataset(lo_csv)) == []
        test = pd.read_csv(out / "test_1.csv")
        assert "cluster" in test.columns
        assert manifest.config["extra"]["std_threshold"] == 0.6

    def test_lo_split_three_folds_is_byte_identical(self, lo_csv, tmp_path):
        out = tmp_path / "lo3"
        args = ["lo-split", "--in", lo_csv, "--out", str(out), "--folds", "3", "--seed", "0", "--assay", "pic50"]
        assert run(args) == EXIT_OK
        first = _snapshot(out)
        assert "test_3.csv" in first
        assert run(args) == EXIT_OK
        assert _snapshot(out) == first

    def test_greedy_split(self, runner, islands_csv, tmp_path):
        out = tmp_path / "greedy"
        result = runner.invoke(cli, ["greedy-split", "--in", islands_csv, "--out", str(out), "--seed", "1"])
        assert result.exit_code == 0, result.output
        manifest = load_manifest(out)
        assert manifest.parameters["initial_partition"] == "seeded-random"
        assert manifest.n_removed > 0

    def test_hi_split_edge_export(self, runner, tmp_path):
        data = tmp_path / "hub.csv"
        data.write_text(HUB_CSV, encoding="utf-8")
        edges = tmp_path / "edges.csv"
        result = runner.invoke(cli, [
            "hi-split", "--in", str(data), "--out", str(tmp_path / "hi"), "--k", "2", "--bounds", "3,3",
            "--edges", str(edges),
        ])
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(edges)
        assert list(frame.columns) == ["u", "v", "similarity"]
        assert len(frame) == 12
        assert (frame["u"] < frame["v"]).all()
        assert frame["similarity"].min() == pytest.approx(0.4)

    def test_hi_split_node_limit_is_recorded_and_repeatable(self, islands_csv, tmp_path):
        out = tmp_path / "hi"
        args = ["hi-split", "--in", islands_csv, "--out", str(out), "--node-limit", "5"]
        assert run(args) == EXIT_OK
        manifest = load_manifest(out)
        assert manifest.parameters["node_limit"] == 5
        assert manifest.parameters["reproducible"] is True
        assert manifest.config["extra"]["node_limit"] == 5
        first = _snapshot(out)
        assert run(args) == EXIT_OK
        assert _snapshot(out) == first

    @patch("molsplit.kcut.bnb._CHECK_EVERY", 1)
    def test_hi_split_warns_when_clock_stops_search(self, tmp_path, capsys):
        data = tmp_path / "hub.csv"
        data.write_text(HUB_CSV, encoding="utf-8")
        args = [
            "hi-split", "--in", str(data), "--out", str(tmp_path / "hi"), "--k", "2", "--bounds", "3,3",
            "--time-budget", "1",
        ]
        with patch("molsplit.kcut.bnb.time.monotonic", side_effect=itertools.count(0.0, 10.0)):
            assert run(args) == EXIT_OK
        assert "--node-limit" in capsys.readouterr().err
        manifest = load_manifest(tmp_path / "hi")
        assert manifest.parameters["reproducible"] is False
        assert manifest.parameters["optimal"] is False
        assert manifest.removed == ["hub"]


# -- molsplit kcut-solve ----------------------------------------------------

class TestKcutSolve:
    def test_json_output(self, runner, path_problem):
        result = runner.invoke(cli, ["kcut-solve", "--problem", path_problem])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data["kept_weight"] == 2
        assert data["removed"] == ["b"]
        assert data["optimal"] is True
        assert data["verification"]["ok"] is True
        assert data["config"]["extra"] == {"solver": "bnb", "node_limit": None}
        assert data["timed_out"] is False

    def test_out_file_matches_stdout(self, runner, path_problem, tmp_path):
        out = tmp_path / "sol.json"
        result = runner.invoke(cli, ["kcut-solve", "--problem", path_problem, "--solver", "brute", "--out", str(out)])
        assert result.exit_code == 0
        assert out.read_text(encoding="utf-8") == result.output

    def test_deterministic_stdout(self, runner, path_problem):
        first = runner.invoke(cli, ["kcut-solve", "--problem", path_problem]).output
        assert runner.invoke(cli, ["kcut-solve", "--problem", path_problem]).output == first

    def test_text_output(self, runner, path_problem):
        result = runner.invoke(cli, ["kcut-solve", "--problem", path_problem, "-o", "text"])
        assert result.exit_code == 0
        assert "kept weight" in result.output.lower()


# -- molsplit audit / metrics / circles / compare ----------------------------

class TestEvalCommands:
    def test_audit_hi_fold(self, runner, islands_csv, tmp_path):
        out = tmp_path / "hi"
        assert run(["hi-split", "--in", islands_csv, "--out", str(out), "--time-budget", "10"]) == EXIT_OK
        result = runner.invoke(cli, [
            "audit", "--train", str(out / "train_1.csv"), "--test", str(out / "test_1.csv"),
            "--out", str(tmp_path / "audit"),
        ])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data["n_leaking"] == 0
        assert data["n_test"] == 16
        assert (tmp_path / "audit" / "histogram.csv").is_file()

    def test_audit_self_leaks(self, runner, islands_csv):
        result = runner.invoke(cli, ["audit", "--train", islands_csv, "--test", islands_csv, "-o", "text"])
        assert result.exit_code == 0
        assert "100.0%" in result.output or "1.0" in result.output

    def test_metrics_hi(self, runner, tmp_path):
        pred = tmp_path / "pred.csv"
        pred.write_text("id,truth,score\na,1,4\nb,0,3\nc,1,2\nd,0,1\n", encoding="utf-8")
        result = runner.invoke(cli, ["metrics", "--predictions", str(pred), "-m", "hi"])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert abs(data["value"] - 5 / 6) < 1e-12
        assert data["dummy_baseline"] == 0.5

    def test_metrics_lo_degenerate(self, tmp_path, capsys):
        pred = tmp_path / "pred.csv"
        pred.write_text("id,truth,score,cluster\na,5,1,c\nb,5,2,c\n", encoding="utf-8")
        assert run(["metrics", "--predictions", str(pred), "--mode", "lo"]) == EXIT_INPUT
        assert "non-constant" in capsys.readouterr().err

    def test_circles(self, runner, islands_csv):
        result = runner.invoke(cli, ["circles", "--in", islands_csv, "--threshold", "0.4"])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data["n_circles"] == 6
        assert data["n_molecules"] == 48
        assert data["representatives"][0] == "isl0_0"

    def test_compare(self, runner, tmp_path):
        ds = make_island_dataset(n_islands=6, island_size=(10, 20), n_noise=15, seed=4)
        path = write_dataset(ds, tmp_path / "cmp.csv")
        result = runner.invoke(cli, ["compare", "--in", str(path), "--time-budget", "5"])
        assert result.exit_code == 0, result.output
        greedy, hi = json.loads(result.output)["results"]
        assert hi["n_removed"] <= greedy["n_removed"]


# -- golden outputs ----------------------------------------------------------

class TestGoldenOutputs:
    def test_kcut_solve(self, path_problem, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert run(["kcut-solve", "--problem", "p.json", "--out", "sol.json"]) == EXIT_OK
        assert (tmp_path / "sol.json").read_bytes() == (GOLDEN_DIR / "kcut_path" / "sol.json").read_bytes()

    def test_hi_split(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "hub.csv").write_text(HUB_CSV, encoding="utf-8")
        assert run(["hi-split", "--in", "hub.csv", "--out", "hi", "--k", "2", "--bounds", "3,3"]) == EXIT_OK
        assert _snapshot(tmp_path / "hi") == _snapshot(GOLDEN_DIR / "hi_hub")

    def test_lo_split(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "lo.csv").write_text(LO_CSV, encoding="utf-8")
        assert run(["lo-split", "--in", "lo.csv", "--out", "lo"]) == EXIT_OK
        assert _snapshot(tmp_path / "lo") == _snapshot(GOLDEN_DIR / "lo_cluster")
