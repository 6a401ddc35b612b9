"""Command line behavior: formats, exit codes, reproducibility."""

import json
import subprocess
import sys

import pytest

from corrbits.cli import main
from corrbits.protocol import load_code


def run_cli(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def without_wall_time(text):
    d = json.loads(text)
    d["results"].pop("wall_time", None)
    return json.dumps(d, sort_keys=True)


class TestSimulate:
    def test_json_report(self, capsys):
        rc, out, err = run_cli(
            capsys,
            ["simulate", "--k", "4", "--n", "64", "--eps", "0.1",
             "--trials", "2000", "--seed", "3"],
        )
        assert rc == 0 and err == ""
        d = json.loads(out)
        assert set(d) == {"config", "results", "bounds", "checks"}
        assert d["config"]["protocol"] == "affine"
        assert d["results"]["trials"] == 2000
        assert 0 <= d["results"]["agreements"] <= 2000
        assert d["bounds"]["lower_bound_ref"] is None

    def test_csv_report(self, capsys):
        rc, out, _ = run_cli(
            capsys,
            ["simulate", "--k", "3", "--n", "48", "--eps", "0.2",
             "--trials", "500", "--protocol", "trivial", "--format", "csv"],
        )
        assert rc == 0
        header, row = out.splitlines()
        assert len(header.split(",")) == len(row.split(","))
        assert "estimate" in header.split(",")

    def test_default_dimension_is_64k(self, capsys):
        rc, out, _ = run_cli(
            capsys,
            ["simulate", "--k", "4", "--eps", "0.1", "--trials", "100",
             "--protocol", "trivial"],
        )
        assert rc == 0
        assert json.loads(out)["config"]["n"] == 256

    def test_stop_after(self, capsys):
        rc, out, _ = run_cli(
            capsys,
            ["simulate", "--k", "4", "--n", "64", "--eps", "0.1",
             "--trials", "1000000", "--stop-after", "40", "--seed", "2"],
        )
        assert rc == 0
        d = json.loads(out)
        assert d["results"]["agreements"] == 40
        assert d["config"]["stop_after_agreements"] == 40

    def test_worker_count_never_changes_the_report(self, capsys):
        texts = []
        for workers in ("1", "2"):
            rc, out, _ = run_cli(
                capsys,
                ["simulate", "--k", "4", "--n", "64", "--eps", "0.1",
                 "--trials", "5000", "--seed", "11", "--workers", workers],
            )
            assert rc == 0
            texts.append(without_wall_time(out))
        assert texts[0] == texts[1]

    def test_validation_exit_code(self, capsys):
        rc, out, err = run_cli(
            capsys, ["simulate", "--k", "4", "--n", "64", "--eps", "0.7"]
        )
        assert rc == 2 and out == "" and "error" in err

    def test_resource_cap_exit_code(self, capsys):
        rc, _, err = run_cli(
            capsys,
            ["simulate", "--k", "25", "--n", "1600", "--eps", "0.1", "--trials", "10"],
        )
        assert rc == 3 and "cap" in err

    def test_out_writes_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        rc, out, _ = run_cli(
            capsys,
            ["simulate", "--k", "3", "--n", "48", "--eps", "0.1",
             "--trials", "200", "--out", str(target)],
        )
        assert rc == 0 and out == ""
        assert json.loads(target.read_text())["results"]["trials"] == 200

    def test_codebook_file_cycle(self, capsys, tmp_path):
        book = tmp_path / "book.afc"
        argv = ["simulate", "--k", "4", "--n", "64", "--eps", "0.1",
                "--trials", "400", "--seed", "5", "--codebook", str(book)]
        rc, first, _ = run_cli(capsys, argv)
        assert rc == 0 and book.exists()
        rc, second, _ = run_cli(capsys, argv)
        assert rc == 0
        assert without_wall_time(first) == without_wall_time(second)


class TestCover:
    def test_json_report(self, capsys):
        rc, out, _ = run_cli(
            capsys,
            ["cover", "--k", "4", "--n", "64", "--eps", "0.2",
             "--trials", "2000", "--seed", "1"],
        )
        assert rc == 0
        d = json.loads(out)
        assert d["checks"]["covering_implies_agreement"] is True
        assert 0.0 <= d["results"]["estimate"] <= 1.0
        assert d["bounds"]["analytic_target"] > 0

    def test_worker_independence(self, capsys):
        texts = []
        for workers in ("1", "2"):
            rc, out, _ = run_cli(
                capsys,
                ["cover", "--k", "4", "--n", "64", "--eps", "0.2",
                 "--trials", "3000", "--seed", "1", "--workers", workers],
            )
            assert rc == 0
            texts.append(without_wall_time(out))
        assert texts[0] == texts[1]


class TestAudit:
    def test_exhaustive_via_file(self, capsys, tmp_path):
        book = tmp_path / "b.afc"
        rc, _, _ = run_cli(
            capsys, ["codegen", "--k", "3", "--n", "12", "--seed", "5", "--out", str(book)]
        )
        assert rc == 0
        rc, out, _ = run_cli(capsys, ["audit", "--codebook", str(book), "--eps", "0.2"])
        assert rc == 0
        d = json.loads(out)
        assert d["config"]["mode"] == "exhaustive"
        assert d["results"]["marginal_counts_min"] == 512
        assert d["results"]["marginal_counts_max"] == 512
        assert d["results"]["conditional_max_deviation"] < 1e-12

    def test_sampled_mode(self, capsys, tmp_path):
        book = tmp_path / "b.afc"
        run_cli(capsys, ["codegen", "--k", "4", "--n", "64", "--out", str(book)])
        rc, out, _ = run_cli(
            capsys,
            ["audit", "--codebook", str(book), "--trials", "2000", "--eps", "0.1"],
        )
        assert rc == 0
        d = json.loads(out)
        assert d["config"]["mode"] == "sampled"
        assert d["checks"]["chi_square_outputs"]["p_value"] > 1e-4

    def test_missing_file_is_a_validation_error(self, capsys, tmp_path):
        rc, _, err = run_cli(
            capsys, ["audit", "--codebook", str(tmp_path / "absent.afc")]
        )
        assert rc == 2 and "not found" in err


class TestTables:
    def test_bounds_csv_default_grid(self, capsys):
        rc, out, _ = run_cli(capsys, ["bounds"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "k,epsilon,trivial,upper,lower,t,condition_met"
        assert len(lines) == 26

    def test_bounds_json_custom_grid(self, capsys):
        rc, out, _ = run_cli(
            capsys, ["bounds", "--k", "16,24", "--eps", "0.25", "--format", "json"]
        )
        assert rc == 0
        rows = json.loads(out)["results"]["rows"]
        assert [r["k"] for r in rows] == [16, 24]
        assert all(r["condition_met"] for r in rows)

    def test_figure1(self, capsys):
        rc, out, _ = run_cli(capsys, ["figure1", "--points", "5"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "epsilon,extraction_ratio"
        assert len(lines) == 6
        rc, out, _ = run_cli(capsys, ["figure1", "--points", "3", "--format", "json"])
        rows = json.loads(out)["results"]["rows"]
        assert rows[-1][0] == 0.5

    def test_figure1_rejects_bad_points(self, capsys):
        rc, _, err = run_cli(capsys, ["figure1", "--points", "0"])
        assert rc == 2


class TestCodegenVerify:
    def test_codegen_writes_loadable_deterministic_file(self, capsys, tmp_path):
        a, b = tmp_path / "a.afc", tmp_path / "b.afc"
        rc, out, _ = run_cli(
            capsys, ["codegen", "--k", "4", "--n", "96", "--seed", "8", "--out", str(a)]
        )
        assert rc == 0
        d = json.loads(out)
        assert d["results"]["path"] == str(a)
        code = load_code(a)
        assert (code.n, code.k) == (96, 4)
        run_cli(capsys, ["codegen", "--k", "4", "--n", "96", "--seed", "8", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_verify_passes(self, capsys):
        rc, out, _ = run_cli(capsys, ["verify", "--trials", "5"])
        assert rc == 0
        d = json.loads(out)
        assert d["checks"]["all_passed"] is True
        assert d["results"]["equality_max_error"] < 1e-10


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "corrbits.cli", "bounds"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "k,epsilon,trivial,upper,lower,t,condition_met"
