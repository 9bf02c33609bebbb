"""Command line interface: subcommands, exit codes, atomic outputs."""

import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from airylab import (
    GridSpec,
    gaussian_field,
    read_field,
    symmetric_airy_norm,
    write_field,
)
from airylab.cli import main


def write_config(path, grid, extra=""):
    text = (
        "[grid]\n"
        f"n_points = {grid.n_points}\n"
        f"domain_length = {grid.domain_length}\n"
        f"t_count = {grid.t_count}\n"
        f"t_span = {grid.t_span}\n"
        f"band_fraction = {grid.band_fraction}\n"
    )
    path.write_text(text + extra)
    return str(path)


SMALL = GridSpec(256, 32.0, t_count=17, t_span=2.0)


@pytest.fixture
def small_cfg(tmp_path):
    return write_config(tmp_path / "grid.ini", SMALL)


def run(argv):
    return main([str(a) for a in argv])


class TestFieldCommands:
    @pytest.fixture
    def field_file(self, tmp_path):
        path = tmp_path / "input.fld"
        write_field(str(path), gaussian_field(SMALL, width=1.0))
        return path

    def test_propagate(self, tmp_path, small_cfg, field_file, capsys):
        code = run(["propagate", field_file, "--t", "0.5",
                    "--config", small_cfg, "--out", tmp_path / "o"])
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        assert record["l2"] == pytest.approx(1.0, abs=1e-10)
        prop = read_field(str(tmp_path / "o" / "propagated.fld"))
        assert prop.grid.n_points == SMALL.n_points

    def test_norm_matches_library(self, tmp_path, small_cfg, field_file, capsys):
        code = run(["norm", field_file, "--config", small_cfg,
                    "--out", tmp_path / "o"])
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        expected = symmetric_airy_norm(gaussian_field(SMALL, width=1.0))
        assert record["strichartz"] == pytest.approx(expected, rel=1e-12)
        on_disk = json.loads((tmp_path / "o" / "norm.json").read_text())
        assert on_disk == record

    def test_concentrate_csv(self, tmp_path, small_cfg, field_file, capsys):
        code = run(["concentrate", field_file, "--config", small_cfg,
                    "--out", tmp_path / "o"])
        assert code == 0
        with open(tmp_path / "o" / "concentration.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 1
        assert float(rows[0]["value"]) > 0
        assert float(rows[0]["interval_hi"]) > float(rows[0]["interval_lo"])

    def test_bad_exponent_exit_1_with_json_record(self, tmp_path, small_cfg,
                                                  field_file, capsys):
        out = tmp_path / "o"
        code = run(["norm", field_file, "--alpha", "0", "--q", "6", "--r", "6",
                    "--config", small_cfg, "--out", out])
        assert code == 1
        record = json.loads(capsys.readouterr().err)
        assert record["error"] == "InvalidExponentError"
        assert "message" in record
        # the failed run must not leave partial or temporary output behind
        assert not (out / "norm.json").exists()
        leftovers = [p for p in (tmp_path / "o").glob(".tmp-*")] \
            if out.exists() else []
        assert leftovers == []


class TestWhitneyAndSeparation:
    def test_whitney_check(self, tmp_path, capsys):
        code = run(["whitney-check", "--scale", "7", "--min-scale", "2",
                    "--out", tmp_path / "o"])
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        assert record["pairs"] == 324
        assert record["bounds_ok"] is True
        assert record["max_multiplicity"] == 9
        assert record["scales"] == [2, 3, 4]

    def test_separation_scores(self, tmp_path, capsys):
        code = run(["separation", "--a", "1,2,0,0,0", "--b", "1,2,0,1,0",
                    "--out", tmp_path / "o"])
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        assert record["branch"] == "space_time"
        assert record["score"] == pytest.approx(19.0)
        assert (tmp_path / "o" / "separation.csv").exists()

    def test_separation_bad_params_usage_error(self, tmp_path, capsys):
        code = run(["separation", "--a", "1,2", "--b", "1,2,0,1,0",
                    "--out", tmp_path / "o"])
        assert code == 2
        assert "usage error" in capsys.readouterr().err


class TestSynthExtractPipeline:
    def test_three_planted_bubbles_recovered(self, tmp_path, capsys):
        grid = GridSpec(16384, 256.0, t_count=65, t_span=10.0)
        amp = 1.0 / np.sqrt(3.0)
        cfg = write_config(tmp_path / "grid.ini", grid)
        out = tmp_path / "o"
        code = run(["synth", "--config", cfg, "--out", out, "--normalize",
                    "--bubble", f"4.0,5.0,0.0,{amp}",
                    "--bubble", f"4.0,45.0,0.0,{amp}",
                    "--bubble", f"4.0,95.0,0.0,{amp}"])
        assert code == 0
        field = read_field(str(out / "synth.fld"), t_count=grid.t_count,
                           t_span=grid.t_span)
        delta = 0.25 * symmetric_airy_norm(field)
        code = run(["extract", out / "synth.fld", "--delta", str(delta),
                    "--config", cfg, "--out", out])
        assert code == 0
        lines = (out / "extraction.jsonl").read_text().strip().splitlines()
        pieces = [json.loads(line) for line in lines[:-1]]
        summary = json.loads(lines[-1])
        assert len(pieces) == 3
        found = sorted(p["xi0"] for p in pieces)
        for got, want in zip(found, (5.0, 45.0, 95.0)):
            assert abs(got - want) < 2.0
        assert summary["termination"] == "converged"
        assert summary["parseval_defect"] < 1e-10
        assert (out / "remainder.fld").exists()

    def test_synth_without_bubbles_usage_error(self, tmp_path, capsys):
        code = run(["synth", "--out", tmp_path / "o"])
        assert code == 2
        assert "usage error" in capsys.readouterr().err


class TestMaximizeCommands:
    def test_maximize_reproducible(self, tmp_path, small_cfg, capsys):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            code = run(["maximize", "--iters", "3", "--seed", "7",
                        "--config", small_cfg, "--out", out])
            assert code == 0
            outs.append(out)
        f1 = (outs[0] / "maximizer.fld").read_bytes()
        f2 = (outs[1] / "maximizer.fld").read_bytes()
        assert f1 == f2
        j1 = (outs[0] / "maximize.json").read_text()
        assert j1 == (outs[1] / "maximize.json").read_text()
        trace = [json.loads(line) for line in
                 (outs[0] / "trace.jsonl").read_text().strip().splitlines()]
        objs = [row["objective"] for row in trace]
        assert all(b >= a for a, b in zip(objs, objs[1:]))

    def test_baseline_smoke(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "grid.ini",
                           GridSpec(512, 64.0, t_count=33, t_span=5.0))
        code = run(["baseline", "--config", cfg, "--out", tmp_path / "o"])
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        assert record["s_schr"] > 0
        assert (tmp_path / "o" / "baseline.fld").exists()

    def test_embed_csv(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "grid.ini",
                           GridSpec(4096, 120.0, t_count=193, t_span=3.0))
        code = run(["embed", "--n-list", "1,2", "--config", cfg,
                    "--out", tmp_path / "o"])
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        assert record["target_ratio"] > 0
        with open(tmp_path / "o" / "embedding.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["status"] for r in rows] == ["ok", "ok"]

    def test_dichotomy_bound_holds(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "grid.ini",
                           GridSpec(1024, 120.0, t_count=241, t_span=15.0))
        code = run(["dichotomy", "--iters", "3", "--config", cfg,
                    "--out", tmp_path / "o"])
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        assert record["bound_ok"] is True
        assert record["classification"] in ("attained", "budget",
                                            "escaping_modulation")
        on_disk = json.loads((tmp_path / "o" / "dichotomy.json").read_text())
        assert on_disk == record


class TestUsageErrors:
    def test_unknown_subcommand_exit_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_config_exit_2(self, tmp_path, capsys):
        code = run(["whitney-check", "--scale", "7", "--min-scale", "4",
                    "--config", tmp_path / "nope.ini",
                    "--out", tmp_path / "o"])
        assert code == 2
        assert "usage error" in capsys.readouterr().err
        assert not (tmp_path / "o").exists()

    def test_empty_config_exit_2(self, tmp_path, capsys):
        empty = tmp_path / "empty.ini"
        empty.write_text("")
        code = run(["whitney-check", "--scale", "7", "--min-scale", "4",
                    "--config", empty, "--out", tmp_path / "o"])
        assert code == 2


class TestConsoleScript:
    def test_entry_point_runs(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-c",
             "import sys; from airylab.cli import main; sys.exit(main(sys.argv[1:]))",
             "whitney-check", "--scale", "7", "--min-scale", "2",
             "--out", str(tmp_path / "o")],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["max_multiplicity"] == 9
