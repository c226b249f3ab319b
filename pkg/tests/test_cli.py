import json
from pathlib import Path

import pytest

from popnet.cli import main, parse_band, parse_grid
from popnet.errors import ArgumentError


def run_cli(args):
    """Invoke the real entry point; returns its exit code."""
    try:
        main([str(a) for a in args])
    except SystemExit as e:
        return int(e.code or 0)
    return 0


def read_bytes_map(out_dir):
    return {p.name: p.read_bytes() for p in sorted(Path(out_dir).iterdir())}


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    out = tmp_path_factory.mktemp("gen")
    code = run_cli(["generate", "--masses", 300, "--ba-m", 2, "--seed", 42,
                    "--out", out])
    assert code == 0
    return out


class TestParsers:
    def test_grid_spec(self):
        assert parse_grid("0..100:1") == list(range(101))
        assert parse_grid("10..30:5") == [10, 15, 20, 25, 30]
        assert parse_grid("5..8") == [5, 6, 7, 8]

    def test_bad_grid(self):
        with pytest.raises(ArgumentError):
            parse_grid("10-20")
        with pytest.raises(ArgumentError):
            parse_grid("0..100:0")

    def test_band(self):
        assert parse_band("40..50") == (40.0, 50.0)
        with pytest.raises(ArgumentError):
            parse_band("40:50")


class TestGenerate:
    def test_outputs_exist_with_manifest(self, generated):
        names = {p.name for p in Path(generated).iterdir()}
        assert names == {"edges.tsv", "meta.csv", "manifest.json"}
        manifest = json.loads((Path(generated) / "manifest.json").read_text())
        assert manifest["command"] == "generate"
        assert manifest["parameters"]["seed"] == 42
        assert manifest["parameters"]["masses_count"] == 300

    def test_rerun_is_byte_identical(self, generated, tmp_path):
        out2 = tmp_path / "again"
        assert run_cli(["generate", "--masses", 300, "--ba-m", 2, "--seed", 42,
                        "--out", out2]) == 0
        assert read_bytes_map(generated) == read_bytes_map(out2)

    def test_seed_changes_output(self, generated, tmp_path):
        out2 = tmp_path / "other"
        assert run_cli(["generate", "--masses", 300, "--ba-m", 2, "--seed", 43,
                        "--out", out2]) == 0
        a = (Path(generated) / "edges.tsv").read_bytes()
        b = (out2 / "edges.tsv").read_bytes()
        assert a != b

    def test_default_sizes_give_10020_meta_rows(self, tmp_path):
        out = tmp_path / "full"
        assert run_cli(["generate", "--seed", 7, "--out", out]) == 0
        lines = (out / "meta.csv").read_text().splitlines()
        assert len(lines) == 1 + 10_020

    def test_group_column_has_three_labels(self, generated):
        lines = (Path(generated) / "meta.csv").read_text().splitlines()[1:]
        labels = {line.rsplit(",", 1)[1] for line in lines}
        assert labels == {"masses", "leader", "celebrity"}

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "model.toml"
        cfg.write_text("[generate]\nmasses_count = 120\nseed = 5\nba_m = 1\n")
        out = tmp_path / "cfg_out"
        assert run_cli(["generate", "--config", cfg, "--seed", 9,
                        "--out", out]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["parameters"]["masses_count"] == 120
        assert manifest["parameters"]["seed"] == 9  # flag wins

    def test_json_config_accepted(self, tmp_path):
        cfg = tmp_path / "model.json"
        cfg.write_text(json.dumps({"generate": {"masses_count": 80, "seed": 4,
                                                "ba_m": 1}}))
        out = tmp_path / "json_out"
        assert run_cli(["generate", "--config", cfg, "--out", out]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["parameters"]["masses_count"] == 80

    def test_invalid_config_is_validation_error(self, tmp_path):
        assert run_cli(["generate", "--masses", 10, "--ba-m", 20,
                        "--out", tmp_path / "x"]) == 2


class TestStats:
    def test_stats_on_generated(self, generated, tmp_path, capsys):
        out = tmp_path / "stats"
        code = run_cli(["stats", "--edges", Path(generated) / "edges.tsv",
                        "--meta", Path(generated) / "meta.csv", "--out", out])
        assert code == 0
        report = json.loads((out / "stats.json").read_text())
        assert report["n_nodes"] == 320
        assert report["degree_assortativity"] is not None
        # no genre metadata in SGC exports: null with reason, not a failure
        assert report["genre_edge_overlap"] is None
        assert "reason" in report["genre_edge_overlap_reason"] or \
            report["genre_edge_overlap_reason"]

    def test_missing_file_is_usage_error(self, tmp_path):
        assert run_cli(["stats", "--edges", tmp_path / "nope.tsv",
                        "--meta", tmp_path / "nope.csv"]) == 1


@pytest.fixture(scope="module")
def swept(generated, tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep")
    code = run_cli(["sweep", "--edges", Path(generated) / "edges.tsv",
                    "--meta", Path(generated) / "meta.csv",
                    "--grid", "0..100:10", "--measures", "eigenvector,pagerank",
                    "--k-eigs", 2, "--out", out])
    assert code == 0
    return out


class TestSweepCommand:
    def test_outputs(self, swept):
        names = {p.name for p in Path(swept).iterdir()}
        assert names == {"sweep.json", "sweep.csv", "manifest.json"}
        doc = json.loads((Path(swept) / "sweep.json").read_text())
        assert doc["schema"]["name"] == "popnet.sweep"
        assert len(doc["records"]) == 11

    def test_csv_has_three_series_families(self, swept):
        lines = (Path(swept) / "sweep.csv").read_text().splitlines()
        fields = {ln.split(",")[2] for ln in lines[2:]
                  if ln.split(",")[1] == "leader"}
        assert {"mean_eigencentrality", "mean_degree", "mean_pagerank"} <= fields

    def test_rerun_identical_even_with_threads(self, generated, swept,
                                               tmp_path):
        out2 = tmp_path / "sweep2"
        code = run_cli(["sweep", "--edges", Path(generated) / "edges.tsv",
                        "--meta", Path(generated) / "meta.csv",
                        "--grid", "0..100:10",
                        "--measures", "eigenvector,pagerank",
                        "--k-eigs", 2, "--threads", 2, "--out", out2])
        assert code == 0
        assert read_bytes_map(swept) == read_bytes_map(out2)

    def test_unknown_measure_is_usage_error(self, generated, tmp_path):
        code = run_cli(["sweep", "--edges", Path(generated) / "edges.tsv",
                        "--meta", Path(generated) / "meta.csv",
                        "--measures", "katz", "--out", tmp_path / "x"])
        assert code == 2

    def test_grid_spec_101_thresholds(self):
        assert len(parse_grid("0..100:1")) == 101

    def test_removal_band_flag(self, generated, tmp_path):
        out = tmp_path / "banded"
        code = run_cli(["sweep", "--edges", Path(generated) / "edges.tsv",
                        "--meta", Path(generated) / "meta.csv",
                        "--grid", "0..100:25", "--remove-band", "40..50",
                        "--out", out])
        assert code == 0
        doc = json.loads((out / "sweep.json").read_text())
        assert doc["records"][0]["n_nodes"] < 320


class TestAnalyzeTransition:
    def test_report_written(self, swept, tmp_path):
        out = tmp_path / "trans"
        code = run_cli(["analyze", "transition", "--sweep",
                        Path(swept) / "sweep.json", "--out", out])
        assert code == 0
        report = json.loads((out / "transition.json").read_text())
        assert set(report) == {"transition_threshold", "persistent",
                               "gap_at_transition",
                               "degree_changeover_threshold", "curvature"}

    def test_missing_sweep_file_no_partial_outputs(self, tmp_path):
        out = tmp_path / "nothing"
        code = run_cli(["analyze", "transition", "--sweep",
                        tmp_path / "missing.json", "--out", out])
        assert code != 0
        assert not out.exists()

    def test_schema_mismatch_names_versions(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(
            {"schema": {"name": "popnet.sweep", "major": 9, "minor": 0}}))
        out = tmp_path / "out"
        code = run_cli(["analyze", "transition", "--sweep", bad, "--out", out])
        assert code == 2
        err = capsys.readouterr().err
        assert "9" in err


class TestBatchCommands:
    def test_beta_grid_desk_scale(self, tmp_path):
        out = tmp_path / "grid"
        code = run_cli(["analyze", "beta-grid", "--alphas", "4", "--betas", "1",
                        "--reps", 1, "--masses", 250, "--seed", 3,
                        "--out", out])
        assert code == 0
        lines = (out / "beta_grid.csv").read_text().splitlines()
        assert lines[0] == "alpha,beta,rep,curvature"
        assert len(lines) == 2
        summary = json.loads((out / "beta_grid_summary.json").read_text())
        assert "4,1" in summary["mean_curvature"]

    def test_degree_ratio_desk_scale(self, tmp_path):
        out = tmp_path / "ratio"
        code = run_cli(["analyze", "degree-ratio", "--ratios", "20",
                        "--reps", 1, "--masses", 250, "--seed", 3,
                        "--out", out])
        assert code == 0
        summary = json.loads((out / "degree_ratio_summary.json").read_text())
        assert len(summary["cells"]) == 1


class TestExitCodes:
    def test_usage_error_is_1(self):
        assert run_cli(["sweep"]) == 1  # missing required options

    def test_unknown_command_is_1(self):
        assert run_cli(["frobnicate"]) == 1

    def test_success_is_0(self, generated):
        assert run_cli(["stats", "--edges", Path(generated) / "edges.tsv",
                        "--meta", Path(generated) / "meta.csv"]) == 0
