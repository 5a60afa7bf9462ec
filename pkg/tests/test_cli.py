import json
from pathlib import Path

import pytest

from divopt import GeneratorSpec, generate_synthetic, save
from divopt.cli import main


@pytest.fixture(scope="module")
def scenario_file(tmp_path_factory, pinned_scenarios):
    path = tmp_path_factory.mktemp("data") / "scenarios.json"
    save(pinned_scenarios, path)
    return path


def read_tree(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()
    }


class TestGenerate:
    def test_writes_default_universe(self, tmp_path, capsys):
        code = main(["generate", "--seed", "42", "--out", str(tmp_path / "g")])
        assert code == 0
        doc = json.loads((tmp_path / "g" / "scenarios.json").read_text())
        assert len(doc["assets"]) == 6
        assert len(doc["returns"]) == 100
        manifest = json.loads((tmp_path / "g" / "manifest.json").read_text())
        assert manifest["provenance"]["seed"] == 42

    def test_seed_repeat_identical_files(self, tmp_path):
        main(["generate", "--seed", "9", "--out", str(tmp_path / "a")])
        main(["generate", "--seed", "9", "--out", str(tmp_path / "b")])
        assert read_tree(tmp_path / "a") == read_tree(tmp_path / "b")

    def test_missing_spec_file_is_usage_error(self, tmp_path, capsys):
        code = main(
            ["generate", "--spec", str(tmp_path / "nope.ini"), "--out", str(tmp_path / "g")]
        )
        assert code == 2
        assert "spec file not found" in capsys.readouterr().err

    def test_csv_flag_writes_matrix_pair(self, tmp_path):
        code = main(["generate", "--seed", "4", "--csv", "--out", str(tmp_path / "g")])
        assert code == 0
        from divopt import load

        json_set = load(tmp_path / "g" / "scenarios.json")
        csv_set = load(tmp_path / "g" / "scenarios")
        import numpy as np

        assert np.array_equal(json_set.returns, csv_set.returns)
        assert np.array_equal(json_set.investments, csv_set.investments)

    def test_spec_file_round_trip(self, tmp_path):
        ini = tmp_path / "gen.ini"
        ini.write_text(
            "[universe]\ntechnologies = 2\ncountries = 2\nscenarios = 40\nseed = 5\n"
            "[secured]\nreturn_sigma = 0.02\ninvestment_sigma = 0.02\n"
            "[merchant]\nreturn_sigma = 0.4\ninvestment_sigma = 0.3\n"
        )
        code = main(["generate", "--spec", str(ini), "--out", str(tmp_path / "g")])
        assert code == 0
        doc = json.loads((tmp_path / "g" / "scenarios.json").read_text())
        assert len(doc["assets"]) == 4
        assert len(doc["returns"]) == 40


class TestFrontier:
    def test_default_run_emits_artifacts(self, tmp_path, scenario_file):
        out = tmp_path / "front"
        code = main(
            [
                "frontier",
                "--scenarios",
                str(scenario_file),
                "--w",
                "1,0.6,0.2",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        csv_lines = (out / "frontier.csv").read_text().strip().split("\n")
        assert len(csv_lines) == 4
        doc = json.loads((out / "frontier.json").read_text())
        assert len(doc["points"]) == 3
        assert (out / "frontier.svg").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        listed = {entry["path"] for entry in manifest["files"]}
        assert {"frontier.csv", "frontier.json", "frontier.svg"} <= listed

    def test_single_zero_w_concentrates(self, tmp_path, scenario_file):
        out = tmp_path / "front0"
        code = main(
            ["frontier", "--scenarios", str(scenario_file), "--w", "0", "--out", str(out)]
        )
        assert code == 0
        doc = json.loads((out / "frontier.json").read_text())
        assert len(doc["points"]) == 1
        assert max(doc["points"][0]["shares"]) >= 0.999

    def test_empty_w_is_usage_error(self, tmp_path, scenario_file, capsys):
        code = main(
            ["frontier", "--scenarios", str(scenario_file), "--w", ",", "--out", str(tmp_path / "x")]
        )
        assert code == 2

    def test_missing_scenarios_is_data_error(self, tmp_path, capsys):
        code = main(
            [
                "frontier",
                "--scenarios",
                str(tmp_path / "missing.json"),
                "--out",
                str(tmp_path / "x"),
            ]
        )
        assert code == 3


class TestDiversifyPenalty:
    def test_grid_table_and_wd_zero_matches_frontier(self, tmp_path, scenario_file):
        out = tmp_path / "pen"
        code = main(
            [
                "diversify-penalty",
                "--scenarios",
                str(scenario_file),
                "--w",
                "0.6,0.2",
                "--wd",
                "0,0.5",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        doc = json.loads((out / "penalty.json").read_text())
        assert len(doc["records"]) == 4

        front = tmp_path / "front_cmp"
        main(
            [
                "frontier",
                "--scenarios",
                str(scenario_file),
                "--w",
                "0.6,0.2",
                "--out",
                str(front),
            ]
        )
        frontier_doc = json.loads((front / "frontier.json").read_text())
        for record in doc["records"]:
            if record["w_d"] == 0.0:
                match = next(p for p in frontier_doc["points"] if p["w"] == record["w"])
                assert record["x"] == match["x"]

    def test_wd_out_of_range_is_usage_error(self, tmp_path, scenario_file):
        code = main(
            [
                "diversify-penalty",
                "--scenarios",
                str(scenario_file),
                "--wd",
                "0,1.5",
                "--out",
                str(tmp_path / "x"),
            ]
        )
        assert code == 2


class TestDiversifyConstrained:
    def test_suite_artifact_shape(self, tmp_path, scenario_file):
        out = tmp_path / "con"
        code = main(
            [
                "diversify-constrained",
                "--scenarios",
                str(scenario_file),
                "--w",
                "0.6,0.2",
                "--counts",
                "2,1,1",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        doc = json.loads((out / "suite.json").read_text())
        assert len(doc["runs"]) == 8
        assert len(doc["baselines"]) == 2
        zones = [run["zone"] for run in doc["runs"][:4]]
        assert zones == ["s1", "s1", "s2", "s3"]
        for run in doc["runs"]:
            assert {"w", "zone", "dp", "dr"} <= set(run)
            if "error" not in run:
                assert {"feasible", "x", "roi", "risk", "hhi", "residuals"} <= set(run)
        assert (out / "cloud.svg").exists()

    def test_zero_counts_gives_baselines_only(self, tmp_path, scenario_file):
        out = tmp_path / "con0"
        code = main(
            [
                "diversify-constrained",
                "--scenarios",
                str(scenario_file),
                "--w",
                "0.6",
                "--counts",
                "0,0,0",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        doc = json.loads((out / "suite.json").read_text())
        assert doc["runs"] == []
        assert len(doc["baselines"]) == 1

    def test_infeasible_pairs_still_exit_zero(self, tmp_path, scenario_file):
        # w=1 is the minimum-risk point; s3 demands a risk improvement and
        # must come back flagged infeasible rather than failing the command
        out = tmp_path / "con_inf"
        code = main(
            [
                "diversify-constrained",
                "--scenarios",
                str(scenario_file),
                "--w",
                "1",
                "--counts",
                "0,0,2",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        doc = json.loads((out / "suite.json").read_text())
        assert any(not run["feasible"] for run in doc["runs"])


class TestEvaluate:
    def test_uniform_hhi(self, tmp_path, capsys):
        spec = GeneratorSpec(n_technologies=2, n_countries=2, n_scenarios=10, seed=1)
        path = tmp_path / "four.json"
        save(generate_synthetic(spec), path)
        portfolio = tmp_path / "p.json"
        portfolio.write_text(json.dumps({"x": [25, 25, 25, 25], "budget": 100}))
        code = main(["evaluate", "--scenarios", str(path), "--portfolio", str(portfolio)])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["hhi"] == pytest.approx(0.25, abs=1e-12)

    def test_concentrated_hhi(self, tmp_path, scenario_file, capsys):
        portfolio = tmp_path / "p.json"
        portfolio.write_text(json.dumps({"x": [100, 0, 0, 0, 0, 0], "budget": 100}))
        code = main(["evaluate", "--scenarios", str(scenario_file), "--portfolio", str(portfolio)])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["hhi"] == pytest.approx(1.0, abs=0)

    def test_bad_sum_names_the_sum(self, tmp_path, scenario_file, capsys):
        portfolio = tmp_path / "p.json"
        portfolio.write_text(json.dumps({"x": [10, 0, 0, 0, 0, 0], "budget": 100}))
        code = main(["evaluate", "--scenarios", str(scenario_file), "--portfolio", str(portfolio)])
        assert code == 3
        err = capsys.readouterr().err
        assert "10.0" in err and "100" in err


class TestTrace:
    def test_solver_trace_written_as_json_lines(self, tmp_path, scenario_file):
        trace = tmp_path / "trace.jsonl"
        code = main(
            [
                "frontier",
                "--scenarios",
                str(scenario_file),
                "--w",
                "0",
                "--trace",
                str(trace),
                "--out",
                str(tmp_path / "out"),
            ]
        )
        assert code == 0
        lines = trace.read_text().strip().split("\n")
        assert len(lines) > 5
        records = [json.loads(line) for line in lines]
        assert any("merit" in r for r in records)
        assert any("violation" in r for r in records)


class TestDeterminism:
    def test_constrained_suite_rerun_byte_identical(self, tmp_path, scenario_file):
        args = [
            "diversify-constrained",
            "--scenarios",
            str(scenario_file),
            "--w",
            "0.6",
            "--counts",
            "1,1,0",
        ]
        main(args + ["--out", str(tmp_path / "one")])
        main(args + ["--out", str(tmp_path / "two")])
        assert read_tree(tmp_path / "one") == read_tree(tmp_path / "two")
