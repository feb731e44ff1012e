import json
import math

import pytest

from estbound.interval import IntervalBox, iadd, isqr, isub, Interval
from estbound.optimizer import MsConfig, moore_skelboe
from estbound.pipeline import (
    Scenario,
    ValidationReport,
    dump_cover,
    load_scenario,
    run_validate,
)
from estbound import cli


def write_scenario(path, doc):
    path.write_text(json.dumps(doc))
    return path


BASE_DOC = {
    "param_box": [[0, 1], [0, 1]],
    "noise_box": [[-0.1, 0.1], [-0.1, 0.1]],
    "observation": {"type": "identity"},
    "estimator": {"type": "identity"},
    "ms": {"delta": 1e-4, "max_iterations": 200},
    "oracle": {"samples": 2000, "seed": 0},
}


class TestScenarioParsing:
    def test_defaults(self):
        doc = {"param_box": [[0, 1]], "noise_box": [[0, 0]]}
        sc = Scenario.from_dict(doc)
        assert sc.delta == 1e-3
        assert sc.max_iterations == 1_000_000
        assert sc.oracle is not None
        assert sc.oracle.samples == 100_000 and sc.oracle.seed == 0
        assert sc.observation_spec["type"] == "identity"

    def test_oracle_can_be_disabled(self):
        doc = dict(BASE_DOC, oracle=None)
        sc = Scenario.from_dict(doc)
        assert sc.oracle is None

    def test_missing_boxes(self):
        with pytest.raises(ValueError, match="param_box"):
            Scenario.from_dict({"noise_box": [[0, 1]]})

    def test_unknown_observation(self):
        sc = Scenario.from_dict(dict(BASE_DOC, observation={"type": "sonar"}))
        with pytest.raises(ValueError, match="sonar"):
            sc.build_objective()

    def test_unknown_estimator(self):
        sc = Scenario.from_dict(dict(BASE_DOC, estimator={"type": "kalman"}))
        with pytest.raises(ValueError, match="kalman"):
            sc.build_objective()

    def test_gradient_descent_needs_trilateration(self):
        sc = Scenario.from_dict(
            dict(BASE_DOC, estimator={"type": "gradient_descent"})
        )
        with pytest.raises(ValueError, match="trilateration"):
            sc.build_objective()

    def test_dimension_mismatch_names_the_pair(self):
        doc = dict(
            BASE_DOC,
            observation={
                "type": "trilateration",
                "landmarks": [[10, -9], [5, 12], [-15, 0]],
            },
            estimator={"type": "constant", "value": [15, 15]},
        )
        sc = Scenario.from_dict(doc)  # noise box has dim 2, model emits 3
        with pytest.raises(ValueError, match="noise_box has dim 2"):
            sc.build_objective()

    def test_estimator_dimension_mismatch_names_the_pair(self):
        doc = dict(
            BASE_DOC,
            param_box=[[0, 1], [0, 1]],
            noise_box=[[-0.1, 0.1]] * 3,
            observation={
                "type": "trilateration",
                "landmarks": [[10, -9], [5, 12], [-15, 0]],
            },
        )
        sc = Scenario.from_dict(doc)  # identity estimator emits dim 3
        with pytest.raises(ValueError, match="estimator produces dim 3"):
            sc.build_objective()

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="nope.scn"):
            load_scenario(tmp_path / "nope.scn")

    def test_load_invalid_json(self, tmp_path):
        p = tmp_path / "bad.scn"
        p.write_text("{not json")
        with pytest.raises(ValueError, match="not valid JSON"):
            load_scenario(p)


class TestReportRoundTrip:
    def test_all_fields_survive(self):
        report = ValidationReport(
            eps_low=0.25,
            eps_high=1.5,
            delta=1e-3,
            converged=True,
            iterations=42,
            cover_size=43,
            witness_param_box=IntervalBox.from_bounds([(0.5, 0.75), (0.25, 0.5)]),
            oracle_max=1.25,
            certified=True,
            elapsed=0.125,
        )
        again = ValidationReport.from_json_text(report.to_json_text())
        assert again == report

    def test_none_fields_survive(self):
        report = ValidationReport(
            eps_low=0.0,
            eps_high=2.0,
            delta=1e-2,
            converged=False,
            iterations=7,
            cover_size=8,
            witness_param_box=IntervalBox.from_bounds([(0, 1)]),
            oracle_max=None,
            certified=None,
            elapsed=0.5,
        )
        again = ValidationReport.from_json_text(report.to_json_text())
        assert again == report


class TestRunValidate:
    def test_identity_scenario(self, scenario_dir):
        report = run_validate(load_scenario(scenario_dir / "identity.scn"))
        assert math.sqrt(0.02) <= report.eps_high <= math.sqrt(0.02) + 1e-4
        assert 0.0 <= report.eps_low <= math.sqrt(0.02)
        assert report.certified is True
        assert report.witness_param_box.dim == 2

    def test_oracle_disabled_leaves_fields_none(self, tmp_path):
        p = write_scenario(tmp_path / "s.scn", dict(BASE_DOC, oracle=None))
        report = run_validate(load_scenario(p))
        assert report.oracle_max is None and report.certified is None

    def test_unsound_stub_fails_certification(self, tmp_path):
        doc = dict(BASE_DOC, estimator={"type": "unsound_stub"})
        p = write_scenario(tmp_path / "stub.scn", doc)
        report = run_validate(load_scenario(p))
        assert report.certified is False
        assert report.oracle_max > report.eps_high


class TestDumpCover:
    def test_paraboloid_rows_tile_the_domain(self, tmp_path):
        one = Interval.point(1.0)

        def f(box):
            return isqr(isub(box[0], one))

        res = moore_skelboe(
            f,
            IntervalBox.from_bounds([(-5, 4)]),
            MsConfig(delta=1e-6, split_dims=(0,)),
        )
        out = tmp_path / "cover.csv"
        dump_cover(res.final_cover, 1, 0, out)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "x0_lb,x0_ub,f_lb,f_ub"
        rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
        assert len(rows) == res.final_cover_size
        pieces = sorted((r[0], r[1]) for r in rows)
        assert pieces[0][0] == -5.0 and pieces[-1][1] == 4.0
        for (_, ub), (lb2, _) in zip(pieces, pieces[1:]):
            assert ub == lb2  # no gaps, no overlap beyond shared endpoints

    def test_header_column_count(self, tmp_path):
        box = IntervalBox.from_bounds([(0, 1), (0, 1), (-0.1, 0.1)])

        def f(b):
            return iadd(isqr(b[0]), isqr(b[1]))

        res = moore_skelboe(f, box, MsConfig(delta=10.0, split_dims=(0, 1)))
        out = tmp_path / "c.csv"
        dump_cover(res.final_cover, 2, 1, out)
        header = out.read_text().splitlines()[0].split(",")
        assert len(header) == 2 * (2 + 1) + 2

    def test_empty_entries_writes_header_only(self, tmp_path):
        out = tmp_path / "empty.csv"
        dump_cover([], 2, 3, out)
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1
        assert len(lines[0].split(",")) == 2 * (2 + 3) + 2


class TestCli:
    def test_validate_identity_exit_0(self, scenario_dir, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = cli.main(
            [
                "validate",
                "--scenario",
                str(scenario_dir / "identity.scn"),
                "--output",
                str(out),
            ]
        )
        assert code == 0
        report = ValidationReport.from_json_text(out.read_text())
        assert report.certified is True
        printed = capsys.readouterr().out
        assert json.loads(printed)["certified"] is True

    def test_missing_scenario_exit_1(self, tmp_path, capsys):
        missing = tmp_path / "absent.scn"
        code = cli.main(["validate", "--scenario", str(missing)])
        assert code == 1
        assert str(missing) in capsys.readouterr().err

    def test_unsound_stub_exit_2(self, tmp_path, capsys):
        doc = dict(BASE_DOC, estimator={"type": "unsound_stub"})
        p = write_scenario(tmp_path / "stub.scn", doc)
        code = cli.main(["validate", "--scenario", str(p)])
        assert code == 2
        assert "certification FAILED" in capsys.readouterr().err

    def test_flag_overrides(self, scenario_dir, capsys):
        code = cli.main(
            [
                "validate",
                "--scenario",
                str(scenario_dir / "identity.scn"),
                "--delta",
                "0.5",
                "--max-iters",
                "10",
            ]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["delta"] == 0.5
        assert doc["iterations"] <= 10
        assert doc["converged"] is True  # delta 0.5 exceeds the error range

    def test_dump_cover_flag(self, scenario_dir, tmp_path, capsys):
        out = tmp_path / "cover.csv"
        code = cli.main(
            [
                "validate",
                "--scenario",
                str(scenario_dir / "identity.scn"),
                "--max-iters",
                "20",
                "--dump-cover",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1 + 21  # header + cap+1 cover entries
        assert len(lines[0].split(",")) == 2 * (2 + 2) + 2
        capsys.readouterr()

    def test_oracle_subcommand(self, scenario_dir, capsys):
        code = cli.main(
            [
                "oracle",
                "--scenario",
                str(scenario_dir / "identity.scn"),
                "--samples",
                "500",
                "--seed",
                "3",
            ]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["samples_used"] == 500
        assert 0.0 <= doc["max_observed"] <= math.sqrt(0.02)

    def test_train_mlp_subcommand(self, tmp_path, capsys):
        cfg = {
            "landmarks": [[10, -9], [5, 12], [-15, 0]],
            "param_box": [[5, 25], [5, 25]],
            "noise_box": [[-0.2, 0.2], [-0.2, 0.2], [-0.2, 0.2]],
            "samples": 200,
            "sizes": [3, 4, 2],
            "epochs": 20,
            "rate": 1e-4,
            "seed": 1,
        }
        cfg_path = tmp_path / "train.json"
        cfg_path.write_text(json.dumps(cfg))
        out = tmp_path / "weights.json"
        code = cli.main(
            ["train-mlp", "--config", str(cfg_path), "--out", str(out)]
        )
        assert code == 0
        from estbound.mlp import load_mlp

        model = load_mlp(out)
        assert model.n_obs == 3 and model.n_params == 2
        assert model.meta["seed"] == 1
        capsys.readouterr()

    def test_unknown_flag_exit_1(self, capsys):
        code = cli.main(["validate", "--scenario", "x", "--frobnicate"])
        assert code == 1
        err = capsys.readouterr().err
        assert "usage" in err.lower()

    def test_unknown_command_exit_1(self, capsys):
        assert cli.main(["explode"]) == 1
        capsys.readouterr()
