"""CLI contract: exit codes, file formats, reproducibility."""

import csv
import json
import math

import numpy as np
import pytest

from tcpp.cli import main
from tcpp.timechange import PmfTable


IG_SPEC = '{"type":"ig","delta":1,"gamma":1}'


class TestPmfCommand:
    def test_bessel_csv(self, tmp_path):
        out = tmp_path / "t.csv"
        rc = main(["pmf", "--spec", IG_SPEC, "--lambda", "1", "--t", "1",
                   "--method", "bessel", "--out", str(out)])
        assert rc == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["k", "value"]
        assert float(rows[1][1]) == pytest.approx(math.exp(1 - math.sqrt(3)), abs=1e-12)

    def test_bessel_gamma_zero_is_capability_error(self, tmp_path):
        rc = main(["pmf", "--spec", '{"type":"ig","delta":1,"gamma":0}',
                   "--lambda", "1", "--t", "1", "--method", "bessel",
                   "--out", str(tmp_path / "t.csv")])
        assert rc == 3

    def test_invalid_spec_is_input_error(self, tmp_path):
        rc = main(["pmf", "--spec", '{"type":"wat"}', "--lambda", "1", "--t", "1",
                   "--out", str(tmp_path / "t.csv")])
        assert rc == 2

    def test_mc_seed_reproducible_bytes(self, tmp_path):
        args = ["pmf", "--spec", '{"type":"stable","beta":0.5}', "--lambda", "1",
                "--t", "1", "--method", "mc", "--count", "5000", "--seed", "7"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_round_trips_spec_schema(self, tmp_path):
        out = tmp_path / "t.json"
        rc = main(["pmf", "--spec", '{"type":"tempered","beta":0.5,"mu":1}',
                   "--lambda", "1", "--t", "1", "--out", str(out)])
        assert rc == 0
        table = PmfTable.from_dict(json.loads(out.read_text()))
        assert table.spec.to_dict() == {"type": "tempered", "beta": 0.5, "mu": 1.0}

    def test_env_seed_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("TCPP_SEED", "99")
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        args = ["pmf", "--spec", '{"type":"stable","beta":0.5}', "--lambda", "1",
                "--t", "1", "--method", "mc", "--count", "2000"]
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()
        monkeypatch.setenv("TCPP_SEED", "100")
        c = tmp_path / "c.csv"
        main(args + ["--out", str(c)])
        assert a.read_bytes() != c.read_bytes()


class TestSimulateCommand:
    def test_subordinator_rows_nondecreasing(self, tmp_path):
        out = tmp_path / "s.csv"
        rc = main(["simulate", "--spec", '{"type":"stable","beta":0.5}',
                   "--t-grid", "0.2:2:12", "--paths", "6", "--seed", "3",
                   "--out", str(out)])
        assert rc == 0
        rows = list(csv.reader(out.open()))
        vals = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
        assert vals.shape == (6, 12)
        assert np.all(np.diff(vals, axis=1) >= 0)

    def test_inverse_paths_nondecreasing(self, tmp_path):
        out = tmp_path / "i.csv"
        rc = main(["simulate", "--spec",
                   '{"type":"inverse","base":{"type":"stable","beta":0.5}}',
                   "--t-grid", "0.5,1.0,1.5,2.0", "--paths", "4", "--seed", "3",
                   "--rtol", "1e-3", "--out", str(out)])
        assert rc == 0
        rows = list(csv.reader(out.open()))
        vals = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
        assert np.all(np.diff(vals, axis=1) >= 0)

    def test_count_paths(self, tmp_path):
        out = tmp_path / "c.csv"
        rc = main(["simulate", "--spec", IG_SPEC, "--t-grid", "0.5:3:6",
                   "--paths", "5", "--lambda", "2", "--seed", "1", "--out", str(out)])
        assert rc == 0
        rows = list(csv.reader(out.open()))
        vals = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
        assert np.all(vals == np.floor(vals))
        assert np.all(np.diff(vals, axis=1) >= 0)

    def test_seed_reproducibility(self, tmp_path):
        args = ["simulate", "--spec", IG_SPEC, "--t-grid", "0.5:2:5",
                "--paths", "3", "--seed", "8"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestVerifyCommand:
    def test_single_equation_campaign(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps([{"equation_id": "prop2.1"}]))
        out_dir = tmp_path / "out"
        rc = main(["verify", "--config", str(cfg), "--out-dir", str(out_dir)])
        assert rc == 0
        report = json.loads((out_dir / "prop2.1.json").read_text())
        assert report["pass"] is True
        assert len(report["levels"]) == 4
        summary = list(csv.reader((out_dir / "summary.csv").open()))
        assert summary[0] == ["equation_id", "finest_residual", "order", "pass"]
        assert summary[1][0] == "prop2.1" and summary[1][3] == "true"

    def test_unknown_equation_no_partial_run(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps([
            {"equation_id": "prop2.1"}, {"equation_id": "prop9.9"},
        ]))
        out_dir = tmp_path / "out"
        rc = main(["verify", "--config", str(cfg), "--out-dir", str(out_dir)])
        assert rc == 2
        assert not out_dir.exists()

    def test_grid_override_levels(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps([{
            "equation_id": "ig-density-pde",
            "grid": {"t_min": 0.6, "t_max": 1.8, "points": 17, "refinement_levels": 3},
        }]))
        out_dir = tmp_path / "out"
        rc = main(["verify", "--config", str(cfg), "--out-dir", str(out_dir), "--jobs", "2"])
        assert rc == 0
        report = json.loads((out_dir / "ig-density-pde.json").read_text())
        assert len(report["levels"]) == 3


class TestMomentsCommand:
    def test_values_and_check(self, tmp_path, capsys):
        rc = main(["moments", "--lambda", "2", "--delta", "1", "--gamma", "1", "--t", "3"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["mean"] == pytest.approx(6.0)
        assert payload["variance"] == pytest.approx(18.0)
        assert payload["pmf_check"] <= 1e-6

    def test_gamma_zero_is_input_error(self):
        rc = main(["moments", "--lambda", "1", "--delta", "1", "--gamma", "0", "--t", "1"])
        assert rc == 2
