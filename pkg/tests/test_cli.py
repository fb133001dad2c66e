import csv
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from bivquant.cli import main

EXP_MODEL = {
    "marginal_x": {"kind": "Exponential", "rate": 1.0},
    "marginal_y": {"kind": "Exponential", "rate": 1.0},
    "copula": {"kind": "Independence"},
}
PARETO_MODEL = {
    "marginal_x": {"kind": "Pareto", "scale": 1.0, "shape": 1.0},
    "marginal_y": {"kind": "Pareto", "scale": 1.0, "shape": 1.0},
    "copula": {"kind": "Independence"},
}
HEAVY_MODEL = {
    "marginal_x": {"kind": "Pareto", "scale": 1.0, "shape": 0.5},
    "marginal_y": {"kind": "Exponential", "rate": 1.0},
    "copula": {"kind": "Independence"},
}
FGM_MODEL = {
    "marginal_x": {"kind": "Uniform01"},
    "marginal_y": {"kind": "Uniform01"},
    "copula": {"kind": "FGM", "theta": 1.0},
}


@pytest.fixture
def model_file(tmp_path):
    def write(spec, name="model.json"):
        path = tmp_path / name
        path.write_text(json.dumps(spec))
        return str(path)

    return write


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


class TestCurveCommand:
    def test_pareto_product_law_and_svg(self, tmp_path, model_file):
        out = tmp_path / "curve.csv"
        svg = tmp_path / "curve.svg"
        rc = main(["curve", "--model", model_file(PARETO_MODEL), "-p", "0.5", "--dir", "++",
                   "-n", "200", "--out", str(out), "--svg", str(svg)])
        assert rc == 0
        rows = read_rows(out)
        assert len(rows) == 200
        assert list(rows[0]) == ["u", "x", "y", "orthant_prob_residual"]
        worst = max(abs(float(r["x"]) * float(r["y"]) - 2.0) for r in rows)
        assert worst <= 1e-6
        tree = ET.parse(svg)  # well-formed XML
        polylines = [e for e in tree.iter() if e.tag.endswith("polyline")]
        assert len(polylines) == 1

    def test_residual_column_small(self, tmp_path, model_file):
        out = tmp_path / "curve.csv"
        rc = main(["curve", "--model", model_file(FGM_MODEL), "-p", "0.25", "--dir", "+-",
                   "--out", str(out)])
        assert rc == 0
        assert max(float(r["orthant_prob_residual"]) for r in read_rows(out)) <= 1e-6

    def test_json_format(self, tmp_path, model_file):
        out = tmp_path / "curve.json"
        rc = main(["curve", "--model", model_file(FGM_MODEL), "-p", "0.25", "--dir", "mm",
                   "--format", "json", "-n", "7", "--out", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["p"] == 0.25
        assert payload["direction"] == "--"
        assert len(payload["points"]) == 7

    def test_byte_identical_reruns(self, tmp_path, model_file):
        spec = model_file(FGM_MODEL)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["curve", "--model", spec, "-p", "0.3", "--dir", "++",
                         "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_level_exit_2(self, tmp_path, model_file, capsys):
        rc = main(["curve", "--model", model_file(EXP_MODEL), "-p", "1.5", "--dir", "++",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2
        assert "p must lie in (0,1)" in capsys.readouterr().err

    def test_missing_model_exit_3(self, tmp_path):
        rc = main(["curve", "--model", str(tmp_path / "nope.json"), "-p", "0.5",
                   "--dir", "++", "--out", str(tmp_path / "x.csv")])
        assert rc == 3

    def test_malformed_model_exit_3(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        rc = main(["curve", "--model", str(bad), "-p", "0.5", "--dir", "++",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 3

    def test_unknown_model_key_exit_3(self, tmp_path, model_file):
        spec = dict(EXP_MODEL)
        spec["extra"] = 1
        rc = main(["curve", "--model", model_file(spec), "-p", "0.5", "--dir", "++",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 3

    def test_usage_error_exit_2(self, tmp_path, model_file):
        rc = main(["curve", "--model", model_file(EXP_MODEL), "--dir", "++",
                   "--out", str(tmp_path / "x.csv")])  # missing -p
        assert rc == 2


class TestFieldCommand:
    def test_exponential_first_column_constant(self, tmp_path, model_file):
        out = tmp_path / "field.csv"
        rc = main(["field", "--model", model_file(EXP_MODEL), "--kind", "hazard",
                   "--grid", "9", "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        assert len(rows) == 81
        assert all(abs(float(r["first"]) - 1.0) <= 1e-9 for r in rows)
        assert all(r["kind"] == "hazard" for r in rows)

    def test_independence_second_equals_marginal(self, tmp_path, model_file):
        out = tmp_path / "field.csv"
        rc = main(["field", "--model", model_file(EXP_MODEL), "--kind", "mrl",
                   "--grid", "5", "--out", str(out)])
        assert rc == 0
        assert all(abs(float(r["second"]) - 1.0) <= 1e-9 for r in read_rows(out))

    def test_fgm_hazard_second_value(self, tmp_path, model_file):
        out = tmp_path / "field.csv"
        rc = main(["field", "--model", model_file(FGM_MODEL), "--kind", "hazard",
                   "--grid", "9", "--out", str(out)])
        assert rc == 0
        rows = [r for r in read_rows(out) if r["u"] == "0.5" and r["p_cond"] == "0.5"]
        assert len(rows) == 1
        assert float(rows[0]["second"]) == pytest.approx(2.23607, abs=1e-5)

    def test_infinite_mean_usage_error(self, tmp_path, model_file):
        rc = main(["field", "--model", model_file(HEAVY_MODEL), "--kind", "mrl",
                   "--grid", "3", "--out", str(tmp_path / "x.csv")])
        assert rc == 2


class TestReconstructCommand:
    @pytest.mark.parametrize("kind", ["hazard", "mrl", "rev-hazard", "rev-mrl"])
    def test_round_trip_error_column(self, tmp_path, model_file, kind):
        out = tmp_path / "recon.csv"
        rc = main(["reconstruct", "--model", model_file(EXP_MODEL), "--kind", kind,
                   "--component", "first", "--grid", "9", "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        assert list(rows[0]) == ["t", "reconstructed", "reference", "abs_error"]
        assert max(float(r["abs_error"]) for r in rows) <= 1e-4

    def test_second_component(self, tmp_path, model_file):
        out = tmp_path / "recon.csv"
        rc = main(["reconstruct", "--model", model_file(FGM_MODEL), "--kind", "hazard",
                   "--component", "second", "--conditioning-u", "0.5", "--grid", "5",
                   "--out", str(out)])
        assert rc == 0
        assert max(float(r["abs_error"]) for r in read_rows(out)) <= 1e-4


class TestVerifyCommand:
    def test_exponential_model_passes(self, tmp_path, model_file, capsys):
        out = tmp_path / "resid.csv"
        rc = main(["verify", "--model", model_file(EXP_MODEL), "--out", str(out)])
        captured = capsys.readouterr().out
        assert rc == 0
        assert "verify: PASS" in captured
        assert "max residual" in captured
        rows = read_rows(out)
        assert list(rows[0]) == ["check", "t", "residual"]
        assert {r["check"] for r in rows} == {"identity-first", "identity-second"}
        assert max(abs(float(r["residual"])) for r in rows) <= 1e-6

    def test_heavy_pareto_fails_named(self, tmp_path, model_file, capsys):
        rc = main(["verify", "--model", model_file(HEAVY_MODEL)])
        captured = capsys.readouterr().out
        assert rc == 1
        assert "infinite mean" in captured
        # hazard-based checks still pass
        for line in captured.splitlines():
            if "hazard" in line and "roundtrip" in line:
                assert line.endswith("PASS")

    def test_verify_deterministic(self, tmp_path, model_file, capsys):
        spec = model_file(EXP_MODEL)
        main(["verify", "--model", spec])
        first = capsys.readouterr().out
        main(["verify", "--model", spec])
        assert capsys.readouterr().out == first


class TestSampleCommand:
    def test_deterministic_bytes(self, tmp_path, model_file):
        spec = model_file(FGM_MODEL)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["sample", "--model", spec, "--n", "500", "--seed", "9",
                         "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text().splitlines()[0] == "x,y"

    def test_zero_n_exit_2(self, tmp_path, model_file):
        rc = main(["sample", "--model", model_file(FGM_MODEL), "--n", "0", "--seed", "1",
                   "--out", str(tmp_path / "s.csv")])
        assert rc == 2

    def test_fgm_correlation(self, tmp_path, model_file):
        out = tmp_path / "s.csv"
        assert main(["sample", "--model", model_file(FGM_MODEL), "--n", "100000",
                     "--seed", "1", "--out", str(out)]) == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert np.corrcoef(data[:, 0], data[:, 1])[0, 1] == pytest.approx(1 / 3, abs=0.01)


class TestSampleDrivenCurve:
    def test_empirical_curve_from_sample_csv(self, tmp_path, model_file):
        spec = model_file(FGM_MODEL)
        draws = tmp_path / "draws.csv"
        assert main(["sample", "--model", spec, "--n", "100000", "--seed", "1",
                     "--out", str(draws)]) == 0
        out = tmp_path / "emp.csv"
        rc = main(["curve", "--model", spec, "-p", "0.25", "--dir", "mm", "-n", "25",
                   "--sample", str(draws), "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        assert len(rows) == 25
        # empirical points carry the level only up to sampling noise
        assert max(float(r["orthant_prob_residual"]) for r in rows) <= 0.02

    def test_bad_sample_file(self, tmp_path, model_file):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y,z\n1,2,3\n")
        rc = main(["curve", "--model", model_file(FGM_MODEL), "-p", "0.25", "--dir", "mm",
                   "--sample", str(bad), "--out", str(tmp_path / "o.csv")])
        assert rc == 3


class TestConfigFile:
    def test_numerics_override(self, tmp_path, model_file):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"numerics": {"quad_points": 512}}))
        out = tmp_path / "curve.csv"
        rc = main(["curve", "--model", model_file(EXP_MODEL), "-p", "0.5", "--dir", "++",
                   "--config", str(cfgfile), "--out", str(out)])
        assert rc == 0

    def test_override_keeps_reconstruction_clip(self, tmp_path, model_file):
        # bumping quad_points must not loosen the reconstruction clip
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"numerics": {"quad_points": 4096}}))
        out = tmp_path / "recon.csv"
        rc = main(["reconstruct", "--model", model_file(EXP_MODEL), "--kind", "rev-mrl",
                   "--component", "first", "--grid", "7", "--config", str(cfgfile),
                   "--out", str(out)])
        assert rc == 0
        assert max(float(r["abs_error"]) for r in read_rows(out)) <= 1e-6

    def test_unknown_numerics_key_exit_3(self, tmp_path, model_file):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"numerics": {"panels": 512}}))
        rc = main(["curve", "--model", model_file(EXP_MODEL), "-p", "0.5", "--dir", "++",
                   "--config", str(cfgfile), "--out", str(tmp_path / "x.csv")])
        assert rc == 3

    def test_unknown_top_key_exit_3(self, tmp_path, model_file):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"tolerances": {}}))
        rc = main(["curve", "--model", model_file(EXP_MODEL), "-p", "0.5", "--dir", "++",
                   "--config", str(cfgfile), "--out", str(tmp_path / "x.csv")])
        assert rc == 3
