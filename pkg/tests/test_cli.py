import json
import math

import numpy as np
import pytest

from fransonsim import SchemaError
from fransonsim.cli import main, parse_config, read_csv


def run(args):
    return main([str(a) for a in args])


class TestConfigParsing:
    def test_minimal_config_gets_defaults(self):
        cfg = parse_config("{}")
        assert cfg.source["pump_wavelength_nm"] == 406.2
        assert cfg.source["center_wavelength_u_nm"] == 812.4
        assert cfg.counting["plateau_rate_hz"] == 2000.0
        assert cfg.stages["geometry_factor"] == 1.0

    def test_visibility_out_of_range(self):
        with pytest.raises(SchemaError, match="visibility"):
            parse_config('{"source": {"visibility": 1.3}}')

    def test_unknown_key_rejected(self):
        with pytest.raises(SchemaError, match="unknown key"):
            parse_config('{"source": {"pump_nm": 406.2}}')
        with pytest.raises(SchemaError, match="unknown key"):
            parse_config('{"sources": {}}')

    def test_wrong_type_rejected(self):
        with pytest.raises(SchemaError, match="plateau_rate_hz"):
            parse_config('{"counting": {"plateau_rate_hz": "fast"}}')

    def test_energy_conservation_checked(self):
        doc = {"source": {"center_wavelength_u_nm": 810.0,
                          "center_wavelength_l_nm": 812.4}}
        with pytest.raises(SchemaError, match="energy conservation"):
            parse_config(json.dumps(doc))

    def test_consistent_nondegenerate_pair_accepted(self):
        lam_u = 810.0
        lam_l = 1.0 / (1.0 / 406.2 - 1.0 / lam_u)
        doc = {"source": {"center_wavelength_u_nm": lam_u,
                          "center_wavelength_l_nm": round(lam_l, 6)}}
        cfg = parse_config(json.dumps(doc))
        assert cfg.source["center_wavelength_u_nm"] == lam_u


class TestScanCommand:
    def test_default_preset_writes_dip_csv(self, tmp_path, capsys):
        out = tmp_path / "fig2a.csv"
        assert run(["scan", "--preset", "fig2a", "--out", out]) == 0
        positions, probabilities, counts = read_csv(out)
        assert counts is None
        i = np.argmin(probabilities)
        assert positions[i] == 0.0
        assert probabilities[i] == pytest.approx(0.5 * (1.0 - 0.93), abs=1e-12)

    def test_counts_flag_populates_counts(self, tmp_path):
        out = tmp_path / "fig3.csv"
        assert run(["scan", "--preset", "fig3", "--counts", "--seed", 5,
                    "--out", out]) == 0
        positions, probabilities, counts = read_csv(out)
        assert counts is not None and np.all(counts >= 0)
        # beat oscillation present: probability crosses the plateau repeatedly
        crossings = np.sum(np.diff(np.sign(probabilities - 0.5)) != 0)
        assert crossings >= 4

    def test_csv_is_bit_stable(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(["scan", "--preset", "fig2c", "--counts", "--seed", 11,
                    "--out", a]) == 0
        assert run(["scan", "--preset", "fig2c", "--counts", "--seed", 11,
                    "--out", b]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_svg_output(self, tmp_path):
        svg = tmp_path / "plot.svg"
        assert run(["scan", "--preset", "fig2a", "--out", tmp_path / "x.csv",
                    "--svg", svg]) == 0
        head = svg.read_text()[:200]
        assert "<?xml" in head and "svg" in head

    def test_custom_scan_from_config(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({
            "source": {"visibility": 0.8},
            "stages": {"dx1_um": {"start": -120.0, "stop": 120.0, "num": 81}},
        }))
        out = tmp_path / "custom.csv"
        assert run(["scan", "--preset", "custom", "--config", config,
                    "--out", out]) == 0
        positions, probabilities, _ = read_csv(out)
        assert len(positions) == 81
        assert probabilities.max() == pytest.approx(0.9, abs=1e-9)

    def test_custom_scan_requires_exactly_one_grid(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"stages": {"dx1_um": 0.0}}))
        assert run(["scan", "--preset", "custom", "--config", config,
                    "--out", tmp_path / "x.csv"]) == 1

    def test_config_overrides_preset_visibility(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"source": {"visibility": 0.5}}))
        out = tmp_path / "fig2a.csv"
        assert run(["scan", "--preset", "fig2a", "--sign", 1,
                    "--config", config, "--out", out]) == 0
        _, probabilities, _ = read_csv(out)
        assert probabilities.max() == pytest.approx(0.75, abs=1e-9)

    def test_bad_config_exits_1(self, tmp_path, capsys):
        config = tmp_path / "bad.json"
        config.write_text('{"source": {"visibility": 2}}')
        assert run(["scan", "--config", config]) == 1
        assert "visibility" in capsys.readouterr().err

    def test_unwritable_output_exits_2(self, tmp_path):
        assert run(["scan", "--out", tmp_path / "no" / "dir" / "x.csv"]) == 2


class TestFitCommand:
    def test_hom_roundtrip(self, tmp_path, capsys):
        csv = tmp_path / "fig2a.csv"
        report = tmp_path / "fit.json"
        run(["scan", "--preset", "fig2a", "--sign", 1, "--counts",
             "--seed", 23, "--out", csv])
        assert run(["fit", "--in", csv, "--model", "hom",
                    "--out", report]) == 0
        payload = json.loads(report.read_text())
        assert payload["visibility"] == pytest.approx(0.92, abs=0.03)
        assert "visibility" in capsys.readouterr().out

    def test_beat_roundtrip(self, tmp_path):
        csv = tmp_path / "fig3.csv"
        report = tmp_path / "fit.json"
        run(["scan", "--preset", "fig3", "--counts", "--seed", 29,
             "--out", csv])
        assert run(["fit", "--in", csv, "--model", "beat",
                    "--out", report]) == 0
        payload = json.loads(report.read_text())
        assert payload["delta_f_hz"] == pytest.approx(0.69e12, abs=0.01e12)
        assert payload["delta_lambda_m"] == pytest.approx(1.52e-9, abs=0.03e-9)

    def test_polarization_roundtrip(self, tmp_path):
        csv = tmp_path / "fig2d.csv"
        report = tmp_path / "fit.json"
        run(["scan", "--preset", "fig2d", "--counts", "--seed", 31,
             "--out", csv])
        assert run(["fit", "--in", csv, "--model", "polarization",
                    "--out", report]) == 0
        payload = json.loads(report.read_text())
        assert payload["visibility"] == pytest.approx(0.94, abs=0.02)

    def test_envelope_roundtrip(self, tmp_path):
        csv = tmp_path / "fig4.csv"
        report = tmp_path / "fit.json"
        run(["scan", "--preset", "fig4", "--out", csv])
        assert run(["fit", "--in", csv, "--model", "envelope",
                    "--out", report]) == 0
        payload = json.loads(report.read_text())
        assert payload["center_m"] == pytest.approx(1e-3, abs=2e-6)

    def test_exact_probability_csv_fits_too(self, tmp_path):
        csv = tmp_path / "fig2a.csv"
        report = tmp_path / "fit.json"
        run(["scan", "--preset", "fig2a", "--sign", -1, "--out", csv])
        assert run(["fit", "--in", csv, "--model", "hom",
                    "--out", report]) == 0
        payload = json.loads(report.read_text())
        assert payload["visibility"] == pytest.approx(0.93, abs=1e-6)

    def test_accidental_corrected_estimate_reported(self, tmp_path, capsys):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps(
            {"counting": {"accidental_rate_hz": 400.0}}))
        csv = tmp_path / "fig2a.csv"
        run(["scan", "--preset", "fig2a", "--sign", 1, "--counts",
             "--seed", 37, "--config", config, "--out", csv])
        assert run(["fit", "--in", csv, "--model", "hom",
                    "--config", config]) == 0
        out = capsys.readouterr().out
        assert "accidentals subtracted" in out

    def test_flat_data_is_featureless(self, tmp_path, capsys):
        csv = tmp_path / "flat.csv"
        lines = ["position,probability,counts,uncertainty"]
        rng = np.random.default_rng(3)
        for i in range(64):
            n = rng.poisson(2000.0)
            lines.append(f"{i * 1e-6},0.5,{n},{math.sqrt(n)}")
        csv.write_text("\n".join(lines) + "\n")
        code = run(["fit", "--in", csv, "--model", "hom",
                    "--out", tmp_path / "r.json"])
        if code == 0:
            payload = json.loads((tmp_path / "r.json").read_text())
            assert abs(payload["visibility"]) <= \
                2.0 * payload["sigma_visibility"] + 1e-3
        else:
            assert code == 3

    def test_malformed_csv_exits_1(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("position;probability\n1;2\n")
        assert run(["fit", "--in", bad, "--model", "hom"]) == 1

    def test_missing_csv_exits_2(self, tmp_path):
        assert run(["fit", "--in", tmp_path / "nope.csv",
                    "--model", "hom"]) == 2


class TestReportCommand:
    def test_report_runs_and_summarizes(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert run(["report", "--seed", 7, "--out", out]) == 0
        payload = json.loads(out.read_text())
        assert payload["fig2a peak"]["visibility"]["estimated"] == \
            pytest.approx(0.92, abs=0.03)
        assert payload["fig3 dip"]["beat freq (THz)"]["estimated"] == \
            pytest.approx(0.69, abs=0.01)
        assert payload["fig4"]["center (mm)"]["estimated"] == \
            pytest.approx(1.0, abs=0.01)
        assert "visibility" in capsys.readouterr().out
