"""Command-line surface tests: dispatch, formats, config handling, exit codes."""

import json

import pytest

from zenogate import cli
from zenogate.gate import GateGeometry, optimal_rates, segment_matrix


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[1:]]
    return header, rows


class TestDemo:
    def test_ten_segment_survival(self, capsys):
        code, out, err = run_cli(capsys, "demo", "--N", "10")
        assert code == 0 and err == ""
        _, rows = parse_csv(out)
        assert float(rows[0]["survival"]) == pytest.approx(0.780546069781, rel=1e-11)
        assert "0.780546069781" in out  # 12 significant digits

    def test_single_measurement(self, capsys):
        code, out, _ = run_cli(capsys, "demo", "--N", "1")
        _, rows = parse_csv(out)
        assert float(rows[0]["survival"]) < 1e-30

    def test_provenance_block(self, capsys):
        _, out, _ = run_cli(capsys, "demo", "--N", "10")
        assert out.startswith("# zenogate ")
        assert "# seed=0" in out
        assert "# config_hash=" in out
        assert "# units:" in out


class TestGateCommand:
    def test_single_segment_against_matrix_oracle(self, capsys):
        # N=1 three-branch sanity path: epsilon defaults to pi/sqrt(2)
        kappa = 1e9
        rates, _ = optimal_rates(kappa, 1, branches=3)
        seg_1 = segment_matrix(GateGeometry(3, 1), rates.one_photon)
        seg_2 = segment_matrix(GateGeometry(3, 1), rates.two_photon)
        expected_no = 1.0 - abs(seg_1[2, 0]) ** 2
        expected_with = 1.0 - abs(seg_2[0, 0]) ** 2

        code, out, _ = run_cli(capsys, "gate", "--branches", "3", "--N", "1",
                               "--kappa", "1e9")
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0]["p_error_exact"]) == pytest.approx(expected_no, rel=1e-9)

        code, out, _ = run_cli(capsys, "gate", "--branches", "3", "--N", "1",
                               "--kappa", "1e9", "--control")
        _, rows = parse_csv(out)
        assert float(rows[0]["p_error_exact"]) == pytest.approx(expected_with, rel=1e-9)
        assert expected_no != pytest.approx(expected_with, rel=1e-3)

    def test_rates_required(self, capsys):
        code, _, err = run_cli(capsys, "gate", "--N", "10")
        assert code == 2
        assert "kappa" in err


class TestCurveCommand:
    def test_columns_and_range(self, capsys):
        code, out, _ = run_cli(capsys, "curve", "--samples", "15")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["xi_2gamma", "p1_exact", "p2_exact", "p1_approx", "p2_approx"]
        assert len(rows) == 15
        assert float(rows[0]["xi_2gamma"]) == 0.0
        assert float(rows[-1]["xi_2gamma"]) == pytest.approx(0.14, rel=1e-12)


class TestDesignCommand:
    def test_three_strategies(self, capsys):
        code, out, _ = run_cli(capsys, "design", "--p-target", "0.5",
                               "--kappa-max", "2000", "--n-max", "50")
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 3
        for row in rows:
            assert max(float(row["p1_exact"]), float(row["p2_exact"])) <= 0.5

    def test_infeasible_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "design", "--p-target", "0.001",
                               "--kappa-max", "10", "--n-max", "30")
        assert code == 3
        assert "kappa" in err


class TestTablesCommand:
    def test_reference_rows(self, capsys):
        code, out, _ = run_cli(capsys, "tables")
        assert code == 0
        header, rows = parse_csv(out)
        assert header[:4] == ["table", "p_target", "segments", "kappa"]
        assert len(rows) == 18  # 9 feasibility rows + three detail tables of 3
        small_n = [r for r in rows if r["table"] == "2"]
        assert len(small_n) == 3
        row = next(r for r in small_n if r["segments"] == "8")
        assert float(row["kappa"]) == pytest.approx(22.0, rel=0.20)
        assert float(row["p2_segment"]) == pytest.approx(0.99, abs=0.005)
        assert float(row["p1_segment"]) == pytest.approx(0.21, abs=0.005)
        assert abs(int(row["enhancement"]) - 471) / 471 < 0.10


class TestAbsorberCommand:
    def test_reference_absorber(self, capsys):
        code, out, _ = run_cli(capsys, "absorber")
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0]["p_2gamma"]) == pytest.approx(8.79e-11, rel=1e-2)
        assert float(rows[0]["kappa0"]) == pytest.approx(0.0479, abs=5e-4)

    def test_lambda_scheme_flag(self, capsys):
        _, out, _ = run_cli(capsys, "absorber", "--delta", "3e9",
                            "--delta-control", "3e10", "--f", "0.03", "--lambda-scheme")
        _, rows = parse_csv(out)
        assert 1e-8 <= float(rows[0]["p_2gamma"]) <= 1e-6


class TestEnhanceCommand:
    def test_multipass_default_is_phase_matched(self, capsys):
        _, out, _ = run_cli(capsys, "enhance", "--mechanism", "multipass", "--n", "16")
        _, rows = parse_csv(out)
        p2 = float(rows[0]["p_2gamma"])
        scatter = float(rows[0]["p_1gamma_scatter"])
        assert p2 / scatter == pytest.approx(16.0, rel=1e-9)

    def test_random_phase_echoes_seed_and_is_deterministic(self, capsys):
        args = ("enhance", "--mechanism", "random_phase", "--S", "500",
                "--trials", "20", "--seed", "7")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2
        assert "# seed=7" in out1
        _, out3, _ = run_cli(capsys, *args[:-2], "--seed", "8")
        assert out3 != out1

    def test_pump_summary(self, capsys):
        _, out, _ = run_cli(capsys, "enhance", "--mechanism", "pump")
        _, rows = parse_csv(out)
        assert float(rows[0]["s_over_S"]) == pytest.approx(1.51e-5, rel=1e-2)


class TestOutputAndFormats:
    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "demo", "--N", "10", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["provenance"]["seed"] == 0
        assert doc["rows"][0]["survival"] == pytest.approx(0.780546069781, rel=1e-11)

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "demo.csv"
        code, out, _ = run_cli(capsys, "demo", "--N", "10", "--output", str(target))
        assert code == 0 and out == ""
        assert "survival" in target.read_text()

    def test_unwritable_output_is_io_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "demo", "--N", "10",
                               "--output", str(tmp_path / "missing" / "x.csv"))
        assert code == 4
        assert err != ""

    def test_byte_identical_reruns(self, capsys):
        _, out1, _ = run_cli(capsys, "tables", "--format", "csv")
        _, out2, _ = run_cli(capsys, "tables", "--format", "csv")
        assert out1 == out2


class TestConfigFile:
    def test_minimal_demo_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "command": "demo",
            "parameters": {"N": {"value": 1, "unit": "dimensionless"}},
        }))
        code, out, _ = run_cli(capsys, "--config", str(cfg))
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0]["survival"]) < 1e-30

    def test_unit_mismatch_names_parameter(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "command": "demo",
            "parameters": {"N": {"value": 10, "unit": "eV"}},
        }))
        code, _, err = run_cli(capsys, "--config", str(cfg))
        assert code == 2
        assert "'N'" in err

    def test_unknown_config_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"command": "demo", "parameters": {}, "bogus": 1}))
        code, _, err = run_cli(capsys, "--config", str(cfg))
        assert code == 2
        assert "bogus" in err

    def test_unknown_parameter_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "command": "demo",
            "parameters": {"M": {"value": 10, "unit": ""}},
        }))
        code, _, err = run_cli(capsys, "--config", str(cfg))
        assert code == 2
        assert "'M'" in err

    def test_print_config_round_trip(self, capsys, tmp_path):
        argv = ["curve", "--kappa", "500", "--N", "200", "--samples", "11"]
        code, cfg_text, _ = run_cli(capsys, *argv, "--print-config")
        assert code == 0
        cfg = tmp_path / "effective.json"
        cfg.write_text(cfg_text)

        _, direct, _ = run_cli(capsys, *argv)
        _, via_config, _ = run_cli(capsys, "--config", str(cfg))
        assert via_config == direct

    def test_cli_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "command": "demo",
            "parameters": {"N": {"value": 1, "unit": ""}},
        }))
        code, out, _ = run_cli(capsys, "--config", str(cfg), "demo", "--N", "10")
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0]["survival"]) == pytest.approx(0.780546069781, rel=1e-11)

    def test_config_units_are_converted(self, capsys, tmp_path):
        # wavelength given in metres must equal the nm default run
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "command": "absorber",
            "parameters": {"wavelength": {"value": 5e-7, "unit": "m"}},
        }))
        _, via_config, _ = run_cli(capsys, "--config", str(cfg))
        _, direct, _ = run_cli(capsys, "absorber", "--wavelength", "500")
        v1 = parse_csv(via_config)[1][0]["p_2gamma"]
        v2 = parse_csv(direct)[1][0]["p_2gamma"]
        assert float(v1) == pytest.approx(float(v2), rel=1e-9)
