import json
from pathlib import Path

import numpy as np
import pytest

from gyrotrack import scenario
from gyrotrack.cli import COLUMNS, main
from gyrotrack.config import load_config, parse_config, serialize_config
from gyrotrack.errors import ConfigParseError

REPO = Path(__file__).resolve().parent.parent
ZERO_CFG = REPO / "configs" / "benchmark_zero.cfg"

GOLDEN_HEADER = (
    "t,R11,R12,R13,R21,R22,R23,R31,R32,R33,"
    "Rd11,Rd12,Rd13,Rd21,Rd22,Rd23,Rd31,Rd32,Rd33,"
    "Omega1,Omega2,Omega3,OmegaR1,OmegaR2,OmegaR3,Theta1,Theta2,Theta3,"
    "uint1,uint2,uint3,psi_E,geo_err,E_cl,momentum_drift"
)


def write_short_config(tmp_path, duration="1", extra=()):
    text = ZERO_CFG.read_text().replace("integrator.duration = 30",
                                        f"integrator.duration = {duration}")
    for old, new in extra:
        text = text.replace(old, new)
    path = tmp_path / "scenario.cfg"
    path.write_text(text)
    return path


@pytest.fixture(scope="session")
def bundled_run(tmp_path_factory):
    """One full 30 s simulate of the bundled zero-torque config."""
    out = tmp_path_factory.mktemp("bundled") / "telemetry.csv"
    assert main(["simulate", str(ZERO_CFG), "-o", str(out)]) == 0
    return out


class TestConfigFormat:
    def test_bundled_configs_parse(self):
        for name in ("benchmark_zero.cfg", "benchmark_constant.cfg",
                     "benchmark_sinusoid.cfg"):
            cfg = load_config(REPO / "configs" / name)
            assert cfg.integrator.duration == 30.0

    def test_roundtrip_idempotent(self):
        text = ZERO_CFG.read_text()
        once = serialize_config(parse_config(text))
        twice = serialize_config(parse_config(once))
        assert once == twice

    def test_parse_resolves_momentum_seed(self):
        cfg = parse_config(ZERO_CFG.read_text())
        assert np.allclose(scenario.BENCHMARK_PLANT_I @ cfg.plant.Omega0,
                           [1.0, 2.2, 5.1], atol=1e-12)

    def test_parse_resolves_derived_rotor_rate(self):
        cfg = parse_config(ZERO_CFG.read_text())
        assert cfg.reference.OmegaR0 is not None
        mu = scenario.plant_spatial_momentum(cfg.plant)
        back = cfg.reference.R0 @ (
            cfg.reference.params.locked @ cfg.reference.Omega0
            + cfg.reference.params.rotor_inertia @ cfg.reference.OmegaR0)
        assert np.abs(back - mu).max() < 1e-12

    def test_unknown_key_named(self):
        with pytest.raises(ConfigParseError, match="plant.J"):
            parse_config("plant.J = 1\n")

    def test_missing_key_named(self):
        with pytest.raises(ConfigParseError, match="plant.I"):
            parse_config("gains.kp = 1\n")

    def test_wrong_arity_named(self):
        text = ZERO_CFG.read_text().replace(
            "plant.K = 5 6 7", "plant.K = 5 6")
        with pytest.raises(ConfigParseError, match="plant.K"):
            parse_config(text)

    def test_number_parse_error_named(self):
        text = ZERO_CFG.read_text().replace(
            "gains.kp = 1", "gains.kp = one")
        with pytest.raises(ConfigParseError, match="gains.kp"):
            parse_config(text)

    def test_exactly_one_omega_form(self):
        text = ZERO_CFG.read_text() + "plant.Omega0 = 1 0 0\n"
        with pytest.raises(ConfigParseError, match="Omega0"):
            parse_config(text)

    def test_duplicate_key_rejected(self):
        text = ZERO_CFG.read_text() + "gains.kp = 2\n"
        with pytest.raises(ConfigParseError, match="duplicate"):
            parse_config(text)

    def test_nonpositive_mu_rejected(self):
        text = ZERO_CFG.read_text().replace("gains.mu_hess = 2.0048",
                                            "gains.mu_hess = -1")
        with pytest.raises(ConfigParseError):
            parse_config(text)

    def test_optional_bounds_default_to_formulas(self):
        from gyrotrack.control import lambda_sup_formula, mu_hess_formula
        text = "\n".join(
            line for line in ZERO_CFG.read_text().splitlines()
            if not line.startswith(("gains.kappa", "gains.mu_hess",
                                    "gains.lambda_sup")))
        cfg = parse_config(text)
        i = cfg.plant.params.body_inertia
        assert abs(cfg.gains.mu_hess - mu_hess_formula(i)) < 1e-12
        assert abs(cfg.gains.lambda_sup - lambda_sup_formula(i)) < 1e-12


class TestSimulate:
    def test_bundled_zero_row_count(self, bundled_run):
        lines = bundled_run.read_text().splitlines()
        assert len(lines) == 30002          # header + 30001 samples
        assert lines[0] == GOLDEN_HEADER

    def test_metadata_sidecar(self, bundled_run):
        meta = json.loads(bundled_run.with_suffix(".meta.json").read_text())
        assert meta["samples"] == 30001
        assert meta["feasibility"]["feasible"] is False
        assert meta["conservation"]["momentum_drift"] < 1e-6
        assert meta["conservation"]["orthogonality_drift"] < 1e-9
        assert meta["gains"]["mu_hess"] == 2.0048
        assert abs(meta["gains"]["mu_hess_formula"] - 6.8494) < 1e-3
        assert meta["schema"]["columns"] == COLUMNS

    def test_theta_column_wrapped(self, bundled_run):
        data = np.genfromtxt(bundled_run, delimiter=",", names=True)
        for k in (1, 2, 3):
            col = data[f"Theta{k}"]
            assert col.min() >= 0.0 and col.max() < 2.0 * np.pi

    def test_rerun_byte_identical(self, tmp_path):
        cfg = write_short_config(tmp_path)
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["simulate", str(cfg), "-o", str(out_a)]) == 0
        assert main(["simulate", str(cfg), "-o", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_malformed_config_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text(ZERO_CFG.read_text().replace("plant.I =", "plant.J ="))
        assert main(["simulate", str(bad), "-o", str(tmp_path / "x.csv")]) == 1
        assert "plant.J" in capsys.readouterr().err

    def test_missing_file_exit_1(self, tmp_path):
        assert main(["simulate", str(tmp_path / "nope.cfg"),
                     "-o", str(tmp_path / "x.csv")]) == 1

    def test_divergence_exit_2(self, tmp_path):
        cfg = write_short_config(
            tmp_path, duration="50",
            extra=[("integrator.step = 0.001", "integrator.step = 1.0"),
                   ("gains.kp = 1", "gains.kp = 500000")])
        assert main(["simulate", str(cfg), "-o", str(tmp_path / "d.csv")]) == 2


class TestTuneGains:
    def test_benchmark_verdict(self, capsys):
        assert main(["tune-gains", str(ZERO_CFG)]) == 0
        out = capsys.readouterr().out
        assert "verdict: infeasible" in out
        assert "10.8" in out                 # kp floor at kappa = 0.6
        assert "2.0048" in out and "6.84" in out   # stored and formula bounds

    def test_synthesize_recheck_passes(self, capsys):
        assert main(["tune-gains", str(ZERO_CFG), "--synthesize"]) == 0
        out = capsys.readouterr().out
        assert out.count("verdict: feasible") == 1

    def test_synthesize_with_unit_kd(self, tmp_path, capsys):
        cfg = write_short_config(tmp_path,
                                 extra=[("gains.kd = 3", "gains.kd = 1")])
        assert main(["tune-gains", str(cfg), "--synthesize"]) == 0
        assert "verdict: feasible" in capsys.readouterr().out

    def test_bad_config_exit_1(self, tmp_path, capsys):
        cfg = write_short_config(tmp_path,
                                 extra=[("gains.mu_hess = 2.0048",
                                         "gains.mu_hess = -1")])
        assert main(["tune-gains", str(cfg)]) == 1
        assert "error" in capsys.readouterr().err


class TestCompare:
    def test_writes_paired_outputs(self, tmp_path):
        cfg = write_short_config(
            tmp_path, extra=[("reference.program = zero",
                              "reference.program = constant"),
                             ("reference.amplitude = 0.0 0.0 0.0",
                              "reference.amplitude = 0.2 0.1 0.2")])
        out = tmp_path / "cmp"
        assert main(["compare", str(cfg), "-o", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["proposed_integral"] > 0.0
        assert summary["baseline_integral"] > 0.0
        for name in ("effort_proposed.csv", "effort_baseline.csv"):
            lines = (out / name).read_text().splitlines()
            assert lines[0] == "t,uint_norm,uext_norm"
            assert len(lines) == 1002

    def test_missing_parent_exit_1(self, tmp_path):
        cfg = write_short_config(tmp_path)
        assert main(["compare", str(cfg),
                     "-o", str(tmp_path / "no" / "such" / "dir")]) == 1


class TestPlot:
    def test_renders_three_svgs(self, bundled_run, tmp_path):
        out = tmp_path / "plots.svg"
        assert main(["plot", str(bundled_run), "-o", str(out)]) == 0
        for path in (out, tmp_path / "plots_psi.svg",
                     tmp_path / "plots_effort.svg"):
            assert path.exists() and path.stat().st_size > 500

    def test_entry_selection(self, bundled_run, tmp_path):
        out = tmp_path / "panels.svg"
        assert main(["plot", str(bundled_run), "-o", str(out),
                     "--entries", "11,33"]) == 0
        text = out.read_text()
        assert "attitude entry (1,1)" in text
        assert "attitude entry (3,3)" in text
        assert "attitude entry (1,2)" not in text

    def test_bad_entry_exit_1(self, bundled_run, tmp_path):
        assert main(["plot", str(bundled_run), "-o", str(tmp_path / "x.svg"),
                     "--entries", "14"]) == 1

    def test_header_only_csv_exit_1_no_partials(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(GOLDEN_HEADER + "\n")
        assert main(["plot", str(empty), "-o", str(tmp_path / "e.svg")]) == 1
        assert not list(tmp_path.glob("*.svg"))

    def test_schema_mismatch_exit_1(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("t,x,y\n0,1,2\n")
        assert main(["plot", str(bad), "-o", str(tmp_path / "b.svg")]) == 1


class TestCheck:
    def test_valid_config(self, capsys):
        assert main(["check", str(ZERO_CFG)]) == 0
        assert "config ok" in capsys.readouterr().out

    def test_invalid_config(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text(ZERO_CFG.read_text().replace(
            "plant.I = 4 1 1 1 5.2 2 1 2 6.3", "plant.I = not numbers"))
        assert main(["check", str(bad)]) == 1
        assert "plant.I" in capsys.readouterr().err
