import json
import os

import numpy as np
import pytest

from miint import cli
from miint import periods as per
from miint import qforms as qf
from miint.group import S, T


def run_cli(capsys, *args):
    code = cli.main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dim_subcommand(capsys):
    code, out, _ = run_cli(capsys, "dim", "--k", "16", "--k1", "12")
    assert code == 0
    payload = json.loads(out)
    assert payload["dim_Mk_rho"] == 19
    assert payload["dim_M2c"] == 23
    assert payload["config"]["C"] == 40


def test_dim_table_csv(capsys):
    code, out, _ = run_cli(capsys, "dim", "--table", "10", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,k1,dim_Mk_rho,dim_M2c"
    assert len(lines) > 3


def test_period_matches_library(capsys):
    code, out, _ = run_cli(capsys, "period", "--form", "delta", "--gamma", "S")
    assert code == 0
    payload = json.loads(out)
    coeffs = [complex(re, im) for re, im in payload["coeffs"]]
    direct = per.period_poly(qf.delta_q(120), S)
    assert np.allclose(coeffs, direct.coeffs, rtol=0, atol=1e-15)
    assert len(coeffs) == 11


def test_gamma_parsing(capsys):
    code, out, _ = run_cli(capsys, "period", "--gamma", "S*T*S")
    assert code == 0
    payload = json.loads(out)
    st = S * T * S
    assert payload["gamma"] == list(st.entries)
    code, out, _ = run_cli(capsys, "period", "--gamma", "0,-1,1,2")
    assert code == 0


def test_lvalue_method_tag(capsys):
    code, out, _ = run_cli(capsys, "lvalue", "--s", "7")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "series"
    code, out, _ = run_cli(capsys, "lvalue", "--s", "3")
    assert json.loads(out)["method"] == "extract"


def test_lvalue_precision_exit(capsys):
    code, _, err = run_cli(capsys, "lvalue", "--s", "3", "--method", "series")
    assert code == 2
    assert "convergence" in err


def test_usage_error_exit(capsys):
    code, _, err = run_cli(capsys, "period", "--gamma", "Q")
    assert code == 1
    assert cli.main(["nonsense-command"]) == 1


def test_eval_and_eisenstein(capsys):
    code, out, _ = run_cli(capsys, "eval", "--form", "e4", "--z", "0", "2")
    assert code == 0
    val = json.loads(out)["value"]
    direct = qf.eval_form(qf.eisenstein_q(4, 120), 2j)
    assert abs(complex(*val) - direct) <= 1e-12
    code, out, _ = run_cli(capsys, "eisenstein", "--r", "8", "--s", "8", "--z", "0", "2")
    payload = json.loads(out)
    assert payload["weights"] == [8, 8]
    assert "tail" in payload


def test_forms_csv_and_json(capsys):
    code, out, _ = run_cli(capsys, "forms", "--kind", "delta", "--N", "8", "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[1] == "delta,0,0"
    assert rows[2] == "delta,1,1"
    code, out, _ = run_cli(capsys, "forms", "--kind", "cusp-basis", "--weight", "16", "--N", "12")
    payload = json.loads(out)
    assert payload["forms"]["s16.0"]["weight"] == 16


def test_check_vvdim_exit_zero(capsys):
    code, out, err = run_cli(capsys, "check", "vvdim")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert "[PASS]" in err


def test_deterministic_output(capsys):
    _, out1, _ = run_cli(capsys, "eisenstein", "--r", "10", "--s", "10", "--z", "0.5", "2")
    _, out2, _ = run_cli(capsys, "eisenstein", "--r", "10", "--s", "10", "--z", "0.5", "2")
    assert out1 == out2


def test_config_file_and_override(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("C=20\nD=200\nR=8\nS=8\n# comment\n")
    code, out, _ = run_cli(capsys, "--config", str(cfg), "eisenstein", "--z", "0", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["config"]["C"] == 20
    assert payload["weights"] == [8, 8]
    # CLI flags win over the file
    code, out, _ = run_cli(capsys, "--config", str(cfg), "eisenstein", "--z", "0", "2", "--C", "25", "--D", "250")
    assert json.loads(out)["config"]["C"] == 25
    # env var supplies the default path
    monkeypatch.setenv("MIINT_CONFIG", str(cfg))
    code, out, _ = run_cli(capsys, "eisenstein", "--z", "0", "2")
    assert json.loads(out)["config"]["D"] == 200


def test_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("WIDGETS=3\n")
    from miint.config import RunConfig

    with pytest.raises(ValueError):
        RunConfig().apply_file(str(cfg))


def test_iterated_subcommand(capsys):
    code, out, _ = run_cli(capsys, "iterated", "--depth", "2", "--forms", "delta", "--z", "0", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["weights"] == [2, 12]
    assert payload["parabolic_residual"] <= 1e-9
    assert len(payload["coeffs"]) == 11


def test_phi_subcommand_single_coefficient(capsys):
    code, out, _ = run_cli(capsys, "phi", "--j", "0", "--z", "0", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["j"] == 0
    assert "tail" in payload and "coefficient" in payload


def test_fourier_subcommand(capsys):
    code, out, _ = run_cli(capsys, "fourier", "--form", "delta", "--l", "1", "--y", "1.0")
    assert code == 0
    payload = json.loads(out)
    import math

    assert abs(complex(*payload["value"]) - math.exp(-2 * math.pi)) <= 1e-10
