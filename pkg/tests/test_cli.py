from __future__ import annotations

import json
import math

import numpy as np
import pytest
from scipy import integrate

from photon_adder import cli, verify
from photon_adder.added_squeezed import PasvParams, pasv_probability, pasv_quadrature
from photon_adder.conditional import BeamSplitter
from photon_adder.core.errors import ConfigError
from photon_adder.fock import FockVector
from photon_adder.io import StateDocument, format_json


def _csv(text: str) -> tuple[list[str], np.ndarray]:
    lines = text.strip().splitlines()
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    return lines[0].split(","), np.array(rows)


def _json(text: str) -> dict:
    return json.loads(text)


def test_probability_vacuum_row(capsys):
    assert cli.main(["probability", "--n0", "2", "--sweep", "0:1:3"]) == 0
    header, rows = _csv(capsys.readouterr().out)
    assert header == ["abs_beta", "n0", "P"]
    assert rows.shape == (3, 3)
    # |beta| = 0: P = |R|^{2 n0}
    assert rows[0, 2] == pytest.approx(0.2**2, rel=1e-12)


def test_csv_number_format(capsys):
    cli.main(["probability", "--n0", "1", "--sweep", "1"])
    line = capsys.readouterr().out.splitlines()[1]
    assert all(len(v.split("e")[0].replace("-", "").replace(".", "")) == 17 for v in line.split(","))


def test_output_is_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        assert cli.main(["quadrature", "--n0", "1", "4", "--phi", "0:pi:3", "--xs", "-2:2:9", "--out", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_squeezed_probability_legacy(capsys):
    assert cli.main(["probability", "--input", "squeezed:kappa=0.67", "--sweep", "0.67", "--n0", "1", "--legacy"]) == 0
    _, rows = _csv(capsys.readouterr().out)
    expected = pasv_probability(0.67, BeamSplitter.from_transmittance(0.8), 1, legacy=True)
    assert rows[0, 2] == pytest.approx(expected, rel=1e-14)


def test_squeezed_quadrature_uses_kappa_prime(capsys):
    argv = ["quadrature", "--input", "squeezed:kappa=0.67", "--kappa-prime", "0.6", "--n0", "1", "--phi", "0", "--xs", "-1:1:5"]
    assert cli.main(argv) == 0
    _, rows = _csv(capsys.readouterr().out)
    expected = pasv_quadrature(np.linspace(-1, 1, 5), 0.0, PasvParams(kappa_prime=0.6, n0=1))
    np.testing.assert_allclose(rows[:, 3], expected, rtol=1e-14)


def test_vacuum_wigner_peak(capsys):
    argv = ["wigner", "--input", "fock:n=0", "--n0", "0", "--grid", "x=-2:2:5,p=-2:2:5", "--format", "json"]
    assert cli.main(argv) == 0
    doc = _json(capsys.readouterr().out)
    assert doc["columns"] == ["n0", "x", "p", "value"]
    assert doc["meta"]["command"] == "wigner"
    values = np.array(doc["rows"])[:, 3]
    assert values.max() == pytest.approx(1.0 / math.pi, abs=1e-10)


def test_husimi_default_squeezed(capsys):
    assert cli.main(["husimi", "--n0", "1", "--grid", "x=-3:3:7,p=-3:3:7"]) == 0
    _, rows = _csv(capsys.readouterr().out)
    assert rows.shape == (49, 4)
    assert np.all(rows[:, 3] >= 0)


def test_photon_dist_parity(capsys):
    assert cli.main(["photon-dist", "--n0", "1", "--format", "json"]) == 0
    rows = np.array(_json(capsys.readouterr().out)["rows"])
    n, p = rows[:, 1].astype(int), rows[:, 2]
    assert np.all(p[n % 2 == 0] == 0)
    assert math.fsum(p) == pytest.approx(1.0, abs=1e-11)


def test_custom_input(tmp_path, capsys):
    path = tmp_path / "state.json"
    path.write_text(format_json(StateDocument.from_state(FockVector(np.array([0.6, 0.8])))))
    assert cli.main(["photon-dist", "--input", f"custom:file={path}", "--n0", "1", "--t2", "1"]) == 0
    _, rows = _csv(capsys.readouterr().out)
    # (a†) weights |c_n|^2 by n + 1
    np.testing.assert_allclose(rows[:, 2], [0.0, 0.36 / 1.64, 1.28 / 1.64], rtol=1e-14)


def test_thermal_input_quadrature(capsys):
    assert cli.main(["quadrature", "--input", "thermal:nbar=0.2", "--n0", "1", "--phi", "0", "--xs", "-8:8:161"]) == 0
    _, rows = _csv(capsys.readouterr().out)
    assert integrate.simpson(rows[:, 3], x=rows[:, 2]) == pytest.approx(1.0, abs=1e-6)


def test_cat_reports_minimum(capsys):
    assert cli.main(["cat", "--n0", "3", "--grid", "x=-2:6:9,p=-2:2:5", "--format", "json"]) == 0
    doc = _json(capsys.readouterr().out)
    assert set(doc["meta"]["min_wigner"]) == {"3"}


def test_mixed_reports_both_probabilities(capsys):
    argv = ["mixed", "--binomial", "N=2,p=0.5", "--phi", "0", "--xs", "-1:1:3", "--format", "json"]
    assert cli.main(argv) == 0
    doc = _json(capsys.readouterr().out)
    assert set(doc["meta"]["probability"]) == {"paper", "posterior"}
    assert doc["meta"]["weights"] == "paper"


@pytest.mark.parametrize("flag, mode", [("paper", "paper"), ("ancilla", "paper"), ("posterior", "posterior")])
def test_weights_flag(flag, mode, capsys):
    argv = ["mixed", "--binomial", "N=2,p=0.5", "--phi", "0", "--xs", "-1:1:3", "--format", "json", "--weights", flag]
    assert cli.main(argv) == 0
    assert _json(capsys.readouterr().out)["meta"]["weights"] == mode


def test_configuration_errors_exit_1(capsys):
    assert cli.main(["probability", "--t2", "1.5"]) == 1
    assert cli.main(["probability", "--input", "laser:power=3"]) == 1
    assert cli.main(["wigner", "--grid", "x=-1:1:5"]) == 1
    assert cli.main(["mixed", "--binomial", "N=2"]) == 1
    assert cli.main([]) == 1


def test_numeric_errors_exit_2(capsys):
    assert cli.main(["probability", "--input", "squeezed:kappa=0.5", "--sweep", "0.5:1.5:3"]) == 2
    assert cli.main(["cat", "--input", "squeezed:kappa=0.5", "--kappa-prime", "-0.3", "--n0", "2"]) == 2


def test_verification_failure_exit_3(monkeypatch, capsys):
    failing = [verify.CheckResult("forced", False, 1.0)]
    monkeypatch.setattr(verify, "run_checks", lambda groups=None: failing)
    assert cli.main(["verify"]) == 3
    assert "FAIL  forced" in capsys.readouterr().out


def test_verify_group_passes(capsys):
    assert cli.main(["verify", "--groups", "reference"]) == 0
    assert "0 failed" in capsys.readouterr().out


def test_toml_layering(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('t2 = 0.5\nn0 = [1]\n\n[probability]\nn0 = [2, 3]\n')
    cfg = cli.load_config(["probability", "--config", str(path)])
    assert cfg.t2 == 0.5 and cfg.n0 == [2, 3]
    cfg = cli.load_config(["probability", "--config", str(path), "--t2", "0.7"])
    assert cfg.t2 == 0.7


def test_reference_defaults():
    cfg = cli.load_config(["wigner"])
    assert cfg.kappa_prime == 0.6 and cfg.n0 == [1, 4]
    # picking an input drops the reference kappa'
    assert cli.load_config(["wigner", "--input", "squeezed:kappa=0.3"]).kappa_prime is None


def test_parse_range():
    np.testing.assert_allclose(cli.parse_range("0:pi:3"), [0.0, math.pi / 2, math.pi])
    assert cli.parse_range("2.5").tolist() == [2.5]
    with pytest.raises(ConfigError):
        cli.parse_range("0:1")
    with pytest.raises(ConfigError):
        cli.parse_range("0:1:0")
