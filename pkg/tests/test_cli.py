from __future__ import annotations

import csv
import io
import json

import pytest

from lishwi.cli import main

IMPAIRED = ["--alpha", "2", "--beta", "3", "--z0", "2", "--power-db", "20", "--n0", "1"]


def _csv_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def test_capacity_sweep_csv(capsys):
    code = main(["capacity-sweep", "--var", "area", "--lo", "0.01", "--hi", "100",
                 "--steps", "20", "--log", "--power-db", "30"])
    assert code == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 20
    assert list(rows[0]) == ["A", "tau", "area", "zeta", "n_eff", "sigma", "sigma_db",
                             "capacity_nat", "utility", "gamma0", "hwi_term"]
    caps = [float(r["capacity_nat"]) for r in rows]
    assert all(b > a for a, b in zip(caps, caps[1:]))


def test_bits_column(capsys):
    assert main(["capacity-sweep", "--steps", "3", "--bits"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert list(rows[0])[-1] == "capacity_bit"


def test_utility_sweep_respects_bound(capsys):
    assert main(["utility-sweep", "--var", "tau", "--lo", "0.05", "--hi", "2",
                 "--steps", "25", *IMPAIRED]) == 0
    for row in _csv_rows(capsys.readouterr().out):
        assert float(row["utility"]) <= float(row["gamma0"])


def test_single_step_is_rejected(capsys):
    assert main(["capacity-sweep", "--steps", "1"]) == 1
    assert "lishwi:" in capsys.readouterr().err


def test_unknown_method_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["capacity-sweep", "--method", "spherical"])
    assert excinfo.value.code == 1


def test_turning_point_json(capsys):
    assert main(["turning-point", *IMPAIRED, "--format", "json"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["tau_star"] == pytest.approx(0.3827, abs=5e-4)
    assert result["method"] == "disk"
    assert result["converged"] is True


def test_turning_point_without_impairments(capsys):
    assert main(["turning-point", "--alpha", "0", "--beta", "3", "--z0", "2"]) == 2
    assert "no sign change" in capsys.readouterr().err


def test_split_at_beta_zero_is_flat(capsys):
    assert main(["split", "--alpha", "1", "--beta", "0", "--units", "1,3,5,11"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert [r["m_units"] for r in rows] == ["1", "3", "5", "11"]
    hwi = [float(r["hwi_term"]) for r in rows]
    assert hwi == pytest.approx([hwi[0]] * 4, rel=1e-12)


def test_split_at_beta_one_reduces_noise(capsys):
    assert main(["split", "--alpha", "1", "--beta", "1", "--units", "1,3,5,11"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    hwi = [float(r["hwi_term"]) for r in rows]
    caps = [float(r["capacity_nat"]) for r in rows]
    assert all(b < a for a, b in zip(hwi, hwi[1:]))
    assert all(b > a for a, b in zip(caps, caps[1:]))


def test_split_rejects_bad_units():
    with pytest.raises(SystemExit) as excinfo:
        main(["split", "--units", "0,2"])
    assert excinfo.value.code == 1


def test_zeta_on_axis(capsys):
    assert main(["zeta", "--tau", "1", "--format", "json"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["zeta"] == pytest.approx(1.0 / 6.0, rel=1e-12)
    assert result["zeta_quadrature"] == pytest.approx(1.0 / 6.0, rel=1e-8)
    assert "gamma0" in result


def test_zeta_off_axis_has_quadrature_only(capsys):
    assert main(["zeta", "--tau", "1", "--x0", "1.5", "--format", "json"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert "zeta" not in result
    assert 0 < result["zeta_quadrature"] < 1.0 / 6.0


def test_noise_reports_sigma(capsys):
    assert main(["noise", "--tau", "0.3", *IMPAIRED, "--format", "json"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["method"] == "disk"
    assert result["sigma"] == pytest.approx(result["n_eff"])
    assert result["n_eff"] == pytest.approx(1.0 + result["hwi_term"])


def test_snr_loss_needs_awgn(capsys):
    assert main(["snr-loss-sweep", "--n0", "0", "--alpha", "1", "--beta", "1"]) == 1
    assert "undefined" in capsys.readouterr().err


def test_validate_mc_impairment_free(capsys):
    code = main(["validate-mc", "--alpha", "0", "--trials", "200", "--resolution", "16",
                 "--tolerance", "0.5", "--format", "json"])
    assert code == 0
    result = json.loads(capsys.readouterr().out)
    assert result["passed"] is True
    assert result["n_eff_exact"] == 1.0
    assert result["trials"] == 200


def test_output_is_byte_identical(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["capacity-sweep", "--var", "tau", "--lo", "0.05", "--hi", "1.5", "--steps", "15",
            "--method", "exact", *IMPAIRED]
    assert main([*args, "--out", str(first)]) == 0
    assert main([*args, "--out", str(second), "--workers", "3"]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes().endswith(b"\n")


@pytest.mark.parametrize("fmt", ["csv", "json"])
@pytest.mark.parametrize("command", [
    ["zeta", "--tau", "0.7", "--x0", "0.3"],
    ["noise", "--tau", "0.3", "--method", "exact", *IMPAIRED],
    ["capacity-sweep", "--steps", "6", "--log", *IMPAIRED],
    ["utility-sweep", "--var", "tau", "--lo", "0.1", "--hi", "1", "--steps", "6", *IMPAIRED],
    ["snr-loss-sweep", "--steps", "6", "--shortcut", *IMPAIRED],
    ["turning-point", *IMPAIRED],
    ["split", "--alpha", "1", "--beta", "2", "--lo", "1", "--hi", "6", "--steps", "6"],
    ["validate-mc", *IMPAIRED, "--trials", "150", "--resolution", "12", "--seed", "3"],
])
def test_every_subcommand_is_byte_identical(tmp_path, command, fmt):
    first, second = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
    codes = [main([*command, "--format", fmt, "--out", str(path)]) for path in (first, second)]
    assert codes[0] == codes[1]
    # validate-mc exits 2 when the small run misses its tolerance; the report is still written
    assert codes[0] in ((0, 2) if command[0] == "validate-mc" else (0,))
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes()


@pytest.mark.parametrize("method", ["exact", "small-area"])
def test_split_rejects_non_disk_method(capsys, method):
    assert main(["split", "--alpha", "1", "--beta", "1", "--method", method]) == 1
    assert "disk" in capsys.readouterr().err
