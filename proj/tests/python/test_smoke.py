import json
import math
import os
import pathlib

import numpy as np
import pytest

import nonmarkov

DATA = pathlib.Path(os.environ.get("NONMARKOV_TEST_DATA", pathlib.Path(__file__).parents[1] / "data"))


def test_bound_poles_eta2():
    model = nonmarkov.SpectralModel.waveguide(2.0, 10.0)
    report = nonmarkov.find_bound_poles(model, 10.0)
    omegas = sorted(p["omega"] for p in report["bound_poles"])
    assert omegas == pytest.approx([10 - 4 / math.sqrt(3), 10 + 4 / math.sqrt(3)], abs=1e-8)
    assert report["residue_sum"] == pytest.approx(2 / 3, abs=1e-8)
    assert abs(report["sum_rule_residual"]) < 1e-6


def test_solve_returns_arrays():
    model = nonmarkov.SpectralModel.waveguide(0.5, 10.0)
    out = nonmarkov.solve(model, 10.0, theta=2.0, dt=0.01, horizon=2.0)
    assert out["u"].dtype == np.complex128
    assert out["u"].shape == out["t"].shape == out["v"].shape == (201,)
    assert out["u"][0] == 1.0
    assert np.all(np.abs(out["u"]) <= 1.0 + 1e-9)
    assert np.all(out["v"] >= 0.0)


def test_solver_matches_reconstruction():
    model = nonmarkov.SpectralModel.waveguide(4.0, 10.0)
    u = nonmarkov.solve(model, 10.0, dt=1e-3, horizon=3.0)["u"]
    r = nonmarkov.reconstruct_u(model, 10.0, dt=1e-3, horizon=3.0)
    assert np.max(np.abs(u - r)) < 1e-3


def test_wigner_helpers():
    assert nonmarkov.fringe_visibility(1.0, 0.0, 0.0) == pytest.approx(math.exp(-2))
    assert nonmarkov.cat_wigner(0.0, 1.0, 0.0, 0.3) == pytest.approx(2 / math.pi * math.exp(-0.18))
    rho = np.zeros((12, 12), dtype=complex)
    rho[1, 1] = 1.0
    assert nonmarkov.fock_wigner(rho, 0.0) == pytest.approx(-2 / math.pi)
    assert nonmarkov.thermal_wigner(0.5, 0.0) == pytest.approx(1 / math.pi)


def test_errors_carry_their_kind():
    with pytest.raises(nonmarkov.Error, match="^domain"):
        nonmarkov.steady_envelope(1.0)
    with pytest.raises(nonmarkov.Error, match="^branch"):
        nonmarkov.sigma(nonmarkov.SpectralModel.waveguide(1.0, 10.0), -10.0j)


def test_run_poles(tmp_path):
    code, files = nonmarkov.run("poles", DATA / "poles_eta2.ini", tmp_path)
    assert code == 0
    assert "poles.json" in files
    report = json.loads((tmp_path / "poles.json").read_text())
    assert [p["residue"] for p in report["bound_poles"]] == pytest.approx([1 / 3, 1 / 3])
    echo = nonmarkov.parse_scenario(tmp_path / "scenario.echo.ini")
    assert echo == nonmarkov.parse_scenario(DATA / "poles_eta2.ini")
