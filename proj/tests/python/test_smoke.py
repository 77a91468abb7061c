import math
from pathlib import Path

import numpy as np
import pytest

import pokesim

CONFIGS = Path(__file__).resolve().parents[2] / "configs"

MINIMAL = """circuit:
  variant: pokemon
  E_J: 10.0
  E_L: 1.0
  E_ctheta: 0.1
  E_cphi: 0.09
"""


def test_closed_forms():
    assert pokesim.analytic.epsilon10(10.0, 1.0) == pytest.approx(10.0 * math.pi**2 / 11.0)
    assert pokesim.analytic.a_f(10.0, 1.0, 0.1, 0.09) == pytest.approx(16.09, abs=5e-3)
    assert pokesim.analytic.gamma(10.0, 1.0, 0.1, 0.09) == pytest.approx(23.61, abs=5e-3)
    b_theta, b_phi = pokesim.analytic.b_factors(10.0, 1.0, 0.1, 0.09)
    assert b_phi / b_theta == pytest.approx(math.sqrt(0.09 * 11.0 / 1.0))


def test_solve_identifies_qubit():
    config = pokesim.parse_config(MINIMAL, "smoke")
    point = pokesim.solve(config)
    energies = np.asarray(point["energies"])
    assert energies.shape == (12,)
    assert np.all(np.diff(energies) >= 0)
    assert point["eigenvectors"].shape[1] == 12
    qubit = point["qubit"]
    assert qubit["index0"] == 0
    assert qubit["cos_theta0"] > 0.5 and qubit["cos_theta1"] < -0.5
    assert qubit["epsilon10"] == pytest.approx(8.9724, rel=0.15)


def test_noise_report():
    config = pokesim.load_config(str(CONFIGS / "pokemon_reference.yaml"))
    report = pokesim.noise_report(config)
    assert report["A_f"]["numeric"] == pytest.approx(report["A_f"]["analytic"], rel=0.15)
    assert report["charge_dephasing_elements"]["first_theta"] == 0.0
    assert report["dephasing"]["T_phi"] > 0.0
    with pytest.raises(pokesim.ConfigError, match="sweep"):
        pokesim.sweep(config)


def test_sweep_isolates_failures():
    config = pokesim.parse_config(
        MINIMAL + "sweep:\n  parameter: circuit.E_ctheta\n  values: [-1.0, 0.1]\n", "sweep"
    )
    rows = pokesim.sweep(config, jobs=2)
    assert [r["value"] for r in rows] == [-1.0, 0.1]
    assert rows[0]["error"] and not rows[1]["error"]


def test_eta_scaling():
    base = pokesim.dephasing_eta(1e-5, 16.09)
    assert pokesim.dephasing_eta(1e-5, 32.18) == pytest.approx(4.0 * base, rel=1e-14)
    t = pokesim.t_phi(16.09)
    assert pokesim.dephasing_eta(t, 16.09) == pytest.approx(1.0, rel=1e-6)


def test_errors_map_to_exceptions():
    with pytest.raises(pokesim.ConfigError, match="line 5"):
        pokesim.parse_config(MINIMAL.replace("E_ctheta", "E_cteta"))
    with pytest.raises(ValueError):
        pokesim.analytic.epsilon10(0.0, 1.0)
    config = pokesim.parse_config(MINIMAL)
    config.k = 2
    with pytest.raises(pokesim.IdentificationError, match="increase k"):
        pokesim.noise_report(config)
