import math

import numpy as np
import pytest

import sisctl


def closed_form(r0):
    return 2.0 * (r0 - 1.0) / (3.0 * r0 + math.sqrt(r0 * r0 + 8.0 * r0))


@pytest.fixture(scope="module")
def network():
    return sisctl.generate_geometric_network(30, 50.0, 100.0, 7)


def test_network_properties(network):
    a = network.weights
    assert a.shape == (30, 30)
    assert network.irreducible
    assert np.allclose(a.sum(axis=1), 1.0, atol=1e-12)
    assert (np.diag(a) > 0.5).all()
    assert sisctl.is_strongly_connected(a)


def test_closed_form_level():
    assert sisctl.endemic_closed_form(2.0) == pytest.approx(0.1909830, abs=1e-7)
    assert sisctl.endemic_closed_form(5.0) == pytest.approx(0.3468871, abs=1e-7)
    for r0 in (1.5, 3.0, 10.0):
        assert sisctl.endemic_closed_form(r0) == pytest.approx(closed_form(r0), rel=1e-14)


def test_controlled_step_matches_matrix_form(network):
    params = sisctl.EpidemicParams(beta=2.0, gamma=1.0, dt=0.01)
    x = np.linspace(0.05, 0.45, 30)
    m, b, m_hat = sisctl.build_system_matrices(network, params, x)
    a = network.weights
    assert np.allclose(m_hat, m - b @ a, atol=1e-15)
    assert np.allclose(sisctl.step_controlled(x, network, params), m_hat @ x, atol=1e-15)


def test_simulation_reaches_endemic_level(network):
    params = sisctl.EpidemicParams(beta=2.0, gamma=1.0, dt=0.01)
    x0 = np.full(30, 0.3)
    traj = sisctl.simulate(x0, network, params)
    assert traj.stop_reason == "converged"
    assert np.abs(traj.final_state() - closed_form(2.0)).max() < 1e-3
    report = sisctl.classify_regime(network, params)
    assert report["regime"] == "ENDEMIC"
    assert report["rho_M"] == pytest.approx(1.01, abs=1e-9)
    assert sisctl.verify_half_bound(traj, params)["bound_holds"]


def test_disease_free_certificate(network):
    params = sisctl.EpidemicParams(beta=0.5, gamma=1.0, dt=0.01)
    m, _, _ = sisctl.build_system_matrices(network, params, np.zeros(30))
    cert = sisctl.find_diagonal_lyapunov(m)
    assert cert["strict"]
    assert sisctl.lyapunov_margin(m, np.array(cert["p_diag"])) < 0.0
    traj = sisctl.simulate(np.full(30, 0.2), network, params, horizon=500)
    assert sisctl.verify_dfe_descent(traj, m, np.array(cert["p_diag"]))["strictly_decreasing"]


def test_errors_are_raised():
    with pytest.raises(sisctl.Error):
        sisctl.EpidemicParams(beta=-1.0, gamma=1.0, dt=0.01).validate()


def test_run_scenario(tmp_path):
    config = {
        "network": {"generator": "geometric", "n": 20, "radius": 50.0, "area_side": 100.0},
        "params": {"beta": 5.0, "gamma": 1.0, "dt": 0.01},
        "policy": "linear_distancing",
        "x0": {"mode": "uniform_open_half"},
        "horizon": 20000,
        "seed": 11,
        "outputs": {"directory": str(tmp_path / "out")},
    }
    summary = sisctl.run_scenario(config)
    assert summary["exit_code"] == 0
    assert summary["regime"]["regime"] == "ENDEMIC"
    assert (tmp_path / "out" / "audit.json").exists()
    assert (tmp_path / "out" / "trajectory.csv").exists()
