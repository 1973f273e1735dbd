import json

import numpy as np
import pytest

import cstomo


def test_states():
    ghz = cstomo.ghz_state(4)
    assert ghz.shape == (16, 16)
    assert ghz[0, 15] == pytest.approx(0.5)
    lam = 1.0 - 1.0 / np.sqrt(5.0)
    rho = cstomo.dephased_ghz(4, lam)
    assert cstomo.purity(rho) == pytest.approx(0.6)
    assert cstomo.fidelity(ghz, rho) == pytest.approx(np.sqrt((2.0 - lam) / 2.0))
    assert len(cstomo.enumerate_settings(3)) == 27


def test_simulate_and_reconstruct():
    rho = cstomo.dephased_ghz(3, 0.3)
    data = cstomo.simulate(rho, shots=400, seed=5)
    assert len(data) == 27
    assert data.counts.shape == (27, 8)
    assert (data.counts.sum(axis=1) == 400).all()
    assert cstomo.simulate(rho, shots=400, seed=5) == data
    back = cstomo.Dataset.from_json(data.to_json())
    assert back == data
    assert json.loads(data.to_json())["n_qubits"] == 3

    fit = cstomo.reconstruct(data)
    assert fit["status"] == "converged"
    est = fit["estimate"]
    assert np.trace(est).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(est).min() > -1e-9
    assert cstomo.fidelity(rho, est) > 0.95

    infeasible = cstomo.reconstruct(data, epsilon=0.0)
    assert infeasible["status"] == "infeasible"
    assert infeasible["estimate"] is None

    ml = cstomo.mle(data)
    assert cstomo.fidelity(rho, ml["estimate"]) > 0.95


def test_epsilon_hat_and_noise():
    rho = cstomo.dephased_ghz(2, 0.2)
    data = cstomo.simulate(rho, shots=10000, seed=1)
    assert cstomo.epsilon_hat(data) == pytest.approx(cstomo.expected_noise(rho, shots=10000), rel=0.05)


def test_direct_fidelity():
    coeffs = cstomo.ghz_pauli_decomposition(4)
    nonzero = {k: v for k, v in coeffs["terms"].items() if abs(v) > 1e-12}
    assert len(nonzero) == 16
    ghz = cstomo.ghz_state(4)
    assert len(cstomo.required_settings(ghz)) == 9
    data = cstomo.simulate(ghz, shots=650, seed=2)
    est = cstomo.direct_fidelity(data, ghz, required_only=True)
    assert est["f"] == pytest.approx(1.0, abs=0.02)
    assert len(est["settings"]) == 9


def test_studies_run():
    rho = cstomo.dephased_ghz(2, 0.3)
    data = cstomo.simulate(rho, shots=300, seed=3)
    cv = cstomo.cross_validate(data, [9], [0.5, 1.0, 2.0], repetitions=2)
    assert len(cv["grid"]) == 3
    sweep = cstomo.sweep_settings(data, [5, 9], draws=2, target=cstomo.ghz_state(2))
    assert len(sweep["cells"]) == 2
    grid = cstomo.sweep_grid(rho, 200, [9], [1.0], repetitions=2)
    assert grid["cells"][0]["samples"] == 2


def test_errors():
    with pytest.raises(ValueError):
        cstomo.ghz_state(0)
    data = cstomo.simulate(cstomo.ghz_state(4), shots=100, words=["ZZZZ"], seed=0)
    with pytest.raises(cstomo.Error):
        cstomo.direct_fidelity(data, cstomo.ghz_state(4))
