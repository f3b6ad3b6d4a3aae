"""Gradient and training-loop tests."""

import json

import numpy as np
import pytest

from ansatz_forge.circuit import (
    AnsatzGenome,
    Circuit,
    Instruction,
    ParamRef,
    decode,
    real_amplitudes,
)
from ansatz_forge.errors import ValidationError
from ansatz_forge.pauli import Hamiltonian
from ansatz_forge.simulator import expectation, run
from ansatz_forge.vqe import TrainConfig, gradient, initial_params, train

from conftest import random_circuit, random_pauli_hamiltonian

SHIFT_POOL = ["RX", "RY", "RZ", "U1", "RZZ", "RXX", "RZX"]


def ry_z_circuit():
    return Circuit(1, (Instruction("RY", (0,), (ParamRef(0),)),), 1)


def test_analytic_gradient_ry_z():
    h = Hamiltonian.from_terms(1, [(1.0, "Z")])
    c = ry_z_circuit()
    for theta in [0.0, 0.3, np.pi / 2, 2.5]:
        g = gradient(c, [theta], h)
        assert g[0] == pytest.approx(-np.sin(theta), abs=1e-12)


def test_shift_rule_matches_finite_difference(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        c = random_circuit(rng, n, 10, gate_pool=SHIFT_POOL)
        if c.n_params == 0:
            continue
        h = random_pauli_hamiltonian(rng, n, 4)
        params = rng.uniform(-np.pi, np.pi, c.n_params)
        g_shift = gradient(c, params, h, mode="shift_only")
        g_fd = gradient(c, params, h, mode="finite_difference")
        np.testing.assert_allclose(g_shift, g_fd, atol=1e-5)


def test_auto_mode_matches_finite_difference_on_all_gates(rng):
    """auto must fall back to FD for U3/CU3 and multiply-bound params."""
    for _ in range(10):
        n = int(rng.integers(2, 5))
        c = random_circuit(rng, n, 12)
        if c.n_params == 0:
            continue
        h = random_pauli_hamiltonian(rng, n, 4)
        params = rng.uniform(-np.pi, np.pi, c.n_params)
        np.testing.assert_allclose(
            gradient(c, params, h, mode="auto"),
            gradient(c, params, h, mode="finite_difference"), atol=1e-5)


def test_gradient_of_shared_parameter(rng):
    """One parameter bound to two rotations: d/dt E(RY(t) RY(t))."""
    c = Circuit(1, (Instruction("RY", (0,), (ParamRef(0),)),
                    Instruction("RY", (0,), (ParamRef(0),))), 1)
    h = Hamiltonian.from_terms(1, [(1.0, "Z")])
    theta = 0.7
    g = gradient(c, [theta], h)
    assert g[0] == pytest.approx(-2 * np.sin(2 * theta), abs=1e-6)


def test_initial_params_strategies():
    c = real_amplitudes(3, 1)
    cfg = TrainConfig(seed=5)
    p1 = initial_params(c, cfg)
    p2 = initial_params(c, cfg)
    np.testing.assert_array_equal(p1, p2)
    assert np.all(p1 >= -np.pi) and np.all(p1 < np.pi)
    p3 = initial_params(c, TrainConfig(seed=6))
    assert not np.array_equal(p1, p3)
    const = initial_params(c, TrainConfig(init_strategy="constant", init_value=0.2))
    np.testing.assert_array_equal(const, np.full(c.n_params, 0.2))


def test_train_config_validation():
    with pytest.raises(ValidationError):
        TrainConfig(optimizer="newton")
    with pytest.raises(ValidationError):
        TrainConfig(learning_rate=-1.0)
    with pytest.raises(ValidationError):
        TrainConfig(init_strategy="warm")
    with pytest.raises(ValidationError):
        TrainConfig(gradient_mode="backprop")


def test_gradient_descent_single_rotation_converges():
    h = Hamiltonian.from_terms(1, [(1.0, "Z")])
    cfg = TrainConfig(optimizer="gradient_descent", learning_rate=0.2, seed=3)
    report = train(ry_z_circuit(), h, cfg)
    assert report.final_energy == pytest.approx(-1.0, abs=1e-6)
    assert report.epochs_to_converge is not None
    assert report.trajectory[0] > report.final_energy


def test_adam_trains_two_qubit_block():
    h = Hamiltonian.from_terms(2, [(1.0, "ZZ")], offset=1.0)
    c = decode(AnsatzGenome.of([(0, (0, 1))]), 2)
    report = train(c, h, TrainConfig(seed=1))
    assert report.final_energy == pytest.approx(0.0, abs=1e-3)
    assert report.gate_count == 3


def test_trajectory_records_pre_step_energy():
    h = Hamiltonian.from_terms(1, [(1.0, "Z")])
    c = ry_z_circuit()
    cfg = TrainConfig(seed=3, max_epochs=5, optimizer="gradient_descent",
                      learning_rate=0.1)
    report = train(c, h, cfg)
    p0 = initial_params(c, cfg)
    assert report.trajectory[0] == pytest.approx(
        expectation(run(c, p0), h), abs=1e-12)
    assert report.epochs_run == 5


def test_best_params_achieve_min_trajectory_energy():
    h = Hamiltonian.from_terms(2, [(1.0, "ZI"), (0.5, "XZ")])
    c = decode(AnsatzGenome.of([(2, (0, 1))]), 2)
    report = train(c, h, TrainConfig(seed=9, max_epochs=60))
    got = expectation(run(c, np.asarray(report.best_params)), h)
    assert got == pytest.approx(min(report.trajectory), abs=1e-10)


def test_variational_bound(rng):
    """Every trained energy sits above the exact minimum eigenvalue."""
    from ansatz_forge.pauli import min_eigenvalue
    for seed in range(3):
        n = 3
        h = random_pauli_hamiltonian(rng, n, 5)
        c = real_amplitudes(n, 2)
        report = train(c, h, TrainConfig(seed=seed, max_epochs=40))
        exact, _ = min_eigenvalue(h)
        assert min(report.trajectory) >= exact - 1e-9


def test_vqe_i_prefixes_state_preparation():
    h = Hamiltonian.from_terms(2, [(1.0, "ZZ")])
    c = real_amplitudes(2, 1)
    cfg = TrainConfig(init_strategy="vqe_i", seed=0, max_epochs=30)
    report = train(c, h, cfg)
    # Gate count includes the two parameterless preparation gates.
    from ansatz_forge.circuit import gate_count
    assert report.gate_count == gate_count(c) + 2


def test_report_serialization_round_trip():
    h = Hamiltonian.from_terms(1, [(1.0, "Z")])
    report = train(ry_z_circuit(), h, TrainConfig(seed=0, max_epochs=10))
    doc = json.loads(report.to_json())
    assert doc["final_energy"] == report.final_energy
    assert doc["epochs_run"] == 10
    assert len(doc["trajectory"]) == len(report.trajectory)
    assert len(doc["best_params"]) == 1
