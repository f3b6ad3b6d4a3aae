"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from ansatz_forge.circuit import (
    GATE_KINDS,
    Circuit,
    Instruction,
    ParamRef,
)
from ansatz_forge.pauli import Hamiltonian


ALL_GATE_NAMES = sorted(GATE_KINDS)


def random_circuit(rng: np.random.Generator, n_qubits: int,
                   n_instructions: int, gate_pool=None) -> Circuit:
    """A random circuit drawing gates from `gate_pool` (default: all kinds).

    Each rotation angle is independently either a fresh free parameter or a
    fixed float, so both binding styles get exercised.
    """
    pool = list(gate_pool) if gate_pool is not None else list(ALL_GATE_NAMES)
    pool = [name for name in pool if GATE_KINDS[name].arity <= n_qubits]
    instructions = []
    next_param = 0
    for _ in range(n_instructions):
        kind = GATE_KINDS[rng.choice(pool)]
        qubits = tuple(int(q) for q in
                       rng.choice(n_qubits, size=kind.arity, replace=False))
        bindings = []
        for _ in range(kind.param_count):
            if rng.random() < 0.5:
                bindings.append(ParamRef(next_param))
                next_param += 1
            else:
                bindings.append(float(rng.uniform(-np.pi, np.pi)))
        instructions.append(Instruction(kind.name, qubits, tuple(bindings)))
    return Circuit(n_qubits, tuple(instructions), next_param)


def random_pauli_hamiltonian(rng: np.random.Generator, n_qubits: int,
                             n_terms: int) -> Hamiltonian:
    terms = []
    for _ in range(n_terms):
        letters = "".join(rng.choice(list("IXYZ"), size=n_qubits))
        terms.append((float(rng.normal()), letters))
    return Hamiltonian.from_terms(n_qubits, terms, offset=float(rng.normal()))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    """Echo one line per acceptance criterion at the end of the run."""
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
