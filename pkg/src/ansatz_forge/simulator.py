"""Dense statevector simulation, Pauli expectation values, and shot sampling."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import GATE_KINDS, Circuit
from .errors import DimensionError, ResourceError, ValidationError
from .pauli import Hamiltonian, diagonal_vector

MAX_SIM_QUBITS = 20

_NORM_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise DimensionError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"expected ({1 << self.n_qubits},)")

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def zero_state(n_qubits: int) -> StateVector:
    if n_qubits > MAX_SIM_QUBITS:
        raise ResourceError(f"simulator capped at {MAX_SIM_QUBITS} qubits")
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _apply_1q(amps: np.ndarray, m: np.ndarray, q: int, n: int) -> np.ndarray:
    # index = high * 2^(q+1) + bit * 2^q + low
    view = amps.reshape(-1, 2, 1 << q)
    return np.einsum("ij,ajb->aib", m, view).reshape(-1)


def _apply_2q(amps: np.ndarray, m: np.ndarray, qa: int, qb: int, n: int) -> np.ndarray:
    # Kernel basis |ab>: row index = 2*bit(qa) + bit(qb).
    t = amps.reshape([2] * n)
    axa, axb = n - 1 - qa, n - 1 - qb
    m4 = m.reshape(2, 2, 2, 2)  # [a_out, b_out, a_in, b_in]
    t = np.tensordot(m4, t, axes=([2, 3], [axa, axb]))
    t = np.moveaxis(t, [0, 1], [axa, axb])
    return np.ascontiguousarray(t).reshape(-1)


def run(c: Circuit, params, initial: StateVector | None = None) -> StateVector:
    """Apply every instruction of c (with params bound) to `initial` (default |0...0>)."""
    params = np.asarray(params, dtype=float)
    if params.shape != (c.n_params,):
        raise ValidationError(
            f"expected {c.n_params} params, got shape {params.shape}")
    if initial is None:
        state = zero_state(c.n_qubits)
    else:
        if initial.n_qubits != c.n_qubits:
            raise DimensionError(
                f"initial state has {initial.n_qubits} qubits, circuit {c.n_qubits}")
        state = initial
    amps = state.amplitudes.copy()
    n = c.n_qubits
    for ins in c.instructions:
        m = GATE_KINDS[ins.gate].matrix(ins.angles(params))
        if len(ins.qubits) == 1:
            amps = _apply_1q(amps, m, ins.qubits[0], n)
        else:
            amps = _apply_2q(amps, m, ins.qubits[0], ins.qubits[1], n)
        if __debug__:
            norm = np.vdot(amps, amps).real
            assert abs(norm - 1.0) < _NORM_TOL, f"norm drift {norm} after {ins.gate}"
    return StateVector(n, amps)


def _apply_1q_batch(amps, m, q):
    b = amps.shape[0]
    view = amps.reshape(b, -1, 2, 1 << q)
    return np.matmul(m[:, None], view).reshape(b, -1)


@lru_cache(maxsize=None)
def _pair_indices(qa: int, qb: int, n: int) -> np.ndarray:
    """Basis indices grouped by the (qa, qb) bit pair, rows ordered to match
    the two-qubit kernel basis |ab> (row = 2*bit_a + bit_b)."""
    idx = np.arange(1 << n)
    rest = idx[((idx >> qa) & 1 == 0) & ((idx >> qb) & 1 == 0)]
    rows = [rest | (a << qa) | (b << qb) for a in (0, 1) for b in (0, 1)]
    return np.stack(rows)


def _apply_2q_batch(amps, m, qa, qb, n):
    idx = _pair_indices(qa, qb, n)
    sub = amps[:, idx]  # (B, 4, dim/4)
    sub = np.matmul(m, sub)
    out = np.empty_like(amps)
    out[:, idx.reshape(-1)] = sub.reshape(amps.shape[0], -1)
    return out


@lru_cache(maxsize=None)
def _bit_vector(q: int, n: int) -> np.ndarray:
    return (np.arange(1 << n) >> q) & 1


@lru_cache(maxsize=None)
def _perm_x(q: int, n: int) -> np.ndarray:
    return np.arange(1 << n) ^ (1 << q)


@lru_cache(maxsize=None)
def _perm_cnot(ctrl: int, tgt: int, n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return idx ^ (((idx >> ctrl) & 1) << tgt)


@lru_cache(maxsize=None)
def _cz_signs(qa: int, qb: int, n: int) -> np.ndarray:
    both = _bit_vector(qa, n) & _bit_vector(qb, n)
    return 1.0 - 2.0 * both


def _apply_fast_batch(amps, gate, angles, qubits, n):
    """Permutation/diagonal shortcuts; returns None when no shortcut applies.

    These reproduce the generic kernels exactly (same unitaries, applied as
    index permutations or diagonal multiplies).
    """
    if gate == "X":
        return amps[:, _perm_x(qubits[0], n)]
    if gate == "CNOT":
        return amps[:, _perm_cnot(qubits[0], qubits[1], n)]
    if gate == "CZ":
        return amps * _cz_signs(qubits[0], qubits[1], n)
    if gate in ("RZ", "U1"):
        theta = angles[:, 0]
        if gate == "RZ":
            lo, hi = np.exp(-0.5j * theta), np.exp(0.5j * theta)
        else:
            lo, hi = np.ones(len(theta), dtype=complex), np.exp(1j * theta)
        bit = _bit_vector(qubits[0], n)
        return amps * np.where(bit[None, :] == 0, lo[:, None], hi[:, None])
    if gate == "RZZ":
        theta = angles[:, 0]
        lo, hi = np.exp(-0.5j * theta), np.exp(0.5j * theta)
        parity = _bit_vector(qubits[0], n) ^ _bit_vector(qubits[1], n)
        return amps * np.where(parity[None, :] == 0, lo[:, None], hi[:, None])
    return None


def run_batch(c: Circuit, params_batch: np.ndarray) -> np.ndarray:
    """Simulate c for a batch of parameter vectors at once.

    params_batch has shape (B, n_params); returns amplitudes of shape
    (B, 2^n). Exactly equivalent to B independent `run` calls from |0...0>;
    used by the trainer, where gradient shift evaluations are independent.
    """
    params_batch = np.asarray(params_batch, dtype=float)
    b = params_batch.shape[0]
    if params_batch.shape != (b, c.n_params):
        raise ValidationError(
            f"expected shape (B, {c.n_params}), got {params_batch.shape}")
    n = c.n_qubits
    amps = np.zeros((b, 1 << n), dtype=complex)
    amps[:, 0] = 1.0
    from .circuit import ParamRef, batch_matrix
    for ins in c.instructions:
        if ins.bindings:
            angles = np.empty((b, len(ins.bindings)))
            for slot, binding in enumerate(ins.bindings):
                if isinstance(binding, ParamRef):
                    angles[:, slot] = params_batch[:, binding.index]
                else:
                    angles[:, slot] = binding
        else:
            angles = np.empty((b, 0))
        fast = _apply_fast_batch(amps, ins.gate, angles, ins.qubits, n)
        if fast is not None:
            amps = fast
            continue
        m = batch_matrix(ins.gate, angles)
        if len(ins.qubits) == 1:
            amps = _apply_1q_batch(amps, m, ins.qubits[0])
        else:
            amps = _apply_2q_batch(amps, m, ins.qubits[0], ins.qubits[1], n)
    return amps


def expectation_batch(amps_batch: np.ndarray, h: Hamiltonian) -> np.ndarray:
    """<h> for each row of a batch of statevectors."""
    if h.is_diagonal:
        probs = np.abs(amps_batch) ** 2
        return probs @ diagonal_vector(h)
    values = np.zeros(amps_batch.shape[0], dtype=complex)
    for coeff, string in h.terms:
        flip, phase = _pauli_action(string.letters)
        applied = np.empty_like(amps_batch)
        applied[:, np.arange(amps_batch.shape[1]) ^ flip] = phase * amps_batch
        values += coeff * np.einsum("bi,bi->b", np.conj(amps_batch), applied)
    return values.real + h.offset


def _pauli_action(letters: str) -> tuple[int, np.ndarray]:
    """Bit-flip mask and per-basis-state phase of a Pauli string."""
    n = len(letters)
    idx = np.arange(1 << n)
    flip = 0
    phase = np.ones(1 << n, dtype=complex)
    for q, letter in enumerate(letters):
        bit = (idx >> q) & 1
        if letter == "X":
            flip |= 1 << q
        elif letter == "Y":
            flip |= 1 << q
            phase = phase * (1j * (1.0 - 2.0 * bit))
        elif letter == "Z":
            phase = phase * (1.0 - 2.0 * bit)
    return flip, phase


def apply_pauli_string(amps: np.ndarray, letters: str) -> np.ndarray:
    """P|psi> for a Pauli string via bit arithmetic (no matrices)."""
    flip, phase = _pauli_action(letters)
    out = np.empty_like(amps)
    out[np.arange(len(amps)) ^ flip] = phase * amps
    return out


def expectation(s: StateVector, h: Hamiltonian) -> float:
    """<s|h|s> + offset, with a probability-weighted fast path for diagonal h."""
    if s.n_qubits != h.n_qubits:
        raise DimensionError(
            f"state has {s.n_qubits} qubits, Hamiltonian {h.n_qubits}")
    if h.is_diagonal:
        return float(s.probabilities @ diagonal_vector(h))
    value = 0.0 + 0.0j
    for coeff, string in h.terms:
        value += coeff * np.vdot(s.amplitudes, apply_pauli_string(s.amplitudes, string.letters))
    assert abs(value.imag) < 1e-9, f"non-real expectation residue {value.imag}"
    return float(value.real) + h.offset


def bitstring(index: int, n_qubits: int) -> str:
    """Basis index -> bitstring with qubit 0 as the first character."""
    return "".join(str((index >> q) & 1) for q in range(n_qubits))


@dataclass(frozen=True)
class ShotCounts:
    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValidationError("counts must sum to shots")

    def most_probable(self) -> str:
        # Ties broken by lexicographically smallest bitstring.
        return min(self.counts, key=lambda b: (-self.counts[b], b))


def sample(s: StateVector, shots: int, seed: int) -> ShotCounts:
    """Draw i.i.d. basis outcomes from |amplitude|^2; deterministic given seed."""
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    probs = s.probabilities
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    counts = {
        bitstring(i, s.n_qubits): int(k) for i, k in enumerate(draws) if k > 0}
    return ShotCounts(counts, shots)
