"""Gate library, the six-entry block design space, genome decoding, and baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

_SQ2 = 1.0 / math.sqrt(2.0)

_H = np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex)


def _rx(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta):
    e = np.exp(-0.5j * theta)
    return np.array([[e, 0], [0, np.conj(e)]], dtype=complex)


def _u1(lam):
    return np.array([[1, 0], [0, np.exp(1j * lam)]], dtype=complex)


def _u3(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s],
         [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
        dtype=complex)


def _sx():
    return 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)


def _sqrt_h():
    # Principal square root: ((1+i)I + (1-i)H)/2; squaring reproduces H.
    return 0.5 * ((1 + 1j) * np.eye(2) + (1 - 1j) * _H)


def _controlled(u):
    """Control on the first qubit of the pair; kernel basis is |ab> with a first."""
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = u
    return m


def _two_pauli_rotation(pa, pb, theta):
    from .pauli import PAULI_MATRICES
    g = np.kron(PAULI_MATRICES[pa], PAULI_MATRICES[pb])
    return (math.cos(theta / 2) * np.eye(4)
            - 1j * math.sin(theta / 2) * g).astype(complex)


@dataclass(frozen=True)
class GateKind:
    name: str
    arity: int
    param_count: int

    def matrix(self, params=()) -> np.ndarray:
        """Unitary of this gate. Two-qubit kernels are in the |ab> basis where
        `a` is the first qubit of the instruction's qubit tuple."""
        if len(params) != self.param_count:
            raise ValidationError(
                f"{self.name} takes {self.param_count} params, got {len(params)}")
        return _MATRIX_BUILDERS[self.name](*params)


_MATRIX_BUILDERS = {
    "RX": _rx,
    "RY": _ry,
    "RZ": _rz,
    "U1": _u1,
    "U3": _u3,
    "SX": lambda: _sx(),
    "X": lambda: np.array([[0, 1], [1, 0]], dtype=complex),
    "H": lambda: _H.copy(),
    "SQRT_H": lambda: _sqrt_h(),
    "CZ": lambda: np.diag([1, 1, 1, -1]).astype(complex),
    "CNOT": lambda: _controlled(np.array([[0, 1], [1, 0]], dtype=complex)),
    "CU3": lambda t, p, l: _controlled(_u3(t, p, l)),
    "RZZ": lambda t: _two_pauli_rotation("Z", "Z", t),
    "RXX": lambda t: _two_pauli_rotation("X", "X", t),
    "RZX": lambda t: _two_pauli_rotation("Z", "X", t),
}

def _batch_1q(rows):
    """Stack 2x2 entries given as broadcastable arrays -> (B, 2, 2)."""
    (a, b), (c, d) = rows
    out = np.empty(np.broadcast(a, b, c, d).shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a
    out[..., 0, 1] = b
    out[..., 1, 0] = c
    out[..., 1, 1] = d
    return out


def batch_matrix(name: str, angles: np.ndarray) -> np.ndarray:
    """Gate unitaries for a batch of angle rows, shape (B, k) -> (B, dim, dim).

    Same definitions as GateKind.matrix, vectorized over the batch axis.
    """
    kind = GATE_KINDS[name]
    b = angles.shape[0]
    dim = 2 ** kind.arity
    if kind.param_count == 0:
        return np.broadcast_to(kind.matrix(()), (b, dim, dim))
    if name == "RX":
        t = angles[:, 0]
        c, s = np.cos(t / 2), np.sin(t / 2)
        return _batch_1q(((c, -1j * s), (-1j * s, c)))
    if name == "RY":
        t = angles[:, 0]
        c, s = np.cos(t / 2), np.sin(t / 2)
        return _batch_1q(((c, -s), (s, c)))
    if name == "RZ":
        e = np.exp(-0.5j * angles[:, 0])
        zero = np.zeros_like(e)
        return _batch_1q(((e, zero), (zero, np.conj(e))))
    if name == "U1":
        e = np.exp(1j * angles[:, 0])
        zero = np.zeros_like(e)
        return _batch_1q(((np.ones_like(e), zero), (zero, e)))
    if name == "U3" or name == "CU3":
        t, p, l = angles[:, 0], angles[:, 1], angles[:, 2]
        c, s = np.cos(t / 2), np.sin(t / 2)
        u = _batch_1q(((c + 0j, -np.exp(1j * l) * s),
                       (np.exp(1j * p) * s, np.exp(1j * (p + l)) * c)))
        if name == "U3":
            return u
        out = np.tile(np.eye(4, dtype=complex), (b, 1, 1))
        out[:, 2:, 2:] = u
        return out
    if name in ("RZZ", "RXX", "RZX"):
        from .pauli import PAULI_MATRICES
        pa, pb = {"RZZ": "ZZ", "RXX": "XX", "RZX": "ZX"}[name]
        g = np.kron(PAULI_MATRICES[pa], PAULI_MATRICES[pb])
        t = angles[:, 0]
        return (np.cos(t / 2)[:, None, None] * np.eye(4)
                - 1j * np.sin(t / 2)[:, None, None] * g)
    raise ValidationError(f"no batch builder for {name}")


GATE_KINDS = {
    "RX": GateKind("RX", 1, 1),
    "RY": GateKind("RY", 1, 1),
    "RZ": GateKind("RZ", 1, 1),
    "U1": GateKind("U1", 1, 1),
    "U3": GateKind("U3", 1, 3),
    "SX": GateKind("SX", 1, 0),
    "X": GateKind("X", 1, 0),
    "H": GateKind("H", 1, 0),
    "SQRT_H": GateKind("SQRT_H", 1, 0),
    "CZ": GateKind("CZ", 2, 0),
    "CNOT": GateKind("CNOT", 2, 0),
    "CU3": GateKind("CU3", 2, 3),
    "RZZ": GateKind("RZZ", 2, 1),
    "RXX": GateKind("RXX", 2, 1),
    "RZX": GateKind("RZX", 2, 1),
}

# Gates whose generator is a single Pauli string with the +-1/2 convention;
# their gradients admit the two-term parameter-shift rule. U1 differs from RZ
# only by a global phase, which expectation values cannot see.
SHIFT_RULE_GATES = frozenset({"RX", "RY", "RZ", "U1", "RZZ", "RXX", "RZX"})


@dataclass(frozen=True)
class ParamRef:
    """Binding of one gate-parameter slot to a flat circuit parameter."""

    index: int


@dataclass(frozen=True)
class Instruction:
    gate: str
    qubits: tuple[int, ...]
    bindings: tuple = ()

    def angles(self, params) -> tuple[float, ...]:
        return tuple(
            params[b.index] if isinstance(b, ParamRef) else b for b in self.bindings)


@dataclass(frozen=True)
class Circuit:
    """Decoded gate sequence with a flat parameter vector of length n_params."""

    n_qubits: int
    instructions: tuple[Instruction, ...]
    n_params: int

    def __post_init__(self):
        seen = set()
        next_expected = 0
        for ins in self.instructions:
            kind = GATE_KINDS[ins.gate]
            if len(ins.qubits) != kind.arity:
                raise ValidationError(f"{ins.gate} takes {kind.arity} qubits")
            if len(ins.bindings) != kind.param_count:
                raise ValidationError(f"{ins.gate} takes {kind.param_count} params")
            for q in ins.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValidationError(f"qubit {q} out of range for {self.n_qubits}")
            if len(set(ins.qubits)) != len(ins.qubits):
                raise ValidationError(f"{ins.gate} qubits must be distinct")
            for b in ins.bindings:
                if isinstance(b, ParamRef):
                    if b.index == next_expected:
                        next_expected += 1
                    elif b.index > next_expected:
                        raise ValidationError(
                            "parameter indices must appear in first-use order")
                    seen.add(b.index)
        if seen != set(range(self.n_params)):
            raise ValidationError(
                f"circuit declares {self.n_params} params but binds {sorted(seen)}")

    def param_bind_counts(self) -> list[int]:
        """How many instruction slots bind each parameter index."""
        counts = [0] * self.n_params
        for ins in self.instructions:
            for b in ins.bindings:
                if isinstance(b, ParamRef):
                    counts[b.index] += 1
        return counts

    def param_gate_kinds(self) -> list[set]:
        """Gate kinds binding each parameter index."""
        kinds = [set() for _ in range(self.n_params)]
        for ins in self.instructions:
            for b in ins.bindings:
                if isinstance(b, ParamRef):
                    kinds[b.index].add(ins.gate)
        return kinds


class _CircuitBuilder:
    def __init__(self, n_qubits):
        self.n_qubits = n_qubits
        self.instructions = []
        self.n_params = 0

    def add(self, gate, qubits, fixed_angles=None):
        kind = GATE_KINDS[gate]
        if fixed_angles is not None:
            bindings = tuple(float(a) for a in fixed_angles)
        else:
            bindings = tuple(
                ParamRef(self.n_params + k) for k in range(kind.param_count))
            self.n_params += kind.param_count
        self.instructions.append(Instruction(gate, tuple(qubits), bindings))

    def build(self) -> Circuit:
        return Circuit(self.n_qubits, tuple(self.instructions), self.n_params)


@dataclass(frozen=True)
class AnsatzGenome:
    """Ordered list of (block_id, ordered qubit pair) — the unit the search proposes."""

    blocks: tuple[tuple[int, tuple[int, int]], ...]

    @staticmethod
    def of(blocks) -> "AnsatzGenome":
        return AnsatzGenome(tuple((int(b), (int(a), int(c))) for b, (a, c) in blocks))

    def __str__(self) -> str:
        return format_genome(self)


def format_genome(genome: AnsatzGenome) -> str:
    """Canonical bracket syntax: `[1, (0,1)], [2, (1,2)]`."""
    return ", ".join(f"[{bid}, ({a},{b})]" for bid, (a, b) in genome.blocks)


def _block_u3_cu3(bld, a, b):
    bld.add("U3", (a,))
    bld.add("U3", (b,))
    bld.add("CU3", (a, b))


def _block_zz_ry(bld, a, b):
    bld.add("RZZ", (a, b))
    bld.add("RY", (a,))
    bld.add("RY", (b,))


def _block_rxyz(bld, a, b):
    for gate in ("RX", "RY", "RZ"):
        bld.add(gate, (a,))
        bld.add(gate, (b,))
    bld.add("CZ", (a, b))


def _block_zx_xx(bld, a, b):
    bld.add("RZX", (a, b))
    bld.add("RXX", (a, b))


def _block_rxyz_u1_cu3(bld, a, b):
    _block_rxyz(bld, a, b)
    bld.add("U1", (a,))
    bld.add("U1", (b,))
    bld.add("CU3", (a, b))


def _block_ibmq_basis(bld, a, b):
    for q in (a, b):
        bld.add("RZ", (q,))
        bld.add("X", (q,), fixed_angles=())
        bld.add("RZ", (q,))
        bld.add("SX", (q,), fixed_angles=())
        bld.add("RZ", (q,))
    bld.add("CNOT", (a, b))


@dataclass(frozen=True)
class BlockTemplate:
    id: int
    name: str
    n_instructions: int
    n_params: int
    expand: callable


BLOCK_TEMPLATES = (
    BlockTemplate(0, "U3+CU3", 3, 9, _block_u3_cu3),
    BlockTemplate(1, "ZZ+RY", 3, 3, _block_zz_ry),
    BlockTemplate(2, "RXYZ", 7, 6, _block_rxyz),
    BlockTemplate(3, "ZX+XX", 2, 2, _block_zx_xx),
    BlockTemplate(4, "RXYZ+U1+CU3", 10, 11, _block_rxyz_u1_cu3),
    BlockTemplate(5, "IBMQ Basis", 11, 6, _block_ibmq_basis),
)

N_BLOCK_TEMPLATES = len(BLOCK_TEMPLATES)


def validate_genome(genome: AnsatzGenome, n_qubits: int) -> None:
    for pos, (bid, (a, b)) in enumerate(genome.blocks):
        if not 0 <= bid < N_BLOCK_TEMPLATES:
            raise ValidationError(f"block {pos}: id {bid} outside 0..{N_BLOCK_TEMPLATES - 1}")
        if a == b:
            raise ValidationError(f"block {pos}: qubit pair ({a},{b}) must be distinct")
        if not (0 <= a < n_qubits and 0 <= b < n_qubits):
            raise ValidationError(
                f"block {pos}: qubits ({a},{b}) out of range for {n_qubits} qubits")


def decode(genome: AnsatzGenome, n_qubits: int) -> Circuit:
    """Expand a genome into a circuit, blocks in order, params in first-use order."""
    validate_genome(genome, n_qubits)
    bld = _CircuitBuilder(n_qubits)
    for bid, (a, b) in genome.blocks:
        BLOCK_TEMPLATES[bid].expand(bld, a, b)
    return bld.build()


def gate_count(c: Circuit) -> int:
    """Stored instruction count; no transpilation or decomposition."""
    return len(c.instructions)


def _entangler_pairs(n_qubits, entanglement):
    if entanglement == "full":
        return [(i, j) for i in range(n_qubits) for j in range(i + 1, n_qubits)]
    if entanglement == "linear":
        return [(i, i + 1) for i in range(n_qubits - 1)]
    raise ValidationError(f"unknown entanglement {entanglement!r}")


def real_amplitudes(n_qubits, reps, entanglement="full") -> Circuit:
    """Alternating RY layers and CX entanglers, with a final RY layer."""
    if reps < 1:
        raise ValidationError("reps must be >= 1")
    if n_qubits < 2:
        raise ValidationError("entangling baselines need >= 2 qubits")
    pairs = _entangler_pairs(n_qubits, entanglement)
    bld = _CircuitBuilder(n_qubits)
    for _ in range(reps):
        for q in range(n_qubits):
            bld.add("RY", (q,))
        for a, b in pairs:
            bld.add("CNOT", (a, b))
    for q in range(n_qubits):
        bld.add("RY", (q,))
    return bld.build()


def two_local(n_qubits, reps, entanglement="full") -> Circuit:
    """Same skeleton as real_amplitudes with RY-then-RZ rotation layers."""
    if reps < 1:
        raise ValidationError("reps must be >= 1")
    if n_qubits < 2:
        raise ValidationError("entangling baselines need >= 2 qubits")
    pairs = _entangler_pairs(n_qubits, entanglement)
    bld = _CircuitBuilder(n_qubits)

    def rotation_layer():
        for q in range(n_qubits):
            bld.add("RY", (q,))
        for q in range(n_qubits):
            bld.add("RZ", (q,))

    for _ in range(reps):
        rotation_layer()
        for a, b in pairs:
            bld.add("CNOT", (a, b))
    rotation_layer()
    return bld.build()


def prefix_sqrt_h(c: Circuit) -> Circuit:
    """Prepend one parameterless sqrt(H) gate on every qubit (the VQE-I warm start)."""
    prefix = tuple(
        Instruction("SQRT_H", (q,), ()) for q in range(c.n_qubits))
    return Circuit(c.n_qubits, prefix + c.instructions, c.n_params)
