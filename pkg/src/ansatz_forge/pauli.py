"""Pauli-string algebra, Hamiltonians, file I/O, and the dense diagonalization oracle.

Conventions used everywhere in this package:
  * a Pauli string is written qubit 0 first ("XZ" means X on qubit 0, Z on qubit 1);
  * qubit 0 is the least-significant bit of a computational-basis index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParseError, ResourceError, ValidationError

PAULI_LETTERS = "IXYZ"

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (phase, letter) for every single-qubit product p*q.
_PRODUCT_TABLE = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

MAX_DENSE_QUBITS = 12
MERGE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, letter i acting on qubit i."""

    letters: str

    def __post_init__(self):
        bad = set(self.letters) - set(PAULI_LETTERS)
        if bad:
            raise ValidationError(f"invalid Pauli letters: {sorted(bad)}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) <= {"I"}

    @property
    def is_diagonal(self) -> bool:
        return set(self.letters) <= {"I", "Z"}

    @staticmethod
    def identity(n_qubits: int) -> "PauliString":
        return PauliString("I" * n_qubits)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n matrix under the qubit-0-least-significant convention."""
        m = np.eye(1, dtype=complex)
        for letter in reversed(self.letters):
            m = np.kron(m, PAULI_MATRICES[letter])
        return m

    def __str__(self) -> str:
        return self.letters


def multiply(p: PauliString, q: PauliString) -> tuple[complex, PauliString]:
    """Operator product p*q as (phase, result), phase in {1, -1, 1j, -1j}."""
    if p.n_qubits != q.n_qubits:
        raise DimensionError(
            f"cannot multiply strings on {p.n_qubits} and {q.n_qubits} qubits")
    phase = 1 + 0j
    out = []
    for a, b in zip(p.letters, q.letters):
        ph, letter = _PRODUCT_TABLE[(a, b)]
        phase *= ph
        out.append(letter)
    return phase, PauliString("".join(out))


@dataclass(frozen=True)
class Hamiltonian:
    """Real-weighted sum of Pauli strings plus an identity offset."""

    n_qubits: int
    terms: tuple[tuple[float, PauliString], ...]
    offset: float = 0.0

    def __post_init__(self):
        seen = set()
        for coeff, string in self.terms:
            if string.n_qubits != self.n_qubits:
                raise DimensionError(
                    f"term {string} has {string.n_qubits} qubits, expected {self.n_qubits}")
            if string.is_identity:
                raise ValidationError("identity terms belong in the offset")
            if string.letters in seen:
                raise ValidationError(f"duplicate term {string}; use from_terms to merge")
            seen.add(string.letters)

    @staticmethod
    def from_terms(n_qubits, terms, offset=0.0) -> "Hamiltonian":
        """Canonicalize: merge duplicate strings, fold identities into the offset,
        drop terms with |coeff| < 1e-12, and require real coefficients."""
        merged: dict[str, float] = {}
        offset = float(offset)
        for coeff, string in terms:
            if isinstance(string, str):
                string = PauliString(string)
            c = complex(coeff)
            if abs(c.imag) > 1e-10:
                raise ValidationError(
                    f"non-real coefficient {coeff} for {string} (Hermiticity)")
            if string.is_identity:
                offset += c.real
            else:
                merged[string.letters] = merged.get(string.letters, 0.0) + c.real
        kept = tuple(
            (c, PauliString(s)) for s, c in sorted(merged.items())
            if abs(c) >= MERGE_TOLERANCE)
        return Hamiltonian(n_qubits, kept, offset)

    @property
    def is_diagonal(self) -> bool:
        return all(s.is_diagonal for _, s in self.terms)

    def term_dict(self) -> dict[str, float]:
        return {s.letters: c for c, s in self.terms}


def to_dense(h: Hamiltonian) -> np.ndarray:
    """Dense 2^n x 2^n matrix of h, including the offset."""
    if h.n_qubits > MAX_DENSE_QUBITS:
        raise ResourceError(
            f"dense matrix refused for {h.n_qubits} qubits (cap {MAX_DENSE_QUBITS})")
    dim = 1 << h.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    for coeff, string in h.terms:
        m += coeff * string.to_matrix()
    m += h.offset * np.eye(dim)
    return m


def diagonal_vector(h: Hamiltonian) -> np.ndarray:
    """Energies of all 2^n basis states for a diagonal (I/Z-only) Hamiltonian."""
    if not h.is_diagonal:
        raise ValidationError("diagonal_vector requires an I/Z-only Hamiltonian")
    dim = 1 << h.n_qubits
    idx = np.arange(dim)
    diag = np.full(dim, h.offset, dtype=float)
    for coeff, string in h.terms:
        signs = np.ones(dim, dtype=float)
        for q, letter in enumerate(string.letters):
            if letter == "Z":
                signs *= 1.0 - 2.0 * ((idx >> q) & 1)
        diag += coeff * signs
    return diag


def min_eigenvalue(h: Hamiltonian) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a ground-state vector of h.

    Diagonal Hamiltonians take an exhaustive-bitstring fast path that agrees
    exactly with dense diagonalization.
    """
    if h.n_qubits > MAX_DENSE_QUBITS:
        raise ResourceError(
            f"exact diagonalization refused for {h.n_qubits} qubits (cap {MAX_DENSE_QUBITS})")
    if h.is_diagonal:
        diag = diagonal_vector(h)
        k = int(np.argmin(diag))
        state = np.zeros(1 << h.n_qubits, dtype=complex)
        state[k] = 1.0
        return float(diag[k]), state
    evals, evecs = np.linalg.eigh(to_dense(h))
    return float(evals[0]), evecs[:, 0]


def parse_hamiltonian_file(text: str) -> Hamiltonian:
    """Parse the one-term-per-line format: `<coeff> <letters, qubit 0 first>`.

    `#` starts a comment; blank lines are skipped; the identity string stores
    into the offset; duplicate strings merge by summing coefficients.
    """
    terms = []
    n_qubits = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<coeff> <letters>', got {raw!r}", line=lineno)
        coeff_text, letters = parts
        try:
            coeff = float(coeff_text)
        except ValueError:
            raise ParseError(f"bad coefficient {coeff_text!r}", line=lineno) from None
        try:
            string = PauliString(letters.upper())
        except ValidationError as exc:
            raise ParseError(str(exc), line=lineno) from None
        if n_qubits is None:
            n_qubits = string.n_qubits
        elif string.n_qubits != n_qubits:
            raise ParseError(
                f"term has {string.n_qubits} qubits, earlier terms have {n_qubits}",
                line=lineno)
        terms.append((coeff, string))
    if n_qubits is None:
        raise ParseError("no terms found")
    return Hamiltonian.from_terms(n_qubits, terms)


def format_hamiltonian_file(h: Hamiltonian) -> str:
    """Inverse of parse_hamiltonian_file up to term order."""
    lines = []
    if h.offset != 0.0 or not h.terms:
        lines.append(f"{h.offset!r} {'I' * h.n_qubits}")
    for coeff, string in h.terms:
        lines.append(f"{coeff!r} {string.letters}")
    return "\n".join(lines) + "\n"
