"""Pauli algebra and Hamiltonian container tests."""

import numpy as np
import pytest

from ansatz_forge.errors import DimensionError, ParseError, ValidationError
from ansatz_forge.pauli import (
    Hamiltonian,
    PauliString,
    diagonal_vector,
    format_hamiltonian_file,
    min_eigenvalue,
    multiply,
    parse_hamiltonian_file,
    to_dense,
)

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
MATS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def dense_string(letters):
    """Independent kron oracle, qubit 0 least significant."""
    m = np.eye(1)
    for letter in letters:  # qubit 0 first -> rightmost kron factor
        m = np.kron(MATS[letter], m)
    return m


def test_single_qubit_products_match_matrices():
    for a in "IXYZ":
        for b in "IXYZ":
            phase, out = multiply(PauliString(a), PauliString(b))
            got = phase * MATS[out.letters]
            np.testing.assert_allclose(got, MATS[a] @ MATS[b], atol=1e-15)


def test_multiqubit_product_matches_matrix_product(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        a = "".join(rng.choice(list("IXYZ"), size=n))
        b = "".join(rng.choice(list("IXYZ"), size=n))
        phase, out = multiply(PauliString(a), PauliString(b))
        np.testing.assert_allclose(
            phase * dense_string(out.letters),
            dense_string(a) @ dense_string(b), atol=1e-12)


def test_multiply_rejects_length_mismatch():
    with pytest.raises(DimensionError):
        multiply(PauliString("XZ"), PauliString("X"))


def test_pauli_string_validation():
    with pytest.raises(ValidationError):
        PauliString("XA")


def test_to_matrix_qubit_order():
    # "XZ" = X on qubit 0 (least significant), Z on qubit 1.
    np.testing.assert_allclose(
        PauliString("XZ").to_matrix(), np.kron(Z, X), atol=1e-15)


def test_from_terms_merges_and_folds_identity():
    h = Hamiltonian.from_terms(
        2, [(1.0, "ZI"), (2.5, "ZI"), (0.5, "II"), (1e-13, "XX")], offset=1.0)
    assert h.term_dict() == {"ZI": 3.5}
    assert h.offset == pytest.approx(1.5)
    assert h.n_qubits == 2


def test_from_terms_rejects_complex_coefficients():
    with pytest.raises(ValidationError):
        Hamiltonian.from_terms(1, [(1.0 + 0.5j, "Z")])


def test_direct_construction_rejects_duplicates_and_identity():
    with pytest.raises(ValidationError):
        Hamiltonian(2, ((1.0, PauliString("ZI")), (2.0, PauliString("ZI"))))
    with pytest.raises(ValidationError):
        Hamiltonian(2, ((1.0, PauliString("II")),))
    with pytest.raises(DimensionError):
        Hamiltonian(2, ((1.0, PauliString("Z")),))


def test_to_dense_matches_kron_oracle(rng):
    for _ in range(10):
        n = int(rng.integers(1, 4))
        terms = [("".join(rng.choice(list("IXYZ"), size=n)), float(rng.normal()))
                 for _ in range(4)]
        offset = float(rng.normal())
        h = Hamiltonian.from_terms(n, [(c, s) for s, c in terms], offset=offset)
        expected = h.offset * np.eye(1 << n, dtype=complex)
        for coeff, p in h.terms:
            expected += coeff * dense_string(p.letters)
        np.testing.assert_allclose(to_dense(h), expected, atol=1e-12)


def test_min_eigenvalue_known_cases():
    val, state = min_eigenvalue(Hamiltonian.from_terms(1, [(1.0, "X")]))
    assert val == pytest.approx(-1.0)
    h = Hamiltonian.from_terms(2, [(2.0, "ZZ")], offset=3.0)
    val, state = min_eigenvalue(h)
    assert val == pytest.approx(1.0)
    # The returned state must achieve the eigenvalue.
    dense = to_dense(h)
    assert np.vdot(state, dense @ state).real == pytest.approx(1.0)


def test_min_eigenvalue_diagonal_fast_path_matches_dense(rng):
    for _ in range(5):
        n = int(rng.integers(1, 5))
        terms = [(float(rng.normal()), "".join(rng.choice(list("IZ"), size=n)))
                 for _ in range(5)]
        h = Hamiltonian.from_terms(n, terms, offset=float(rng.normal()))
        dense_min = float(np.min(np.linalg.eigvalsh(to_dense(h))))
        val, state = min_eigenvalue(h)
        assert val == pytest.approx(dense_min, abs=1e-10)
        np.testing.assert_allclose(
            diagonal_vector(h), np.diag(to_dense(h)).real, atol=1e-12)


def test_diagonal_vector_rejects_offdiagonal_terms():
    h = Hamiltonian.from_terms(2, [(1.0, "XZ")])
    with pytest.raises(ValidationError):
        diagonal_vector(h)


def test_hamiltonian_file_round_trip(tmp_path):
    h = Hamiltonian.from_terms(
        4, [(0.25, "XYZI"), (-1.75e-3, "ZZII")], offset=3.0)
    path = tmp_path / "ham.txt"
    path.write_text(format_hamiltonian_file(h))
    h2 = parse_hamiltonian_file(path.read_text())
    assert h2.offset == h.offset
    assert h2.terms == h.terms


def test_parse_hamiltonian_comments_and_errors():
    text = "# comment\n1.5 ZZ\n\n-0.5 XI  # inline\n"
    h = parse_hamiltonian_file(text)
    assert len(h.terms) == 2
    with pytest.raises(ParseError) as err:
        parse_hamiltonian_file("1.5 ZZ\nnot-a-number XX\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_hamiltonian_file("1.0 ZZ\n0.5 Z\n")  # length mismatch
    with pytest.raises(ParseError):
        parse_hamiltonian_file("# nothing here\n")
