"""Benchmark problems reduced to Hamiltonians.

Portfolio / Max-Cut / TSP -> quadratic program -> Ising; fermionic term lists
-> qubit Hamiltonian via Jordan-Wigner; exhaustive classical solvers as oracles.
All quadratic programs are MINIMIZED over binary variables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import pauli
from .errors import ParseError, ResourceError, ValidationError
from .pauli import Hamiltonian, PauliString

MAX_BRUTE_FORCE_VARS = 24


@dataclass(frozen=True)
class QuadraticProgram:
    """Minimize x^T Q x + c.x + k over x in {0,1}^n.

    Canonical form: Q symmetric with zero diagonal (binary x_i^2 = x_i is
    folded into the linear part).
    """

    n_vars: int
    linear: np.ndarray
    quadratic: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        if self.linear.shape != (self.n_vars,):
            raise ValidationError("linear term has wrong shape")
        if self.quadratic.shape != (self.n_vars, self.n_vars):
            raise ValidationError("quadratic term has wrong shape")
        if not np.allclose(self.quadratic, self.quadratic.T):
            raise ValidationError("quadratic matrix must be symmetric")

    @staticmethod
    def build(n_vars, linear=None, quadratic=None, constant=0.0) -> "QuadraticProgram":
        """Canonicalize: symmetrize Q and fold its diagonal into the linear part."""
        lin = np.zeros(n_vars) if linear is None else np.asarray(linear, dtype=float).copy()
        quad = np.zeros((n_vars, n_vars)) if quadratic is None else np.asarray(
            quadratic, dtype=float).copy()
        quad = 0.5 * (quad + quad.T)
        diag = np.diag(quad).copy()
        lin = lin + diag
        np.fill_diagonal(quad, 0.0)
        return QuadraticProgram(n_vars, lin, quad, float(constant))

    def objective(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.quadratic @ x + self.linear @ x + self.constant)


@dataclass(frozen=True)
class PortfolioSpec:
    expected_returns: np.ndarray  # mu
    covariance: np.ndarray  # sigma
    risk_factor: float  # q
    budget: int  # B
    penalty: float  # P

    def __post_init__(self):
        n = self.n_assets
        if self.covariance.shape != (n, n):
            raise ValidationError("covariance shape does not match returns")
        if not np.allclose(self.covariance, self.covariance.T):
            raise ValidationError("covariance must be symmetric")
        if not 0 <= self.budget <= n:
            raise ValidationError("budget must be within [0, n_assets]")

    @property
    def n_assets(self) -> int:
        return len(self.expected_returns)


@dataclass(frozen=True)
class GraphSpec:
    n_nodes: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        seen = set()
        for i, j, _ in self.edges:
            if i == j:
                raise ValidationError("self-loops are not allowed")
            if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
                raise ValidationError(f"edge ({i},{j}) out of range")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            seen.add(key)

    def weight(self, i, j) -> float | None:
        for a, b, w in self.edges:
            if {a, b} == {i, j}:
                return w
        return None

    def is_complete(self) -> bool:
        return len(self.edges) == self.n_nodes * (self.n_nodes - 1) // 2


def portfolio_to_qp(spec: PortfolioSpec) -> QuadraticProgram:
    """q * x'Sx - mu.x + P * (sum x - B)^2, expanded over binary x."""
    n = spec.n_assets
    quad = spec.risk_factor * spec.covariance + spec.penalty * np.ones((n, n))
    lin = -spec.expected_returns - 2.0 * spec.penalty * spec.budget * np.ones(n)
    const = spec.penalty * spec.budget ** 2
    return QuadraticProgram.build(n, lin, quad, const)


def maxcut_to_qp(g: GraphSpec) -> QuadraticProgram:
    """Negated cut value: minimize -sum w * (x_i + x_j - 2 x_i x_j)."""
    n = g.n_nodes
    quad = np.zeros((n, n))
    lin = np.zeros(n)
    for i, j, w in g.edges:
        quad[i, j] += 2.0 * w
        lin[i] -= w
        lin[j] -= w
    return QuadraticProgram.build(n, lin, quad, 0.0)


def tsp_to_qp(g: GraphSpec, penalty: float | None = None,
              reduced: bool = False) -> QuadraticProgram:
    """One-hot TSP encoding: variable (city i, position p), positions cyclic.

    Default n^2 variables; `reduced` fixes city 0 at position 0, giving
    (n-1)^2 variables. Penalty defaults to 10 * max weight * n.
    """
    if not g.is_complete():
        raise ValidationError("TSP requires a complete graph")
    n = g.n_nodes
    w = np.zeros((n, n))
    for i, j, wt in g.edges:
        w[i, j] = w[j, i] = wt
    if penalty is None:
        penalty = 10.0 * float(w.max()) * n

    if reduced:
        cities = list(range(1, n))
        positions = list(range(1, n))
    else:
        cities = list(range(n))
        positions = list(range(n))
    var = {(i, p): k for k, (i, p) in enumerate(
        (i, p) for i in cities for p in positions)}
    n_vars = len(var)

    lin = np.zeros(n_vars)
    quad = np.zeros((n_vars, n_vars))
    const = 0.0

    def x_at(i, p):
        """Return (kind, payload): fixed 0/1 or a variable index."""
        p = p % n
        if reduced and (i == 0 or p == 0):
            return ("const", 1.0 if (i == 0 and p == 0) else 0.0)
        return ("var", var[(i, p)])

    def add_product(a, b, coeff):
        ka, va = a
        kb, vb = b
        nonlocal const
        if ka == "const" and kb == "const":
            const += coeff * va * vb
        elif ka == "const":
            lin[vb] += coeff * va
        elif kb == "const":
            lin[va] += coeff * vb
        elif va == vb:
            lin[va] += coeff
        else:
            quad[va, vb] += coeff / 2.0
            quad[vb, va] += coeff / 2.0

    all_cities = range(n)
    # Tour cost: ordered city pairs at consecutive cyclic positions.
    for i in all_cities:
        for j in all_cities:
            if i == j:
                continue
            for p in range(n):
                add_product(x_at(i, p), x_at(j, p + 1), w[i, j])
    # One-hot penalties: each city in exactly one position, each position
    # holds exactly one city.
    groups = [[x_at(i, p) for p in range(n)] for i in all_cities]
    groups += [[x_at(i, p) for i in all_cities] for p in range(n)]
    for group in groups:
        const += penalty
        for a in group:
            add_product(a, ("const", 1.0), -2.0 * penalty)
            for b in group:
                add_product(a, b, penalty)
    return QuadraticProgram.build(n_vars, lin, quad, const)


def qp_to_ising(qp: QuadraticProgram) -> Hamiltonian:
    """Substitute x_i = (1 - z_i)/2; result has only Z and ZZ terms plus offset.

    The basis-state energy equals the QP objective on every bitstring exactly
    (coefficients are closed-form over the inputs).
    """
    n = qp.n_vars
    offset = qp.constant
    z_coeff = np.zeros(n)
    zz_coeff = np.zeros((n, n))
    for i in range(n):
        ci = qp.linear[i]
        offset += ci / 2.0
        z_coeff[i] -= ci / 2.0
    for i in range(n):
        for j in range(i + 1, n):
            # x_i x_j appears with total weight 2*Q_ij in x'Qx.
            q = 2.0 * qp.quadratic[i, j]
            if q == 0.0:
                continue
            offset += q / 4.0
            z_coeff[i] -= q / 4.0
            z_coeff[j] -= q / 4.0
            zz_coeff[i, j] += q / 4.0
    terms = []
    for i in range(n):
        letters = ["I"] * n
        letters[i] = "Z"
        terms.append((z_coeff[i], PauliString("".join(letters))))
    for i in range(n):
        for j in range(i + 1, n):
            if zz_coeff[i, j] != 0.0:
                letters = ["I"] * n
                letters[i] = letters[j] = "Z"
                terms.append((zz_coeff[i, j], PauliString("".join(letters))))
    return Hamiltonian.from_terms(n, terms, offset)


@dataclass(frozen=True)
class FermionicOp:
    """Sum of products of creation (+) / annihilation (-) operators."""

    terms: tuple[tuple[float, tuple[tuple[int, bool], ...]], ...]  # (coeff, ((mode, dagger), ...))

    @staticmethod
    def of(terms) -> "FermionicOp":
        return FermionicOp(tuple(
            (float(c), tuple((int(m), bool(d)) for m, d in factors))
            for c, factors in terms))


def _jw_ladder(mode: int, dagger: bool, n_modes: int) -> dict[str, complex]:
    """Jordan-Wigner image of a single ladder operator as {letters: coeff}.

    a_p^dag -> (X_p - iY_p)/2 with a Z chain on modes q < p; a_p flips the sign
    of the Y part.
    """
    chain = ["Z"] * mode
    tail = ["I"] * (n_modes - mode - 1)
    x_letters = "".join(chain + ["X"] + tail)
    y_letters = "".join(chain + ["Y"] + tail)
    y_coeff = -0.5j if dagger else 0.5j
    return {x_letters: 0.5, y_letters: y_coeff}


def jordan_wigner_expand(f: FermionicOp, n_modes: int) -> dict[str, complex]:
    """Full complex Pauli expansion (before the Hermiticity check)."""
    total: dict[str, complex] = {}
    identity = PauliString.identity(n_modes)
    for coeff, factors in f.terms:
        acc = {identity.letters: complex(coeff)}
        for mode, dagger in factors:
            if not 0 <= mode < n_modes:
                raise ValidationError(f"mode {mode} out of range for {n_modes} modes")
            ladder = _jw_ladder(mode, dagger, n_modes)
            nxt: dict[str, complex] = {}
            for s1, c1 in acc.items():
                for s2, c2 in ladder.items():
                    phase, prod = pauli.multiply(PauliString(s1), PauliString(s2))
                    key = prod.letters
                    nxt[key] = nxt.get(key, 0.0) + c1 * c2 * phase
            acc = nxt
        for s, c in acc.items():
            total[s] = total.get(s, 0.0) + c
    return {s: c for s, c in total.items() if abs(c) >= pauli.MERGE_TOLERANCE}


def jordan_wigner(f: FermionicOp, n_modes: int) -> Hamiltonian:
    """Map a Hermitian fermionic operator to a qubit Hamiltonian."""
    expansion = jordan_wigner_expand(f, n_modes)
    terms = []
    for letters, coeff in expansion.items():
        if abs(coeff.imag) > 1e-10:
            raise ValidationError(
                f"non-Hermitian input: term {letters} has imaginary residue {coeff.imag}")
        terms.append((coeff.real, PauliString(letters)))
    return Hamiltonian.from_terms(n_modes, terms)


def brute_force_min(qp: QuadraticProgram) -> tuple[float, str]:
    """Exhaustive minimum of the QP; ties break to the lexicographically
    smallest bitstring (qubit/variable 0 first)."""
    n = qp.n_vars
    if n > MAX_BRUTE_FORCE_VARS:
        raise ResourceError(
            f"brute force refused for {n} variables (cap {MAX_BRUTE_FORCE_VARS})")
    best_value = np.inf
    best_index = 0
    chunk = 1 << 18
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n))
        bits = ((idx[:, None] >> np.arange(n)[None, :]) & 1).astype(float)
        values = (np.einsum("bi,ij,bj->b", bits, qp.quadratic, bits)
                  + bits @ qp.linear + qp.constant)
        k = int(np.argmin(values))
        if values[k] < best_value - 1e-15:
            best_value = float(values[k])
            best_index = int(idx[k])
        elif np.isclose(values[k], best_value, rtol=0.0, atol=1e-15):
            # Candidate tie: compare bitstrings lexicographically.
            tie_idx = idx[np.isclose(values, best_value, rtol=0.0, atol=1e-15)]
            for cand in tie_idx:
                if _bitstring(int(cand), n) < _bitstring(best_index, n):
                    best_index = int(cand)
    return best_value, _bitstring(best_index, n)


def _bitstring(index: int, n: int) -> str:
    return "".join(str((index >> q) & 1) for q in range(n))


def parse_fermionic_lines(lines) -> FermionicOp:
    """Term lines `coeff [+p|-p ...]`, `+` = creation on mode p."""
    terms = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            coeff = float(parts[0])
        except ValueError:
            raise ParseError(f"bad coefficient {parts[0]!r}", line=lineno) from None
        factors = []
        for tok in parts[1:]:
            if not tok or tok[0] not in "+-":
                raise ParseError(f"bad ladder token {tok!r}", line=lineno)
            try:
                mode = int(tok[1:])
            except ValueError:
                raise ParseError(f"bad mode index in {tok!r}", line=lineno) from None
            factors.append((mode, tok[0] == "+"))
        terms.append((coeff, tuple(factors)))
    if not terms:
        raise ParseError("no fermionic terms found")
    return FermionicOp.of(terms)


def load_problem(doc: dict):
    """Problem JSON -> (Hamiltonian, metadata dict).

    `kind` selects the payload: portfolio | maxcut | tsp | fermionic | pauli.
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError("problem document needs a 'kind' field")
    kind = doc["kind"]
    meta = {"kind": kind}
    if kind == "portfolio":
        spec = PortfolioSpec(
            expected_returns=np.asarray(doc["expected_returns"], dtype=float),
            covariance=np.asarray(doc["covariance"], dtype=float),
            risk_factor=float(doc["risk_factor"]),
            budget=int(doc["budget"]),
            penalty=float(doc["penalty"]),
        )
        qp = portfolio_to_qp(spec)
        meta["qp"] = qp
        return qp_to_ising(qp), meta
    if kind == "maxcut":
        g = GraphSpec(int(doc["n_nodes"]), tuple(
            (int(i), int(j), float(w)) for i, j, w in doc["edges"]))
        qp = maxcut_to_qp(g)
        meta["qp"] = qp
        return qp_to_ising(qp), meta
    if kind == "tsp":
        g = GraphSpec(int(doc["n_nodes"]), tuple(
            (int(i), int(j), float(w)) for i, j, w in doc["edges"]))
        qp = tsp_to_qp(
            g, penalty=doc.get("penalty"), reduced=bool(doc.get("reduced", False)))
        meta["qp"] = qp
        return qp_to_ising(qp), meta
    if kind == "fermionic":
        op = parse_fermionic_lines(doc["terms"])
        n_modes = int(doc["n_modes"])
        return jordan_wigner(op, n_modes), meta
    if kind == "pauli":
        return pauli.parse_hamiltonian_file(doc["text"]), meta
    raise ParseError(f"unknown problem kind {kind!r}")


def load_problem_file(path) -> tuple[Hamiltonian, dict]:
    with open(path) as fh:
        return load_problem(json.load(fh))
