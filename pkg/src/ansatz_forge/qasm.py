"""OpenQASM 2.0 emission for decoded circuits.

qelib1.inc covers every gate we use except RZX and SQRT_H; those two get
inline `gate` definitions in the header. Output is byte-stable: identical
inputs produce identical text.
"""

from __future__ import annotations

from .circuit import Circuit
from .errors import ValidationError

_QELIB_NAMES = {
    "RX": "rx",
    "RY": "ry",
    "RZ": "rz",
    "U1": "u1",
    "U3": "u3",
    "SX": "sx",
    "X": "x",
    "H": "h",
    "CZ": "cz",
    "CNOT": "cx",
    "CU3": "cu3",
    "RZZ": "rzz",
    "RXX": "rxx",
}

# exp(-i theta Z(x)X / 2): conjugating the target by H turns the ZZ rotation
# (cx, rz, cx) into a ZX rotation.
_RZX_DEF = (
    "gate rzx(theta) a,b { h b; cx a,b; rz(theta) b; cx a,b; h b; }"
)

# Principal sqrt of H: Ry(pi/4) S Ry(-pi/4), applied right to left.
_SQRT_H_DEF = (
    "gate sqrth a { ry(-pi/4) a; u1(pi/2) a; ry(pi/4) a; }"
)

_INLINE_NAMES = {"RZX": "rzx", "SQRT_H": "sqrth"}


def _fmt_angle(x: float) -> str:
    return format(float(x), ".17g")


def emit_qasm(c: Circuit, params) -> str:
    """Render c with params bound as an OpenQASM 2.0 program."""
    params = list(params)
    if len(params) != c.n_params:
        raise ValidationError(
            f"expected {c.n_params} params, got {len(params)}")
    used = {ins.gate for ins in c.instructions}
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";']
    if "RZX" in used:
        lines.append(_RZX_DEF)
    if "SQRT_H" in used:
        lines.append(_SQRT_H_DEF)
    lines.append(f"qreg q[{c.n_qubits}];")
    for ins in c.instructions:
        name = _QELIB_NAMES.get(ins.gate) or _INLINE_NAMES[ins.gate]
        angles = ins.angles(params)
        arg = f"({','.join(_fmt_angle(a) for a in angles)})" if angles else ""
        qubits = ",".join(f"q[{q}]" for q in ins.qubits)
        lines.append(f"{name}{arg} {qubits};")
    return "\n".join(lines) + "\n"
