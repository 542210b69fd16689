"""Dense gate matrices and whole-circuit unitaries (small-n verification oracle)."""
from __future__ import annotations

from functools import reduce

import numpy as np

from .circuit import Circuit, Gate
from .pauli import CLIFFORDS, PAULI_MATRICES, UnsupportedGate

MAX_UNITARY_QUBITS = 8

_FIXED = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "X": PAULI_MATRICES["X"],
    "Y": PAULI_MATRICES["Y"],
    "Z": PAULI_MATRICES["Z"],
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
}
# basis index = b0 + 2*b1 with b0 the first listed qubit (control for CNOT)
_CNOT = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def rzz(theta: float) -> np.ndarray:
    e, o = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    return np.diag([e, o, o, e])


ROTATION = {"RX": rx, "RY": ry, "RZ": rz}


def gate_matrix(g: Gate) -> np.ndarray:
    """Local matrix; for two-qubit gates ``g.qubits[0]`` is the low bit."""
    if g.kind in _FIXED:
        return _FIXED[g.kind]
    if g.kind in ROTATION:
        return ROTATION[g.kind](g.angle)
    if g.kind == "CLIFFORD":
        return CLIFFORDS[g.clifford].matrix()
    if g.kind == "RZZ":
        return rzz(g.angle)
    if g.kind == "CNOT":
        return _CNOT
    raise UnsupportedGate(f"no matrix for {g.kind}")


def embed(local: np.ndarray, qubits, n: int) -> np.ndarray:
    """Full 2^n x 2^n operator of ``local`` acting on ``qubits``."""
    k = len(qubits)
    # tensor axes are ordered most-significant qubit first
    t = local.reshape([2] * (2 * k))
    out = np.eye(2 ** n, dtype=complex).reshape([2] * (2 * n))
    row_axes = [n - 1 - q for q in qubits]
    # local tensor axes: outputs (msb first) then inputs (msb first)
    local_out = list(range(k - 1, -1, -1))
    local_in = [k + i for i in local_out]
    letters = "abcdefghijklmnopqrstuvwxyz"
    full = list(letters[: 2 * n])
    new_rows = list("ABCDEFGHIJ"[:k])
    loc = [""] * (2 * k)
    for pos, q_ax in enumerate(row_axes):
        loc[local_out[pos]] = new_rows[pos]
        loc[local_in[pos]] = full[q_ax]
    result = full.copy()
    for pos, q_ax in enumerate(row_axes):
        result[q_ax] = new_rows[pos]
    spec = f"{''.join(loc)},{''.join(full)}->{''.join(result)}"
    return np.einsum(spec, t, out).reshape(2 ** n, 2 ** n)


def circuit_unitary(circuit: Circuit, max_qubits: int = MAX_UNITARY_QUBITS) -> np.ndarray:
    """Product of all gate matrices in cycle order.

    Refuses circuits with measurement (strip it first) or more than
    ``max_qubits`` qubits.
    """
    n = circuit.n_qubits
    if n > max_qubits:
        raise ValueError(f"circuit has {n} qubits; unitary limit is {max_qubits}")
    if any(g.kind == "MEASURE" for g in circuit.gates()):
        raise ValueError("circuit contains measurement; use without_measurement()")
    mats = [embed(gate_matrix(g), g.qubits, n) for g in circuit.gates()]
    return reduce(lambda acc, m: m @ acc, mats, np.eye(2 ** n, dtype=complex))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    d = a.shape[0]
    overlap = np.vdot(a.ravel(), b.ravel())
    if abs(overlap) < 1e-300:
        return False
    phase = overlap / abs(overlap)
    return np.allclose(a * phase, b, atol=atol) and abs(abs(overlap) - np.vdot(a.ravel(), a.ravel()).real) < atol * d


def process_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``|Tr(A^dagger B)/d|^2``; 1 iff equal up to global phase."""
    d = a.shape[0]
    return float(abs(np.trace(a.conj().T @ b) / d) ** 2)
