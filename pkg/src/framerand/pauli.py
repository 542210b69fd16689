"""Signed Pauli strings, the single-qubit Clifford group, and conjugation rules.

Conjugation follows the operator identity ``g(theta) p = p_out g(s*theta)``:
for Clifford gates ``p_out = g p g^dagger`` and ``s = +1``; for rotations the
string passes through unchanged and ``s = -1`` whenever it anticommutes with
the rotation generator.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circuit import Cycle, Gate

LETTERS = ("I", "X", "Y", "Z")
_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_FROM_XZ = {v: k for k, v in _XZ.items()}

# P*Q = i^k R for single-qubit Paulis
_MUL: dict[tuple[str, str], tuple[int, str]] = {}
for _a in LETTERS:
    _MUL[("I", _a)] = (0, _a)
    _MUL[(_a, "I")] = (0, _a)
    _MUL[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _MUL[(_a, _b)] = (1, _c)
    _MUL[(_b, _a)] = (3, _c)

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class UnsupportedGate(ValueError):
    pass


class NonLocalCorrection(ValueError):
    """A Clifford frame does not pass through a hard cycle as local gates."""


def commutes(a: str, b: str) -> bool:
    return a == "I" or b == "I" or a == b


@dataclass(frozen=True)
class PauliString:
    """Pauli operator ``i^phase * ops[0] (x) ops[1] (x) ...``.

    Hermitian strings carry ``phase`` 0 or 2 (sign +1 or -1). Products of
    anticommuting strings can pick up odd phases; those are kept so that
    composition stays associative.
    """

    ops: tuple[str, ...]
    phase: int = 0

    def __post_init__(self):
        ops = tuple(self.ops)
        if any(o not in _XZ for o in ops):
            raise ValueError(f"invalid Pauli letters in {ops!r}")
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliString":
        return cls(tuple(label), 0 if sign > 0 else 2)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(("I",) * n)

    @property
    def sign(self) -> int:
        if self.phase % 2:
            raise ValueError("non-Hermitian Pauli string has no real sign")
        return 1 if self.phase == 0 else -1

    @property
    def label(self) -> str:
        return "".join(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def is_identity(self) -> bool:
        return all(o == "I" for o in self.ops)

    def compose(self, other: "PauliString") -> "PauliString":
        """Operator product ``self * other``."""
        if len(other) != len(self):
            raise ValueError("length mismatch")
        k = self.phase + other.phase
        ops = []
        for a, b in zip(self.ops, other.ops):
            dk, c = _MUL[(a, b)]
            k += dk
            ops.append(c)
        return PauliString(tuple(ops), k)

    __mul__ = compose

    def commutes_with(self, other: "PauliString") -> bool:
        anti = sum(not commutes(a, b) for a, b in zip(self.ops, other.ops))
        return anti % 2 == 0

    def restrict(self, qubits: Sequence[int]) -> "PauliString":
        return PauliString(tuple(self.ops[q] for q in qubits))

    def matrix(self) -> np.ndarray:
        """Dense matrix with ops[0] on the least significant bit."""
        m = np.array([[1.0 + 0j]])
        for o in self.ops:
            m = np.kron(PAULI_MATRICES[o], m)
        return (1j ** self.phase) * m


# --- signed single/two-qubit conjugation in symplectic form -----------------
# Sign update rules are the Aaronson-Gottesman tableau rules for Hermitian
# Paulis (Y written as x=z=1).

def _h(x, z, r):
    return z, x, r ^ (x & z)


def _s(x, z, r):
    return x, z ^ x, r ^ (x & z)


def _sdg(x, z, r):
    # S^dagger = S^3
    for _ in range(3):
        x, z, r = _s(x, z, r)
    return x, z, r


def _pauli_gate(letter):
    def f(x, z, r):
        return x, z, r ^ (0 if commutes(letter, _FROM_XZ[(x, z)]) else 1)
    return f


_ONE_QUBIT_RULES = {
    "H": _h,
    "S": _s,
    "SDG": _sdg,
    "X": _pauli_gate("X"),
    "Y": _pauli_gate("Y"),
    "Z": _pauli_gate("Z"),
}


def _cnot(xa, za, xb, zb, r):
    r ^= xa & zb & (xb ^ za ^ 1)
    return xa, za ^ zb, xb ^ xa, zb, r


# --- single-qubit Clifford group ---------------------------------------------

@dataclass(frozen=True)
class SingleQubitClifford:
    """One of the 24 single-qubit Cliffords, by its signed action on X, Y, Z.

    ``action[P] = (sign, letter)`` means ``C P C^dagger = sign * letter``.
    """

    index: int
    action: tuple[tuple[str, tuple[int, str]], ...]
    word: tuple[str, ...]

    def image(self, letter: str) -> tuple[int, str]:
        if letter == "I":
            return 1, "I"
        return dict(self.action)[letter]

    def matrix(self) -> np.ndarray:
        return _word_matrix(self.word)

    @property
    def inverse(self) -> "SingleQubitClifford":
        return CLIFFORDS[_inverse_table()[self.index]]

    def __matmul__(self, other: "SingleQubitClifford") -> "SingleQubitClifford":
        """Operator product ``self @ other`` (``other`` acts first)."""
        return CLIFFORDS[_product_table()[self.index][other.index]]


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])


def _word_matrix(word: Sequence[str]) -> np.ndarray:
    m = np.eye(2, dtype=complex)
    for w in word:
        m = (_H if w == "H" else _S) @ m
    return m


def _apply_to_xz(action_xz, letter):
    """Image of a letter under an action given by images of X and Z."""
    if letter == "I":
        return 1, "I"
    if letter in ("X", "Z"):
        return action_xz[letter]
    # Y = i X Z
    (sx, px), (sz, pz) = action_xz["X"], action_xz["Z"]
    k, c = _MUL[(px, pz)]
    total = 1 + k  # i * i^k
    assert total % 2 == 0
    return sx * sz * (1 if total % 4 == 0 else -1), c


def _compose_action(outer, inner):
    """Action of ``outer @ inner`` from actions given on X and Z."""
    out = {}
    for p in ("X", "Z"):
        s, q = inner[p]
        s2, q2 = _apply_to_xz(outer, q)
        out[p] = (s * s2, q2)
    return out


def _key(action_xz):
    return (action_xz["X"], action_xz["Z"])


@lru_cache(maxsize=None)
def _generate() -> tuple[SingleQubitClifford, ...]:
    gens = {"H": {"X": (1, "Z"), "Z": (1, "X")}, "S": {"X": (1, "Y"), "Z": (1, "Z")}}
    start = {"X": (1, "X"), "Z": (1, "Z")}
    found = {_key(start): ((), start)}
    queue = [start]
    order = [_key(start)]
    while queue:
        cur = queue.pop(0)
        word = found[_key(cur)][0]
        for name in ("H", "S"):
            nxt = _compose_action(gens[name], cur)
            k = _key(nxt)
            if k not in found:
                found[k] = (word + (name,), nxt)
                order.append(k)
                queue.append(nxt)
    out = []
    for idx, k in enumerate(order):
        word, act = found[k]
        action = tuple((p, _apply_to_xz(act, p)) for p in ("X", "Y", "Z"))
        out.append(SingleQubitClifford(idx, action, word))
    return tuple(out)


CLIFFORDS: tuple[SingleQubitClifford, ...] = _generate()
_BY_ACTION = {(c.image("X"), c.image("Z")): c.index for c in CLIFFORDS}


def clifford_from_images(x_image: tuple[int, str], z_image: tuple[int, str]) -> SingleQubitClifford:
    return CLIFFORDS[_BY_ACTION[(x_image, z_image)]]


@lru_cache(maxsize=None)
def _product_table() -> tuple[tuple[int, ...], ...]:
    rows = []
    for a in CLIFFORDS:
        act_a = {"X": a.image("X"), "Z": a.image("Z")}
        row = []
        for b in CLIFFORDS:
            act_b = {"X": b.image("X"), "Z": b.image("Z")}
            row.append(_BY_ACTION[_key(_compose_action(act_a, act_b))])
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def _inverse_table() -> tuple[int, ...]:
    table = _product_table()
    return tuple(row.index(0) for row in table)


def _find(letter_map) -> int:
    return _BY_ACTION[(letter_map["X"], letter_map["Z"])]


IDENTITY = 0
NAMED_CLIFFORDS = {
    "X": _find({"X": (1, "X"), "Z": (-1, "Z")}),
    "Y": _find({"X": (-1, "X"), "Z": (-1, "Z")}),
    "Z": _find({"X": (-1, "X"), "Z": (1, "Z")}),
    "H": _find({"X": (1, "Z"), "Z": (1, "X")}),
    "S": _find({"X": (1, "Y"), "Z": (1, "Z")}),
    "SDG": _find({"X": (-1, "Y"), "Z": (1, "Z")}),
}
_NAME_OF = {v: k for k, v in NAMED_CLIFFORDS.items()}
PAULI_INDEX = {"I": IDENTITY, "X": NAMED_CLIFFORDS["X"], "Y": NAMED_CLIFFORDS["Y"], "Z": NAMED_CLIFFORDS["Z"]}


def clifford_name(index: int) -> str | None:
    """Named gate kind for a group element, if it has one."""
    return _NAME_OF.get(index)


def gate_clifford_index(g: Gate) -> int:
    if g.kind == "CLIFFORD":
        return g.clifford
    if g.kind in NAMED_CLIFFORDS:
        return NAMED_CLIFFORDS[g.kind]
    raise UnsupportedGate(f"{g.kind} is not a single-qubit Clifford")


def clifford_gate(index: int, qubit: int) -> Gate | None:
    """Gate realizing a group element on one qubit, or None for identity."""
    if index == IDENTITY:
        return None
    name = clifford_name(index)
    if name is not None:
        return Gate(name, (qubit,))
    return Gate("CLIFFORD", (qubit,), clifford=index)


# --- conjugation through gates -------------------------------------------------

_ROTATION_AXIS = {"RX": "X", "RY": "Y", "RZ": "Z"}


def conjugate_pauli_through_gate(g: Gate, p: PauliString) -> tuple[PauliString, int]:
    """Return ``(p_out, s)`` with ``g(theta) p = p_out g(s*theta)``.

    ``p`` is given on ``g.qubits`` in the gate's own qubit order.
    """
    if len(p) != len(g.qubits):
        raise ValueError(f"Pauli string of length {len(p)} on {g.kind} acting on {len(g.qubits)} qubits")
    kind = g.kind
    if kind in _ROTATION_AXIS:
        return p, (1 if commutes(_ROTATION_AXIS[kind], p.ops[0]) else -1)
    if kind == "RZZ":
        anti = sum(not commutes("Z", o) for o in p.ops) % 2
        return p, (-1 if anti else 1)
    if p.phase % 2:
        raise ValueError("conjugation expects a Hermitian Pauli string")
    r = 0 if p.phase == 0 else 1
    if kind in _ONE_QUBIT_RULES:
        x, z = _XZ[p.ops[0]]
        x, z, r = _ONE_QUBIT_RULES[kind](x, z, r)
        return PauliString((_FROM_XZ[(x, z)],), 2 * r), 1
    if kind == "CLIFFORD":
        s, letter = CLIFFORDS[g.clifford].image(p.ops[0])
        return PauliString((letter,), 2 * r if s > 0 else 2 * (r ^ 1)), 1
    if kind == "CNOT":
        xa, za = _XZ[p.ops[0]]
        xb, zb = _XZ[p.ops[1]]
        xa, za, xb, zb, r = _cnot(xa, za, xb, zb, r)
        return PauliString((_FROM_XZ[(xa, za)], _FROM_XZ[(xb, zb)]), 2 * r), 1
    raise UnsupportedGate(f"cannot conjugate a Pauli through {kind}")


def conjugate_pauli_through_cycle(cycle: Cycle, p: PauliString) -> tuple[PauliString, list[int]]:
    """Push an n-qubit string through every gate of a cycle.

    Returns the outgoing string and one angle sign per gate (in gate order).
    """
    ops = list(p.ops)
    phase = p.phase
    signs = []
    for g in cycle.gates:
        sub = PauliString(tuple(ops[q] for q in g.qubits))
        out, s = conjugate_pauli_through_gate(g, sub)
        phase += out.phase
        for q, o in zip(g.qubits, out.ops):
            ops[q] = o
        signs.append(s)
    return PauliString(tuple(ops), phase), signs


def _signed_image_cnot(frame_c: SingleQubitClifford, frame_t: SingleQubitClifford, letters):
    """Image of a two-qubit Pauli under CNOT (F_c x F_t) CNOT^dagger."""
    cnot = Gate("CNOT", (0, 1))
    p, _ = conjugate_pauli_through_gate(cnot, PauliString(letters))
    sc, lc = frame_c.image(p.ops[0])
    st, lt = frame_t.image(p.ops[1])
    q = PauliString((lc, lt), 0 if sc * st * p.sign > 0 else 2)
    out, _ = conjugate_pauli_through_gate(cnot, q)
    return out


def conjugate_clifford_through_cycle(
    cycle: Cycle, frame: Sequence[SingleQubitClifford | int]
) -> list[SingleQubitClifford]:
    """Correction frame ``D`` with ``cycle * frame = D * cycle`` (operators).

    Only CNOT hard cycles are supported. Raises NonLocalCorrection when the
    conjugated frame is entangling.
    """
    frame = [f if isinstance(f, SingleQubitClifford) else CLIFFORDS[f] for f in frame]
    out = list(frame)
    for g in cycle.gates:
        if g.kind != "CNOT":
            raise UnsupportedGate(f"Clifford frames pass only through CNOT cycles, got {g.kind}")
        c, t = g.qubits
        images = {}
        for role, (la, lb) in (("cX", "XI"), ("cZ", "ZI"), ("tX", "IX"), ("tZ", "IZ")):
            images[role] = _signed_image_cnot(frame[c], frame[t], (la, lb))
        if images["cX"].ops[1] != "I" or images["cZ"].ops[1] != "I" \
                or images["tX"].ops[0] != "I" or images["tZ"].ops[0] != "I":
            raise NonLocalCorrection(
                f"frame ({frame[c].index}, {frame[t].index}) on CNOT{g.qubits} conjugates to an entangling operator"
            )
        out[c] = clifford_from_images(
            (images["cX"].sign, images["cX"].ops[0]), (images["cZ"].sign, images["cZ"].ops[0])
        )
        out[t] = clifford_from_images(
            (images["tX"].sign, images["tX"].ops[1]), (images["tZ"].sign, images["tZ"].ops[1])
        )
    return out


def rotation_through_clifford(c: SingleQubitClifford, axis: str, angle: float) -> tuple[str, float]:
    """``C R_axis(angle) C^dagger = R_axis'(angle')``."""
    s, letter = c.image(axis)
    return letter, s * angle


@lru_cache(maxsize=None)
def acceptance_subgroup(kind: str, role: int) -> tuple[int, ...]:
    """Single-qubit Cliffords that pass through one operand of a gate locally.

    ``role`` is the operand position (0 = first qubit / control). For RZZ the
    frame must map Z to +-Z; for CNOT the local-correction test is run
    against the identity on the other operand.
    """
    accepted = []
    for c in CLIFFORDS:
        if kind == "RZZ":
            ok = c.image("Z")[1] == "Z"
        elif kind == "CNOT":
            frame = [CLIFFORDS[IDENTITY], CLIFFORDS[IDENTITY]]
            frame[role] = c
            try:
                conjugate_clifford_through_cycle(Cycle((Gate("CNOT", (0, 1)),), "hard"), frame)
                ok = True
            except NonLocalCorrection:
                ok = False
        else:
            raise UnsupportedGate(f"no Clifford acceptance rule for {kind}")
        if ok:
            accepted.append(c.index)
    return tuple(accepted)
