"""Frame randomization: twirl hard cycles and fold the frames into easy cycles.

Each hard cycle G is rewritten as ``K . G' . E`` (E acts first): E is a
random single-qubit frame, G' is G with parametric angles possibly negated,
and K is the correction that restores the original unitary. E is folded into
the easy cycle before G and K into the easy cycle after it, so the cycle
count never grows beyond the normalized input.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .circuit import ROTATIONS, Circuit, CircuitError, Cycle, Gate, easy
from .noise import NoiseModel, closing_cnots
from .pauli import (
    CLIFFORDS,
    IDENTITY,
    PAULI_INDEX,
    PAULI_MATRICES,
    NonLocalCorrection,
    PauliString,
    acceptance_subgroup,
    clifford_gate,
    conjugate_clifford_through_cycle,
    conjugate_pauli_through_cycle,
    gate_clifford_index,
    rotation_through_clifford,
)
from .unitary import circuit_unitary, embed, gate_matrix, rz, rzz

MODES = ("none", "pauli", "clifford")

# sampler(rng, choices) -> one element of choices; tests swap this out
Sampler = Callable[[np.random.Generator, Sequence], object]


def uniform_sampler(rng: np.random.Generator, choices: Sequence):
    return choices[int(rng.integers(len(choices)))]


class TwirlError(ValueError):
    pass


@dataclass(frozen=True)
class TwirlConfig:
    mode: str = "pauli"
    n_compilations: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise TwirlError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n_compilations < 1:
            raise TwirlError("n_compilations must be at least 1")
        if self.mode == "none":
            object.__setattr__(self, "n_compilations", 1)


@dataclass(frozen=True)
class CycleFrame:
    """Frame drawn for one hard cycle (Clifford indices per qubit)."""

    cycle: int
    entry: Mapping[int, int]
    exit: Mapping[int, int]
    angle_signs: tuple[int, ...]


@dataclass(frozen=True)
class FrameAssignment:
    compilation: int
    seed: tuple[int, ...]
    frames: tuple[CycleFrame, ...] = field(default_factory=tuple)


# --- canonical single-qubit words ------------------------------------------------

@dataclass(frozen=True)
class LocalWord:
    """Operator ``R_axis(angle) . C``: a Clifford followed by an optional rotation."""

    clifford: int = IDENTITY
    rotation: tuple[str, float] | None = None

    @classmethod
    def from_gates(cls, gates: Sequence[Gate]) -> "LocalWord":
        word = cls()
        for g in gates:
            if g.kind in ROTATIONS:
                if word.rotation is not None:
                    raise CircuitError(f"two rotations on qubit {g.qubits[0]} in one easy cycle")
                word = LocalWord(word.clifford, (g.kind[1], g.angle))
            else:
                if word.rotation is not None:
                    raise CircuitError(f"Clifford after rotation on qubit {g.qubits[0]} is not canonical")
                word = LocalWord((CLIFFORDS[gate_clifford_index(g)] @ CLIFFORDS[word.clifford]).index)
        return word

    def fold_before(self, d: int) -> "LocalWord":
        return LocalWord((CLIFFORDS[self.clifford] @ CLIFFORDS[d]).index, self.rotation)

    def fold_after(self, d: int) -> "LocalWord":
        rot = self.rotation
        if rot is not None:
            rot = rotation_through_clifford(CLIFFORDS[d], *rot)
        return LocalWord((CLIFFORDS[d] @ CLIFFORDS[self.clifford]).index, rot)

    def gates(self, qubit: int) -> list[Gate]:
        out = []
        g = clifford_gate(self.clifford, qubit)
        if g is not None:
            out.append(g)
        if self.rotation is not None:
            axis, angle = self.rotation
            out.append(Gate("R" + axis, (qubit,), angle))
        return out

    def matrix(self) -> np.ndarray:
        m = CLIFFORDS[self.clifford].matrix()
        for g in self.gates(0):
            if g.kind in ROTATIONS:
                m = gate_matrix(g) @ m
        return m


def fold_frame_into_easy_cycle(cycle: Cycle, frame: Mapping[int, int], side: str) -> Cycle:
    """Absorb single-qubit Cliffords (qubit -> group index) into an easy cycle.

    ``side="before"`` means the frame acts before the cycle's gates in time,
    ``"after"`` means it acts after them. Identity entries leave the qubit's
    gates untouched.
    """
    if cycle.cls != "easy":
        raise TwirlError(f"cannot fold a frame into a {cycle.cls} cycle")
    if side not in ("before", "after"):
        raise TwirlError(f"side must be 'before' or 'after', got {side!r}")
    touched = {q: d for q, d in frame.items() if d != IDENTITY}
    if not touched:
        return cycle
    per_qubit: dict[int, list[Gate]] = {}
    for g in cycle.gates:
        per_qubit.setdefault(g.qubits[0], []).append(g)
    new_words = {}
    for q, d in touched.items():
        word = LocalWord.from_gates(per_qubit.get(q, []))
        new_words[q] = word.fold_before(d) if side == "before" else word.fold_after(d)
    gates: list[Gate] = []
    emitted: set[int] = set()
    for g in cycle.gates:
        q = g.qubits[0]
        if q not in new_words:
            gates.append(g)
        elif q not in emitted:
            gates.extend(new_words[q].gates(q))
            emitted.add(q)
    for q in sorted(set(new_words) - emitted):
        gates.extend(new_words[q].gates(q))
    return Cycle(tuple(gates), "easy")


# --- circuit normalization ------------------------------------------------------

def normalize(circuit: Circuit) -> Circuit:
    """Insert empty easy cycles so every hard cycle has easy neighbours."""
    out: list[Cycle] = []
    cycles = circuit.cycles
    for j, c in enumerate(cycles):
        if c.cls == "hard" and (not out or out[-1].cls != "easy"):
            out.append(easy())
        out.append(c)
        if c.cls == "hard":
            nxt = cycles[j + 1] if j + 1 < len(cycles) else None
            if nxt is None or nxt.cls != "easy":
                out.append(easy())
    return Circuit(circuit.n_qubits, tuple(out))


# --- frame drawing ----------------------------------------------------------------

def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))


def _twirl_pauli(cycle: Cycle, n: int, draw) -> tuple[Cycle, dict[int, int], dict[int, int], tuple[int, ...]]:
    ops = ["I"] * n
    for q in sorted(cycle.qubits):
        ops[q] = draw(q, "IXYZ")
    entry = PauliString(tuple(ops))
    out, signs = conjugate_pauli_through_cycle(cycle, entry)
    gates = tuple(g.with_angle(s * g.angle) if g.angle is not None else g for g, s in zip(cycle.gates, signs))
    entry_map = {q: PAULI_INDEX[ops[q]] for q in cycle.qubits}
    exit_map = {q: PAULI_INDEX[out.ops[q]] for q in cycle.qubits}
    return Cycle(gates, "hard"), entry_map, exit_map, tuple(signs)


def _twirl_clifford(cycle: Cycle, n: int, draw, j: int):
    entry: dict[int, int] = {}
    for g in cycle.gates:
        for role, q in enumerate(g.qubits):
            accept = acceptance_subgroup(g.kind, role)
            if not accept:
                raise TwirlError(f"cycle {j}: no local Clifford frames pass through {g.kind}")
            while True:
                c = draw(q, range(24))
                if c in accept:
                    break
            entry[q] = int(c)
    exit_map: dict[int, int] = {}
    gates, signs = [], []
    for g in cycle.gates:
        inv = [CLIFFORDS[entry[q]].inverse for q in g.qubits]
        if g.kind == "RZZ":
            s = 1
            for q in g.qubits:
                s *= CLIFFORDS[entry[q]].image("Z")[0]
            gates.append(g.with_angle(s * g.angle))
            signs.append(s)
            for q, c in zip(g.qubits, inv):
                exit_map[q] = c.index
        elif g.kind == "CNOT":
            local = Cycle((Gate("CNOT", (0, 1)),), "hard")
            try:
                corr = conjugate_clifford_through_cycle(local, inv)
            except NonLocalCorrection as exc:
                raise TwirlError(f"cycle {j}: {exc}") from None
            gates.append(g)
            signs.append(1)
            for q, c in zip(g.qubits, corr):
                exit_map[q] = c.index
        else:
            raise TwirlError(f"cycle {j}: no Clifford twirl rule for {g.kind}")
    return Cycle(tuple(gates), "hard"), entry, exit_map, tuple(signs)


def _compile_once(norm: Circuit, cfg: TwirlConfig, i: int, sampler: Sampler) -> tuple[Circuit, FrameAssignment]:
    cycles = list(norm.cycles)
    frames = []
    for j, c in enumerate(norm.cycles):
        if c.cls != "hard":
            continue

        rngs: dict[int, np.random.Generator] = {}

        def draw(q, choices, _j=j, _rngs=rngs):
            if q not in _rngs:
                _rngs[q] = _rng(cfg.seed, i, _j, q)
            return sampler(_rngs[q], choices)

        if cfg.mode == "pauli":
            new, entry, exit_, signs = _twirl_pauli(c, norm.n_qubits, draw)
        else:
            new, entry, exit_, signs = _twirl_clifford(c, norm.n_qubits, draw, j)
        cycles[j] = new
        cycles[j - 1] = fold_frame_into_easy_cycle(cycles[j - 1], entry, "after")
        cycles[j + 1] = fold_frame_into_easy_cycle(cycles[j + 1], exit_, "before")
        frames.append(CycleFrame(j, entry, exit_, signs))
    return Circuit(norm.n_qubits, tuple(cycles)), FrameAssignment(i, (cfg.seed, i), tuple(frames))


def randomize_with_assignments(
    circuit: Circuit, cfg: TwirlConfig, sampler: Sampler = uniform_sampler
) -> list[tuple[Circuit, FrameAssignment]]:
    norm = normalize(circuit)
    if cfg.mode == "none":
        return [(norm, FrameAssignment(0, (cfg.seed, 0)))]
    return [_compile_once(norm, cfg, i, sampler) for i in range(cfg.n_compilations)]


def randomize(circuit: Circuit, cfg: TwirlConfig, sampler: Sampler = uniform_sampler) -> list[Circuit]:
    """``cfg.n_compilations`` independently framed, equivalent circuits.

    Compilation ``i`` draws the frame for qubit ``q`` of cycle ``j`` from a
    generator keyed by ``(seed, i, j, q)``, so outputs do not depend on
    generation order.
    """
    return [c for c, _ in randomize_with_assignments(circuit, cfg, sampler)]


# --- twirled process matrices (verification at <= 2 qubits) -----------------------

def _pauli_basis(k: int) -> list[np.ndarray]:
    return [PauliString(tuple(p)).matrix() for p in itertools.product("IXYZ", repeat=k)]


def ptm(channel: Callable[[np.ndarray], np.ndarray], k: int) -> np.ndarray:
    """Pauli transfer matrix ``R_ij = Tr(P_i channel(P_j)) / 2^k``."""
    basis = _pauli_basis(k)
    d = 2 ** k
    out = np.empty((len(basis), len(basis)))
    for jj, pj in enumerate(basis):
        img = channel(pj)
        for ii, pi in enumerate(basis):
            out[ii, jj] = np.trace(pi @ img).real / d
    return out


def unitary_ptm(u: np.ndarray) -> np.ndarray:
    k = int(np.log2(u.shape[0]))
    return ptm(lambda rho: u @ rho @ u.conj().T, k)


def _noisy_cycle_channel(cycle: Cycle, nm: NoiseModel, k: int):
    steps = []
    closing = closing_cnots(cycle.gates)
    for i, g in enumerate(cycle.gates):
        if g.kind == "RZZ":
            steps.append(("u", embed(rzz(g.angle + nm.coherent_zz), g.qubits, k)))
        else:
            steps.append(("u", embed(gate_matrix(g), g.qubits, k)))
            if i in closing and nm.coherent_zz:
                steps.append(("u", embed(rzz(nm.coherent_zz), g.qubits, k)))
        if g.is_two_qubit and nm.coherent_target_z:
            steps.append(("u", embed(rz(nm.coherent_target_z), (g.qubits[1],), k)))
        ch = nm.channel(g)
        if ch:
            kraus = []
            for label, p in ch.items():
                op = np.eye(1, dtype=complex)
                mats = {q: PAULI_MATRICES[l] for q, l in zip(g.qubits, label)}
                for q in reversed(range(k)):
                    op = np.kron(op, mats.get(q, PAULI_MATRICES["I"]))
                kraus.append((p, op))
            steps.append(("pauli", kraus))

    def apply(rho: np.ndarray) -> np.ndarray:
        for kind, data in steps:
            if kind == "u":
                rho = data @ rho @ data.conj().T
            else:
                stay = 1.0 - sum(p for p, _ in data)
                rho = stay * rho + sum(p * (op @ rho @ op.conj().T) for p, op in data)
        return rho

    return apply


@dataclass(frozen=True)
class TwirledChannel:
    ptm: np.ndarray  # frame-averaged noisy cycle
    ideal_ptm: np.ndarray
    error_ptm: np.ndarray  # ptm with the ideal cycle factored out

    def max_offdiagonal(self) -> float:
        off = self.error_ptm - np.diag(np.diag(self.error_ptm))
        return float(np.abs(off).max())


def twirl_average_channel(cycle: Cycle, nm: NoiseModel) -> TwirledChannel:
    """Exact average over all 4^k Pauli frames of the noisy framed cycle."""
    k = cycle.max_qubit() + 1
    if k > 2:
        raise TwirlError(f"twirl average is limited to 2 qubits, cycle spans {k}")
    ideal = circuit_unitary(Circuit(k, (cycle,)))
    total = np.zeros((4 ** k, 4 ** k))
    frames = list(itertools.product("IXYZ", repeat=k))
    for ops in frames:
        entry = PauliString(ops)
        out, signs = conjugate_pauli_through_cycle(cycle, entry)
        twirled = Cycle(tuple(g.with_angle(s * g.angle) if g.angle is not None else g
                              for g, s in zip(cycle.gates, signs)), "hard")
        e_mat, k_mat = entry.matrix(), PauliString(out.ops).matrix()
        noisy = _noisy_cycle_channel(twirled, nm, k)
        total += ptm(lambda rho: k_mat @ noisy(e_mat @ rho @ e_mat.conj().T) @ k_mat.conj().T, k)
    avg = total / len(frames)
    ideal_ptm = unitary_ptm(ideal)
    return TwirledChannel(avg, ideal_ptm, avg @ ideal_ptm.T)


def bare_channel(cycle: Cycle, nm: NoiseModel) -> TwirledChannel:
    """Untwirled counterpart of :func:`twirl_average_channel`."""
    k = cycle.max_qubit() + 1
    ideal_ptm = unitary_ptm(circuit_unitary(Circuit(k, (cycle,))))
    r = ptm(_noisy_cycle_channel(cycle, nm, k), k)
    return TwirledChannel(r, ideal_ptm, r @ ideal_ptm.T)
