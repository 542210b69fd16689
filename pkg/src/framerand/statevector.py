"""Statevector simulation, energies, shot sampling and Pauli-trajectory noise."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .circuit import Circuit, Gate
from .ising import IsingModel, energy_table
from .noise import NoiseModel, apply_readout_flips, closing_cnots
from .pauli import UnsupportedGate
from .unitary import gate_matrix, rz

NORM_TOL = 1e-10


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        a = np.zeros(1 << n, dtype=np.complex128)
        a[0] = 1.0
        return cls(n, a)

    @classmethod
    def basis(cls, n: int, index: int) -> "StateVector":
        a = np.zeros(1 << n, dtype=np.complex128)
        a[index] = 1.0
        return cls(n, a)

    def probabilities(self) -> np.ndarray:
        return kernels.probabilities(self.amplitudes)

    def norm(self) -> float:
        return float(np.sqrt(self.probabilities().sum()))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


@dataclass(frozen=True)
class ShotCounts:
    counts: Mapping[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to total shots")

    def indices(self) -> tuple[np.ndarray, np.ndarray]:
        """Basis indices and counts (bitstrings are written qubit 0 first)."""
        keys = sorted(self.counts)
        idx = np.array([int(k[::-1], 2) for k in keys], dtype=np.int64)
        return idx, np.array([self.counts[k] for k in keys], dtype=np.int64)

    def mean_energy(self, table: np.ndarray) -> float:
        idx, cnt = self.indices()
        return float(cnt @ table[idx] / self.shots)


def bitstring(index: int, n: int) -> str:
    """Bitstring for a basis index, qubit 0 first."""
    return "".join(str((index >> q) & 1) for q in range(n))


_MATRIX_CACHE: dict[tuple, np.ndarray] = {}


def _matrix(g: Gate) -> np.ndarray:
    key = (g.kind, g.angle, g.clifford)
    m = _MATRIX_CACHE.get(key)
    if m is None:
        m = np.ascontiguousarray(gate_matrix(g), dtype=np.complex128)
        if len(_MATRIX_CACHE) > 4096:
            _MATRIX_CACHE.clear()
        _MATRIX_CACHE[key] = m
    return m


def apply_gate(state: np.ndarray, g: Gate, zz_offset: float = 0.0) -> None:
    kind = g.kind
    if kind == "RZZ":
        kernels.apply_rzz(state, g.qubits[0], g.qubits[1], g.angle + zz_offset)
    elif kind == "CNOT":
        kernels.apply_cnot(state, g.qubits[0], g.qubits[1])
    elif kind == "MEASURE":
        return
    elif kind in ("X", "Y", "Z"):
        kernels.apply_pauli(state, kind, g.qubits[0])
    elif len(g.qubits) == 1:
        kernels.apply_1q(state, _matrix(g), g.qubits[0])
    else:
        raise UnsupportedGate(f"cannot simulate {kind}")


def simulate(circuit: Circuit, initial: StateVector | None = None) -> StateVector:
    """Ideal evolution from |0...0> (or ``initial``); measurement is skipped."""
    sv = StateVector.zero(circuit.n_qubits) if initial is None else StateVector(
        circuit.n_qubits, initial.amplitudes.astype(np.complex128, copy=True))
    state = sv.amplitudes
    for g in circuit.gates():
        apply_gate(state, g)
    return sv


def expectation_energy(state: StateVector, model: IsingModel, table: np.ndarray | None = None) -> float:
    if state.n_qubits != model.n:
        raise ValueError(f"{state.n_qubits}-qubit state for a {model.n}-node model")
    if table is None:
        table = energy_table(model)
    return float(state.probabilities() @ table)


def sample_probabilities(probs: np.ndarray, n: int, shots: int, seed, readout_flip: float = 0.0) -> ShotCounts:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    p = np.clip(probs, 0.0, None)
    p = p / p.sum()
    draws = rng.multinomial(shots, p)
    idx = np.flatnonzero(draws)
    if readout_flip:
        outcomes = np.repeat(idx, draws[idx])
        flips = rng.random((shots, n)) < readout_flip
        mask = (flips * (1 << np.arange(n))).sum(axis=1)
        outcomes = outcomes ^ mask
        vals, cnts = np.unique(outcomes, return_counts=True)
        counts = {bitstring(int(z), n): int(c) for z, c in zip(vals, cnts)}
    else:
        counts = {bitstring(int(z), n): int(draws[z]) for z in idx}
    return ShotCounts(counts, shots)


def sample(state: StateVector, shots: int, seed, noise: NoiseModel | None = None) -> ShotCounts:
    """I.i.d. Z-basis shots; readout flips applied when a noise model is given."""
    flip = noise.readout_flip if noise is not None else 0.0
    return sample_probabilities(state.probabilities(), state.n_qubits, shots, seed, flip)


# --- noisy trajectories -------------------------------------------------------

def _noise_sites(circuit: Circuit, nm: NoiseModel):
    """Gates with a non-empty Pauli channel, plus their cumulative tables."""
    sites = []
    for gi, g in enumerate(circuit.gates()):
        if g.kind == "MEASURE":
            continue
        ch = nm.channel(g)
        if ch:
            labels = list(ch)
            sites.append((gi, labels, np.cumsum([ch[k] for k in labels])))
    return sites


def _draw_patterns(sites, uniforms: np.ndarray) -> list[tuple[tuple[int, str], ...]]:
    """Error pattern per row of ``uniforms`` (shape trajectories x sites)."""
    patterns = []
    for row in uniforms:
        pat = []
        for (gi, labels, cum), u in zip(sites, row):
            k = int(np.searchsorted(cum, u, side="right"))
            if k < len(labels):
                pat.append((gi, labels[k]))
        patterns.append(tuple(pat))
    return patterns


class _NoisyProgram:
    """A circuit flattened into physical noisy-gate steps, with the noiseless
    (Pauli-error-free) state cached after every step."""

    def __init__(self, circuit: Circuit, nm: NoiseModel):
        self.n = circuit.n_qubits
        dz = nm.coherent_zz
        target_rz = rz(nm.coherent_target_z) if nm.coherent_target_z else None
        self.steps: list[list[tuple]] = []
        self.qubits: list[tuple[int, ...]] = []
        gates = [g for g in circuit.gates() if g.kind != "MEASURE"]
        closing = closing_cnots(gates) if dz else set()
        for gi, g in enumerate(gates):
            ops: list[tuple] = []
            if g.kind == "RZZ":
                ops.append((kernels_rzz, g.qubits[0], g.qubits[1], g.angle + dz))
            elif g.kind == "CNOT":
                ops.append((kernels_cnot, g.qubits[0], g.qubits[1]))
                if gi in closing:
                    ops.append((kernels_rzz, g.qubits[0], g.qubits[1], dz))
            elif g.kind in ("X", "Y", "Z"):
                ops.append((kernels_pauli, g.kind, g.qubits[0]))
            else:
                ops.append((kernels_1q, _matrix(g), g.qubits[0]))
            if target_rz is not None and g.is_two_qubit:
                ops.append((kernels_1q, target_rz, g.qubits[1]))
            self.steps.append(ops)
            self.qubits.append(g.qubits)
        state = StateVector.zero(self.n).amplitudes
        self.prefix = [state.copy()]
        for ops in self.steps:
            self._apply(state, ops)
            self.prefix.append(state.copy())

    @staticmethod
    def _apply(state, ops):
        for op in ops:
            op[0](state, *op[1:])

    def run(self, pattern: Sequence[tuple[int, str]]) -> np.ndarray:
        if not pattern:
            return self.prefix[-1].copy()
        errors = dict(pattern)
        first = pattern[0][0]
        state = self.prefix[first + 1].copy()
        for gi in range(first, len(self.steps)):
            if gi > first:
                self._apply(state, self.steps[gi])
            label = errors.get(gi)
            if label is not None:
                for q, letter in zip(self.qubits[gi], label):
                    if letter != "I":
                        kernels.apply_pauli(state, letter, q)
        return state


def kernels_rzz(state, a, b, theta):
    kernels.apply_rzz(state, a, b, theta)


def kernels_cnot(state, c, t):
    kernels.apply_cnot(state, c, t)


def kernels_pauli(state, letter, q):
    kernels.apply_pauli(state, letter, q)


def kernels_1q(state, mat, q):
    kernels.apply_1q(state, mat, q)


def simulate_noisy_trajectory(circuit: Circuit, nm: NoiseModel, seed) -> StateVector:
    """One stochastic trajectory of ``circuit`` under ``nm``."""
    rng = np.random.default_rng(seed)
    sites = _noise_sites(circuit, nm)
    pattern = _draw_patterns(sites, rng.random((1, len(sites))))[0]
    return StateVector(circuit.n_qubits, _NoisyProgram(circuit, nm).run(pattern))


@dataclass(frozen=True)
class TrajectoryResult:
    probabilities: np.ndarray  # trajectory-averaged, before readout flips
    energies: np.ndarray  # per-trajectory exact expectation (with readout flips)
    n_unique: int


def trajectory_average(circuit: Circuit, nm: NoiseModel, table: np.ndarray, n_trajectories: int, seed) -> TrajectoryResult:
    """Average of ``n_trajectories`` seeded trajectories.

    Trajectories that draw the same error pattern produce the same state, so
    each distinct pattern is simulated once and weighted by its multiplicity.
    """
    if n_trajectories < 1:
        raise ValueError("need at least one trajectory")
    rng = np.random.default_rng(seed)
    sites = _noise_sites(circuit, nm)
    patterns = _draw_patterns(sites, rng.random((n_trajectories, len(sites))))
    tally = Counter(patterns)
    n = circuit.n_qubits
    avg = np.zeros(1 << n)
    energy_of: dict = {}
    program = _NoisyProgram(circuit, nm)
    for pat, mult in tally.items():
        probs = kernels.probabilities(program.run(pat))
        avg += mult * probs
        energy_of[pat] = float(apply_readout_flips(probs, n, nm.readout_flip) @ table)
    energies = np.array([energy_of[p] for p in patterns])
    return TrajectoryResult(avg / n_trajectories, energies, len(tally))
