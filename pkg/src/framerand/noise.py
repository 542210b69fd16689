"""Synthetic noise model: stochastic Pauli channels, coherent ZZ, readout flips."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .circuit import Gate

ONE_Q_PAULIS = ("X", "Y", "Z")
TWO_Q_PAULIS = tuple("".join(p) for p in itertools.product("IXYZ", repeat=2) if p != ("I", "I"))


class NoiseError(ValueError):
    pass


def _check_channel(table: Mapping[str, float], width: int, name: str) -> dict[str, float]:
    out = {}
    for label, prob in table.items():
        if len(label) != width or any(ch not in "IXYZ" for ch in label) or set(label) == {"I"}:
            raise NoiseError(f"{name}: bad Pauli label {label!r}")
        if prob < 0:
            raise NoiseError(f"{name}: negative probability for {label}")
        if prob:
            out[label] = float(prob)
    if sum(out.values()) > 1 + 1e-12:
        raise NoiseError(f"{name}: probabilities sum to {sum(out.values())} > 1")
    return out


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate error model.

    After every single-qubit gate a Pauli is drawn from ``one_qubit``; after
    every two-qubit gate from ``two_qubit`` (labels in gate-qubit order).
    ``coherent_zz`` is added to every RZZ angle; in CNOT-RZ-CNOT form it is
    applied as one extra RZZ rotation after the closing CNOT of each pair,
    so both forms see the same error. ``coherent_target_z`` applies RZ to the
    second operand after every two-qubit gate. ``readout_flip`` is the
    per-qubit bit-flip probability at measurement.
    """

    one_qubit: Mapping[str, float] = field(default_factory=dict)
    two_qubit: Mapping[str, float] = field(default_factory=dict)
    coherent_zz: float = 0.0
    coherent_target_z: float = 0.0
    readout_flip: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "one_qubit", _check_channel(self.one_qubit, 1, "one_qubit"))
        object.__setattr__(self, "two_qubit", _check_channel(self.two_qubit, 2, "two_qubit"))
        if not 0 <= self.readout_flip <= 1:
            raise NoiseError(f"readout_flip {self.readout_flip} outside [0, 1]")

    @classmethod
    def depolarizing(cls, one_qubit: float = 0.0, two_qubit: float = 0.0, **kw) -> "NoiseModel":
        if not (0 <= one_qubit <= 1 and 0 <= two_qubit <= 1):
            raise NoiseError("depolarizing probabilities must lie in [0, 1]")
        return cls(
            {p: one_qubit / 3 for p in ONE_Q_PAULIS},
            {p: two_qubit / 15 for p in TWO_Q_PAULIS},
            **kw,
        )

    @property
    def is_noiseless(self) -> bool:
        return not (self.one_qubit or self.two_qubit or self.coherent_zz
                    or self.coherent_target_z or self.readout_flip)

    def channel(self, g: Gate) -> Mapping[str, float]:
        return self.two_qubit if g.is_two_qubit else self.one_qubit

    def to_dict(self) -> dict:
        return {
            "readout_flip": self.readout_flip,
            "coherent_zz": self.coherent_zz,
            "coherent_target_z": self.coherent_target_z,
            "channels": {"one_qubit": dict(self.one_qubit), "two_qubit": dict(self.two_qubit)},
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "NoiseModel":
        known = {"one_qubit_depol", "two_qubit_depol", "readout_flip", "coherent_zz",
                 "coherent_target_z", "channels"}
        unknown = set(doc) - known
        if unknown:
            raise NoiseError(f"unknown noise keys {sorted(unknown)}")
        p1 = doc.get("one_qubit_depol") or 0.0
        p2 = doc.get("two_qubit_depol") or 0.0
        one = {p: p1 / 3 for p in ONE_Q_PAULIS} if p1 else {}
        two = {p: p2 / 15 for p in TWO_Q_PAULIS} if p2 else {}
        explicit = doc.get("channels") or {}
        for label, prob in explicit.get("one_qubit", {}).items():
            one[label] = one.get(label, 0.0) + prob
        for label, prob in explicit.get("two_qubit", {}).items():
            two[label] = two.get(label, 0.0) + prob
        return cls(one, two,
                   coherent_zz=float(doc.get("coherent_zz", 0.0)),
                   coherent_target_z=float(doc.get("coherent_target_z", 0.0)),
                   readout_flip=float(doc.get("readout_flip", 0.0)))


def closing_cnots(gates) -> set[int]:
    """Indices of CNOTs that close a CNOT pair on the same ordered qubits."""
    open_pairs: set[tuple[int, ...]] = set()
    out = set()
    for i, g in enumerate(gates):
        if g.kind != "CNOT":
            continue
        if g.qubits in open_pairs:
            open_pairs.discard(g.qubits)
            out.add(i)
        else:
            open_pairs.add(g.qubits)
    return out


PRESETS = {
    "falcon-like": {
        "one_qubit_depol": 3.0e-4,
        "two_qubit_depol": 1.0e-2,
        "readout_flip": 1.5e-2,
        "coherent_zz": 0.10,
    },
    "noiseless": {},
}


def load_noise(spec: str) -> NoiseModel:
    """Preset name or path to a noise JSON document."""
    if spec in PRESETS:
        return NoiseModel.from_dict(PRESETS[spec])
    with open(spec) as fh:
        return NoiseModel.from_dict(json.load(fh))


def apply_readout_flips(probs: np.ndarray, n: int, flip: float) -> np.ndarray:
    """Exact bit-flip channel on a computational-basis distribution."""
    if not flip:
        return probs
    p = probs.copy()
    for q in range(n):
        v = p.reshape(-1, 2, 1 << q)
        v[:] = (1 - flip) * v + flip * v[:, ::-1, :]
    return p
