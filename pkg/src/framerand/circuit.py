"""Cycle-structured circuit representation and its JSON form.

A circuit is an ordered list of cycles. Each cycle is one logical time step
and is classed as ``easy`` (single-qubit gates), ``hard`` (two-qubit
entanglers) or ``measurement`` (final Z-basis readout). Qubit 0 is the least
significant bit of every computational-basis index.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

ONE_QUBIT = frozenset({"H", "X", "Y", "Z", "S", "SDG", "RX", "RY", "RZ", "CLIFFORD"})
TWO_QUBIT = frozenset({"RZZ", "CNOT"})
PARAMETRIC = frozenset({"RX", "RY", "RZ", "RZZ"})
ROTATIONS = frozenset({"RX", "RY", "RZ"})
KINDS = ONE_QUBIT | TWO_QUBIT | {"MEASURE"}
CYCLE_CLASSES = ("easy", "hard", "measurement")


class CircuitError(ValueError):
    """Raised when a circuit, cycle or gate violates its invariants.

    ``path`` points at the offending field, e.g. ``cycles[2].gates[0].angle``.
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    clifford: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.angle is not None:
            # -0.0 and 0.0 describe the same gate; keep one spelling
            object.__setattr__(self, "angle", float(self.angle) + 0.0)
        self._validate()

    def _validate(self) -> None:
        if self.kind not in KINDS:
            raise CircuitError(f"unsupported gate kind {self.kind!r}", "kind")
        arity = 2 if self.kind in TWO_QUBIT else 1
        if len(self.qubits) != arity:
            raise CircuitError(f"{self.kind} takes {arity} qubit(s), got {len(self.qubits)}", "qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"repeated qubit in {self.qubits}", "qubits")
        if any(q < 0 for q in self.qubits):
            raise CircuitError("negative qubit index", "qubits")
        if (self.angle is not None) != (self.kind in PARAMETRIC):
            what = "requires" if self.kind in PARAMETRIC else "does not take"
            raise CircuitError(f"{self.kind} {what} an angle", "angle")
        if (self.clifford is not None) != (self.kind == "CLIFFORD"):
            raise CircuitError("clifford index is only valid (and required) on CLIFFORD gates", "clifford")
        if self.clifford is not None and not 0 <= self.clifford < 24:
            raise CircuitError(f"clifford index {self.clifford} outside [0, 24)", "clifford")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT

    def with_angle(self, angle: float) -> "Gate":
        return Gate(self.kind, self.qubits, angle)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind, "qubits": list(self.qubits)}
        if self.angle is not None:
            d["angle"] = self.angle
        if self.clifford is not None:
            d["clifford"] = self.clifford
        return d


@dataclass(frozen=True)
class Cycle:
    """One time step of disjoint gates.

    Easy cycles may hold a two-gate canonical word on a qubit (a Clifford
    followed by an axis rotation); this is what frame folding produces.
    """

    gates: tuple[Gate, ...]
    cls: str

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        self._validate()

    def _validate(self) -> None:
        if self.cls not in CYCLE_CLASSES:
            raise CircuitError(f"unknown cycle class {self.cls!r}", "class")
        seen: dict[int, list[Gate]] = {}
        for i, g in enumerate(self.gates):
            if self.cls == "hard" and not g.is_two_qubit:
                raise CircuitError(f"hard cycle holds single-qubit gate {g.kind}", f"gates[{i}].kind")
            if self.cls == "easy" and g.kind not in ONE_QUBIT:
                raise CircuitError(f"easy cycle holds {g.kind}", f"gates[{i}].kind")
            if self.cls == "measurement" and g.kind != "MEASURE":
                raise CircuitError(f"measurement cycle holds {g.kind}", f"gates[{i}].kind")
            for q in g.qubits:
                prior = seen.setdefault(q, [])
                if prior and not self._canonical_pair(prior, g):
                    raise CircuitError(f"qubit {q} appears in more than one gate", f"gates[{i}].qubits")
                prior.append(g)

    def _canonical_pair(self, prior: list[Gate], g: Gate) -> bool:
        return (
            self.cls == "easy"
            and len(prior) == 1
            and prior[0].kind not in ROTATIONS
            and g.kind in ROTATIONS
        )

    @property
    def qubits(self) -> frozenset[int]:
        return frozenset(q for g in self.gates for q in g.qubits)

    def max_qubit(self) -> int:
        return max((q for g in self.gates for q in g.qubits), default=-1)

    def to_dict(self) -> dict[str, Any]:
        return {"class": self.cls, "gates": [g.to_dict() for g in self.gates]}


def easy(gates: Iterable[Gate] = ()) -> Cycle:
    return Cycle(tuple(gates), "easy")


def hard(gates: Iterable[Gate]) -> Cycle:
    return Cycle(tuple(gates), "hard")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    cycles: tuple[Cycle, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        if self.n_qubits < 1:
            raise CircuitError("n_qubits must be positive", "n_qubits")
        for j, c in enumerate(self.cycles):
            if c.max_qubit() >= self.n_qubits:
                raise CircuitError(
                    f"qubit {c.max_qubit()} out of range for {self.n_qubits} qubits", f"cycles[{j}]"
                )
            if c.cls == "measurement" and j != len(self.cycles) - 1:
                raise CircuitError("measurement cycle must be last", f"cycles[{j}].class")

    @property
    def has_measurement(self) -> bool:
        return bool(self.cycles) and self.cycles[-1].cls == "measurement"

    def without_measurement(self) -> "Circuit":
        if self.has_measurement:
            return Circuit(self.n_qubits, self.cycles[:-1])
        return self

    def gates(self) -> Iterable[Gate]:
        for c in self.cycles:
            yield from c.gates

    def hard_structure(self) -> list[tuple[str, tuple[str, ...]]]:
        """Cycle classes with two-qubit gate kinds and qubits, ignoring angles."""
        return [
            (c.cls, tuple(f"{g.kind}{g.qubits}" for g in c.gates if g.is_two_qubit))
            for c in self.cycles
        ]

    def to_dict(self) -> dict[str, Any]:
        return {"n_qubits": self.n_qubits, "cycles": [c.to_dict() for c in self.cycles]}

    def to_json(self, indent: int | None = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: Any) -> "Circuit":
        return circuit_from_dict(doc)

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return circuit_from_dict(json.loads(text))


def _require(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise CircuitError(message, path)


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _gate_from_dict(doc: Any, path: str) -> Gate:
    _require(isinstance(doc, dict), "gate must be an object", path)
    unknown = set(doc) - {"kind", "qubits", "angle", "clifford"}
    _require(not unknown, f"unknown keys {sorted(unknown)}", path)
    _require(isinstance(doc.get("kind"), str), "missing or non-string kind", f"{path}.kind")
    qubits = doc.get("qubits")
    _require(isinstance(qubits, list) and all(_is_int(q) for q in qubits),
             "qubits must be a list of integers", f"{path}.qubits")
    angle = doc.get("angle")
    _require(angle is None or (isinstance(angle, (int, float)) and not isinstance(angle, bool)),
             "angle must be a number", f"{path}.angle")
    clifford = doc.get("clifford")
    _require(clifford is None or _is_int(clifford), "clifford must be an integer", f"{path}.clifford")
    try:
        return Gate(doc["kind"], tuple(qubits), None if angle is None else float(angle), clifford)
    except CircuitError as exc:
        raise CircuitError(str(exc).split(": ", 1)[-1], f"{path}.{exc.path}") from None


def circuit_from_dict(doc: Any) -> Circuit:
    _require(isinstance(doc, dict), "circuit document must be an object", "$")
    n = doc.get("n_qubits")
    _require(_is_int(n) and n >= 1, "n_qubits must be a positive integer", "n_qubits")
    cycles_doc = doc.get("cycles")
    _require(isinstance(cycles_doc, list), "cycles must be a list", "cycles")
    cycles = []
    for j, cdoc in enumerate(cycles_doc):
        path = f"cycles[{j}]"
        _require(isinstance(cdoc, dict), "cycle must be an object", path)
        _require(cdoc.get("class") in CYCLE_CLASSES, f"class must be one of {CYCLE_CLASSES}", f"{path}.class")
        _require(isinstance(cdoc.get("gates"), list), "gates must be a list", f"{path}.gates")
        gates = [_gate_from_dict(g, f"{path}.gates[{i}]") for i, g in enumerate(cdoc["gates"])]
        for i, g in enumerate(gates):
            if max(g.qubits) >= n:
                raise CircuitError(f"qubit {max(g.qubits)} >= n_qubits={n}", f"{path}.gates[{i}].qubits")
        try:
            cycles.append(Cycle(tuple(gates), cdoc["class"]))
        except CircuitError as exc:
            raise CircuitError(str(exc).split(": ", 1)[-1], f"{path}.{exc.path}") from None
    return Circuit(n, tuple(cycles))


def load_circuit(path) -> Circuit:
    with open(path) as fh:
        return circuit_from_dict(json.load(fh))


def save_circuit(circuit: Circuit, path) -> None:
    with open(path, "w") as fh:
        fh.write(circuit.to_json())
        fh.write("\n")
