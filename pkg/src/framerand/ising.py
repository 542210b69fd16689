"""Classical Ising models: H = -sum_<ij> J_ij s_i s_j - sum_i h_i s_i.

Bit b of a configuration maps to spin ``1 - 2b`` (bit 0 is spin up), matching
the Z eigenvalue of the corresponding qubit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_ENUMERATION_NODES = 24


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class IsingModel:
    n: int
    couplings: Mapping[tuple[int, int], float]
    fields: tuple[float, ...]

    def __init__(self, n: int, couplings: Mapping[tuple[int, int], float] | Iterable, fields: Sequence[float] | None = None):
        items = couplings.items() if isinstance(couplings, Mapping) else ((tuple(c[:2]), c[2]) for c in couplings)
        clean: dict[tuple[int, int], float] = {}
        for (i, j), v in items:
            i, j = int(i), int(j)
            if i == j:
                raise ModelError(f"self-coupling on node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ModelError(f"coupling ({i}, {j}) outside 0..{n - 1}")
            key = (min(i, j), max(i, j))
            if key in clean:
                raise ModelError(f"duplicate coupling for pair {key}")
            clean[key] = float(v)
        fields = tuple(float(h) for h in (fields if fields is not None else [0.0] * n))
        if len(fields) != n:
            raise ModelError(f"expected {n} fields, got {len(fields)}")
        if n < 1:
            raise ModelError("model needs at least one node")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "couplings", dict(sorted(clean.items())))
        object.__setattr__(self, "fields", fields)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(self.couplings)

    @property
    def has_fields(self) -> bool:
        return any(h != 0.0 for h in self.fields)

    def energy_bound(self) -> float:
        return sum(abs(v) for v in self.couplings.values()) + sum(abs(h) for h in self.fields)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "couplings": [[i, j, v] for (i, j), v in self.couplings.items()],
            "fields": list(self.fields),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, doc: dict) -> "IsingModel":
        try:
            return cls(int(doc["n"]), [tuple(c) for c in doc["couplings"]], doc.get("fields"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"malformed model document: {exc}") from None


def load_model(path) -> IsingModel:
    with open(path) as fh:
        return IsingModel.from_dict(json.load(fh))


def frustrated_ring(n: int, flipped_edge: int | None = None) -> IsingModel:
    """Ring of ``+1`` nearest-neighbour bonds with one bond set to ``-1``.

    Edge ``k`` joins nodes ``k`` and ``(k + 1) % n``; the default flips the
    closing edge ``(n - 1, 0)``.
    """
    if n < 3:
        raise ModelError(f"a ring needs at least 3 nodes, got {n}")
    if flipped_edge is None:
        flipped_edge = n - 1
    if not 0 <= flipped_edge < n:
        raise ModelError(f"flipped_edge must be in [0, {n}), got {flipped_edge}")
    couplings = {(k, (k + 1) % n): (-1.0 if k == flipped_edge else 1.0) for k in range(n)}
    return IsingModel(n, couplings)


def spins(bits: Sequence[int] | np.ndarray) -> np.ndarray:
    return 1 - 2 * np.asarray(bits, dtype=np.int64)


def energy(model: IsingModel, bits: Sequence[int] | np.ndarray | str) -> float:
    """Energy of one configuration; strings are read with qubit 0 first."""
    if isinstance(bits, str):
        bits = [int(b) for b in bits]
    s = spins(bits)
    if s.shape != (model.n,):
        raise ModelError(f"configuration of length {s.size} for a {model.n}-node model")
    e = 0.0
    for (i, j), v in model.couplings.items():
        e -= v * s[i] * s[j]
    for i, h in enumerate(model.fields):
        e -= h * s[i]
    return float(e)


def energy_table(model: IsingModel) -> np.ndarray:
    """Energy of every basis index z (bit q of z is node q), length 2**n."""
    n = model.n
    z = np.arange(1 << n, dtype=np.int64)
    s = [1 - 2 * ((z >> q) & 1) for q in range(n)]
    table = np.zeros(1 << n)
    for (i, j), v in model.couplings.items():
        table -= v * (s[i] * s[j])
    for i, h in enumerate(model.fields):
        if h:
            table -= h * s[i]
    return table


def index_to_bits(z: int, n: int) -> tuple[int, ...]:
    return tuple((z >> q) & 1 for q in range(n))


def ground_states(model: IsingModel) -> tuple[float, set[tuple[int, ...]]]:
    """Exhaustive minimum and every configuration attaining it."""
    if model.n > MAX_ENUMERATION_NODES:
        raise ModelError(f"{model.n} nodes is too many to enumerate (limit {MAX_ENUMERATION_NODES})")
    table = energy_table(model)
    e_min = float(table.min())
    hits = np.flatnonzero(np.isclose(table, e_min, rtol=0, atol=1e-9))
    return e_min, {index_to_bits(int(z), model.n) for z in hits}
