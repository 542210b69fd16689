"""QAOA circuit construction for Ising models.

Layer k applies exp(-i gamma_k H_C) with H_C = -sum J_ij Z_i Z_j, realized as
RZZ(-2 gamma_k J_ij) on every coupled pair, then the mixer exp(-i beta_k sum X)
as RX(2 beta_k) on every qubit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, Cycle, Gate, easy, hard
from .ising import IsingModel, ModelError


@dataclass(frozen=True)
class QaoaParams:
    angles: tuple[tuple[float, float], ...]

    def __post_init__(self):
        angles = tuple((float(g), float(b)) for g, b in self.angles)
        if not angles:
            raise ValueError("QAOA needs at least one layer")
        object.__setattr__(self, "angles", angles)

    @classmethod
    def single(cls, gamma: float, beta: float) -> "QaoaParams":
        return cls(((gamma, beta),))

    @property
    def p(self) -> int:
        return len(self.angles)


def _greedy(edges: Sequence[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    classes: list[list[tuple[int, int]]] = []
    used: list[set[int]] = []
    for e in edges:
        for cls, busy in zip(classes, used):
            if e[0] not in busy and e[1] not in busy:
                cls.append(e)
                busy.update(e)
                break
        else:
            classes.append([e])
            used.append(set(e))
    return classes


def _misra_gries(n: int, edges: Sequence[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Proper edge coloring with at most max_degree + 1 colors."""
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    delta = max((len(a) for a in adj.values()), default=0)
    palette = range(delta + 1)
    color: dict[frozenset, int] = {}

    def col(a, b):
        return color.get(frozenset((a, b)))

    def free(v):
        taken = {color[frozenset((v, w))] for w in adj[v] if frozenset((v, w)) in color}
        return [c for c in palette if c not in taken]

    for u, v in edges:
        fan = [v]
        while True:
            last_free = set(free(fan[-1]))
            nxt = next(
                (w for w in sorted(adj[u]) if w not in fan and col(u, w) is not None and col(u, w) in last_free),
                None,
            )
            if nxt is None:
                break
            fan.append(nxt)
        c = free(u)[0]
        d = free(fan[-1])[0]
        # invert the c/d path starting at u
        path_edges = []
        x, want = u, d
        while True:
            y = next((w for w in adj[x] if col(x, w) == want and frozenset((x, w)) not in path_edges), None)
            if y is None:
                break
            path_edges.append(frozenset((x, y)))
            x, want = y, (c if want == d else d)
        for e in path_edges:
            color[e] = c if color[e] == d else d
        # shortest fan prefix ending at a vertex where d is free
        w_idx = next(i for i, w in enumerate(fan) if d in free(w) and all(
            col(u, fan[k + 1]) in free(fan[k]) or col(u, fan[k + 1]) is None for k in range(i)
        ))
        for k in range(w_idx):
            color[frozenset((u, fan[k]))] = color.pop(frozenset((u, fan[k + 1])))
        color[frozenset((u, fan[w_idx]))] = d
    classes: dict[int, list[tuple[int, int]]] = {}
    for e in edges:
        classes.setdefault(color[frozenset(e)], []).append(e)
    return [classes[k] for k in sorted(classes)]


def edge_coloring(model: IsingModel) -> list[list[tuple[int, int]]]:
    """Partition coupled pairs into matchings (one hard cycle each).

    Greedy first-fit over the sorted edge list; this reproduces the two-cycle
    schedule for even rings. Falls back to Misra-Gries when greedy needs more
    than max_degree + 1 colors.
    """
    edges = model.edges
    if not edges:
        return []
    degree: dict[int, int] = {}
    for e in edges:
        for v in e:
            degree[v] = degree.get(v, 0) + 1
    classes = _greedy(edges)
    if len(classes) > max(degree.values()) + 1:
        classes = _misra_gries(model.n, edges)
    return classes


def build_qaoa_circuit(model: IsingModel, params: QaoaParams, measure: bool = True) -> Circuit:
    if model.has_fields:
        raise ModelError("QAOA builder supports zero-field models only")
    n = model.n
    coloring = edge_coloring(model)
    cycles: list[Cycle] = [easy(Gate("H", (q,)) for q in range(n))]
    for gamma, beta in params.angles:
        for cls in coloring:
            cycles.append(hard(Gate("RZZ", (i, j), -2.0 * gamma * model.couplings[(i, j)]) for i, j in cls))
        cycles.append(easy(Gate("RX", (q,), 2.0 * beta) for q in range(n)))
    if measure:
        cycles.append(Cycle(tuple(Gate("MEASURE", (q,)) for q in range(n)), "measurement"))
    return Circuit(n, tuple(cycles))


def decompose_rzz(circuit: Circuit) -> Circuit:
    """Replace each hard RZZ cycle with CNOT / RZ(target) / CNOT cycles.

    Hard cycles mixing RZZ with other gates are split so only the RZZ part
    is rewritten; other cycles pass through untouched.
    """
    out: list[Cycle] = []
    for c in circuit.cycles:
        rzz = [g for g in c.gates if g.kind == "RZZ"]
        if c.cls != "hard" or not rzz:
            out.append(c)
            continue
        rest = [g for g in c.gates if g.kind != "RZZ"]
        cnots = tuple(Gate("CNOT", g.qubits) for g in rzz)
        out.append(hard(cnots + tuple(rest)))
        out.append(easy(Gate("RZ", (g.qubits[1],), g.angle) for g in rzz))
        out.append(hard(cnots))
    return Circuit(circuit.n_qubits, tuple(out))
