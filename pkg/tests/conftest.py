import numpy as np
import pytest

from framerand import kernels
from framerand.circuit import Circuit, Cycle, Gate, easy, hard


@pytest.fixture(params=kernels.available())
def backend(request):
    prev = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


def random_circuit(rng: np.random.Generator, n: int, depth: int, measure: bool = False) -> Circuit:
    """Alternating easy/hard cycles over the full gate set."""
    one_q = ["H", "X", "Y", "Z", "S", "SDG", "RX", "RY", "RZ"]
    cycles = []
    for d in range(depth):
        if d % 2 == 0 or n < 2:
            gates = []
            for q in range(n):
                if rng.random() < 0.2:
                    continue
                kind = one_q[rng.integers(len(one_q))]
                angle = float(rng.uniform(-np.pi, np.pi)) if kind.startswith("R") else None
                gates.append(Gate(kind, (q,), angle))
            cycles.append(easy(gates))
        else:
            perm = rng.permutation(n)
            gates = []
            for a, b in zip(perm[::2], perm[1::2]):
                if rng.random() < 0.5:
                    gates.append(Gate("RZZ", (int(a), int(b)), float(rng.uniform(-np.pi, np.pi))))
                else:
                    gates.append(Gate("CNOT", (int(a), int(b))))
            cycles.append(hard(gates))
    if measure:
        cycles.append(Cycle(tuple(Gate("MEASURE", (q,)) for q in range(n)), "measurement"))
    return Circuit(n, tuple(cycles))


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
