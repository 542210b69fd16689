import json

import numpy as np
import pytest

from framerand.circuit import Circuit, CircuitError, Cycle, Gate, circuit_from_dict, easy, hard, load_circuit, save_circuit
from framerand.ising import frustrated_ring
from framerand.qaoa import QaoaParams, build_qaoa_circuit
from framerand.unitary import circuit_unitary, embed, gate_matrix, rzz

from conftest import random_circuit


def test_gate_arity_and_angle_rules():
    with pytest.raises(CircuitError):
        Gate("H", (0,), 0.3)
    with pytest.raises(CircuitError):
        Gate("RX", (0,))
    with pytest.raises(CircuitError):
        Gate("CNOT", (0,))
    with pytest.raises(CircuitError):
        Gate("RZZ", (1, 1), 0.2)
    with pytest.raises(CircuitError):
        Gate("TOFFOLI", (0, 1))


def test_negative_zero_angle_is_normalized():
    assert Gate("RZ", (0,), -0.0) == Gate("RZ", (0,), 0.0)
    assert str(Gate("RZ", (0,), -0.0).angle) == "0.0"


def test_cycle_rejects_duplicate_qubit():
    with pytest.raises(CircuitError):
        easy([Gate("H", (0,)), Gate("X", (0,))])
    with pytest.raises(CircuitError):
        hard([Gate("CNOT", (0, 1)), Gate("RZZ", (1, 2), 0.1)])


def test_cycle_class_contents():
    with pytest.raises(CircuitError):
        hard([Gate("H", (0,))])
    with pytest.raises(CircuitError):
        easy([Gate("CNOT", (0, 1))])
    with pytest.raises(CircuitError):
        Cycle((Gate("H", (0,)),), "measurement")


def test_canonical_easy_word_allowed_once():
    easy([Gate("H", (0,)), Gate("RX", (0,), 0.4)])
    with pytest.raises(CircuitError):
        easy([Gate("RX", (0,), 0.4), Gate("H", (0,))])
    with pytest.raises(CircuitError):
        easy([Gate("H", (0,)), Gate("RX", (0,), 0.4), Gate("RZ", (0,), 0.1)])


def test_measurement_must_be_last():
    m = Cycle((Gate("MEASURE", (0,)),), "measurement")
    with pytest.raises(CircuitError):
        Circuit(1, (m, easy([Gate("H", (0,))])))
    with pytest.raises(CircuitError):
        Circuit(1, (m, m))


def test_qubit_bound_checked():
    with pytest.raises(CircuitError):
        Circuit(2, (easy([Gate("H", (2,))]),))


def test_json_round_trip_qaoa():
    c = build_qaoa_circuit(frustrated_ring(12), QaoaParams.single(0.1 + 1e-13, 1 / 3))
    assert Circuit.from_json(c.to_json()) == c


def test_json_round_trip_file(tmp_path):
    c = random_circuit(np.random.default_rng(3), 4, 6, measure=True)
    save_circuit(c, tmp_path / "c.json")
    assert load_circuit(tmp_path / "c.json") == c


def test_angles_keep_full_precision():
    a = 0.12345678901234567
    c = Circuit(1, (easy([Gate("RZ", (0,), a)]),))
    doc = json.loads(c.to_json())
    assert doc["cycles"][0]["gates"][0]["angle"] == a


@pytest.mark.parametrize("doc, path", [
    ({"n_qubits": 2, "cycles": [{"class": "easy", "gates": [{"kind": "H", "qubits": [0], "angle": 1.0}]}]},
     "cycles[0].gates[0].angle"),
    ({"n_qubits": 2, "cycles": [{"class": "easy", "gates": [{"kind": "H", "qubits": [0]}, {"kind": "X", "qubits": [0]}]}]},
     "cycles[0].gates[1].qubits"),
    ({"n_qubits": 2, "cycles": [{"class": "odd", "gates": []}]}, "cycles[0].class"),
    ({"n_qubits": 2, "cycles": [{"class": "hard", "gates": [{"kind": "CNOT", "qubits": [0, 5]}]}]},
     "cycles[0].gates[0].qubits"),
    ({"n_qubits": 0, "cycles": []}, "n_qubits"),
    ({"n_qubits": 1, "cycles": [{"class": "easy", "gates": [{"kind": "RX", "qubits": [0], "angle": "x"}]}]},
     "cycles[0].gates[0].angle"),
])
def test_schema_errors_name_the_field(doc, path):
    with pytest.raises(CircuitError) as info:
        circuit_from_dict(doc)
    assert info.value.path == path


def test_unitary_empty_and_hadamard():
    assert np.allclose(circuit_unitary(Circuit(2, ())), np.eye(4))
    h = circuit_unitary(Circuit(1, (easy([Gate("H", (0,))]),)))
    assert np.allclose(h, np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def test_unitary_rejects_measurement_and_size():
    m = Circuit(1, (Cycle((Gate("MEASURE", (0,)),), "measurement"),))
    with pytest.raises(ValueError):
        circuit_unitary(m)
    with pytest.raises(ValueError):
        circuit_unitary(Circuit(9, ()))


def test_two_qubit_matrix_ordering():
    # CNOT(0, 1) maps |q1 q0> = |01> (index 1) to |11> (index 3)
    u = circuit_unitary(Circuit(2, (hard([Gate("CNOT", (0, 1))]),)))
    assert u[3, 1] == 1 and u[1, 3] == 1
    u = circuit_unitary(Circuit(2, (hard([Gate("CNOT", (1, 0))]),)))
    assert u[3, 2] == 1


def test_embed_matches_kron():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2))
    two = np.kron(b, a)  # a on the low qubit
    assert np.allclose(embed(two, (0, 2), 3), np.kron(b, np.kron(np.eye(2), a)))
    assert np.allclose(embed(a, (1,), 2), np.kron(a, np.eye(2)))


def test_native_rzz_equals_decomposition():
    c1 = Circuit(2, (hard([Gate("RZZ", (0, 1), 0.7)]),))
    c2 = Circuit(2, (hard([Gate("CNOT", (0, 1))]), easy([Gate("RZ", (1,), 0.7)]), hard([Gate("CNOT", (0, 1))])))
    assert np.allclose(circuit_unitary(c1), circuit_unitary(c2), atol=1e-12)


def test_unitary_is_product_of_cycles():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        c = random_circuit(rng, n, 3)
        u = np.eye(2 ** n)
        for cyc in c.cycles:
            u = circuit_unitary(Circuit(n, (cyc,))) @ u
        assert np.allclose(circuit_unitary(c), u, atol=1e-12)
        assert np.allclose(u.conj().T @ u, np.eye(2 ** n), atol=1e-12)


def test_rzz_matrix_definition():
    t = 0.37
    zz = np.diag([1, -1, -1, 1])
    assert np.allclose(rzz(t), np.diag(np.exp(-1j * t / 2 * np.diag(zz))))
    assert np.allclose(gate_matrix(Gate("RZZ", (0, 1), t)), rzz(t))
