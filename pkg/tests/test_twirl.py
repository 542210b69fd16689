import itertools

import numpy as np
import pytest

from framerand.circuit import Circuit, Cycle, Gate, easy, hard
from framerand.ising import frustrated_ring
from framerand.noise import NoiseModel
from framerand.pauli import CLIFFORDS, NAMED_CLIFFORDS, PAULI_INDEX
from framerand.qaoa import QaoaParams, build_qaoa_circuit, decompose_rzz
from framerand.statevector import simulate
from framerand.twirl import (
    LocalWord,
    TwirlConfig,
    TwirlError,
    bare_channel,
    fold_frame_into_easy_cycle,
    normalize,
    ptm,
    randomize,
    randomize_with_assignments,
    twirl_average_channel,
    unitary_ptm,
)
from framerand.unitary import circuit_unitary, equal_up_to_phase, gate_matrix, rx


def first_choice(rng, choices):
    return choices[0]


@pytest.fixture(scope="module")
def ring12():
    return build_qaoa_circuit(frustrated_ring(12), QaoaParams.single(0.375, 0.375))


def test_config_validation():
    with pytest.raises(TwirlError):
        TwirlConfig("magic", 3)
    with pytest.raises(TwirlError):
        TwirlConfig("pauli", 0)
    assert TwirlConfig("none", 20).n_compilations == 1


def test_mode_none_returns_normalized_input(ring12):
    out = randomize(ring12, TwirlConfig("none", 5, 1))
    assert out == [normalize(ring12)]
    # the two adjacent RZZ cycles get an empty easy cycle between them
    assert [cy.cls for cy in out[0].cycles] == ["easy", "hard", "easy", "hard", "easy", "measurement"]
    assert out[0].cycles[2].gates == ()


def test_normalize_inserts_easy_neighbours():
    c = Circuit(2, (hard([Gate("CNOT", (0, 1))]), hard([Gate("RZZ", (0, 1), 0.2)])))
    n = normalize(c)
    assert [cy.cls for cy in n.cycles] == ["easy", "hard", "easy", "hard", "easy"]
    assert equal_up_to_phase(circuit_unitary(c), circuit_unitary(n))


@pytest.mark.parametrize("mode", ["pauli", "clifford"])
@pytest.mark.parametrize("decompose", [False, True])
def test_twenty_compilations_equivalent(ring12, mode, decompose):
    c = decompose_rzz(ring12) if decompose else ring12
    ref = simulate(c)
    outs = randomize(c, TwirlConfig(mode, 20, 5))
    assert len(outs) == 20
    norm = normalize(c)
    for o in outs:
        assert simulate(o).fidelity(ref) >= 1 - 1e-10
        assert len(o.cycles) == len(norm.cycles)
        assert o.hard_structure() == norm.hard_structure()
        assert o.cycles[-1] == c.cycles[-1]  # measurement untouched
        for cy in o.cycles:
            if cy.cls == "easy":
                per_q = {}
                for g in cy.gates:
                    per_q[g.qubits[0]] = per_q.get(g.qubits[0], 0) + 1
                assert max(per_q.values(), default=0) <= 2


def test_randomization_actually_changes_circuits(ring12):
    outs = randomize(ring12, TwirlConfig("pauli", 5, 0))
    assert len({o.to_json() for o in outs}) == 5
    assert all(o != ring12 for o in outs)


@pytest.mark.parametrize("mode", ["pauli", "clifford"])
def test_identity_draw_reproduces_input(ring12, mode):
    outs = randomize(ring12, TwirlConfig(mode, 3, 0), sampler=first_choice)
    assert all(o == normalize(ring12) for o in outs)


def test_determinism(ring12):
    a = randomize(ring12, TwirlConfig("clifford", 4, 9))
    b = randomize(ring12, TwirlConfig("clifford", 4, 9))
    assert a == b
    assert a != randomize(ring12, TwirlConfig("clifford", 4, 10))


def test_compilation_independent_of_count(ring12):
    # compilation i depends only on (seed, i)
    a = randomize(ring12, TwirlConfig("pauli", 3, 2))
    b = randomize(ring12, TwirlConfig("pauli", 6, 2))
    assert a == b[:3]


def test_assignments_reproduce_cycle(ring12):
    for circ, frames in randomize_with_assignments(ring12, TwirlConfig("pauli", 3, 4)):
        norm = normalize(ring12)
        for f in frames.frames:
            bare = norm.cycles[f.cycle]
            k = norm.n_qubits
            assert set(f.entry) == bare.qubits
            # check locally on each gate: K . G' . E == G (up to phase)
            for g, s in zip(bare.gates, f.angle_signs):
                gp = g if g.angle is None else g.with_angle(s * g.angle)
                e = np.kron(CLIFFORDS[f.entry[g.qubits[1]]].matrix(), CLIFFORDS[f.entry[g.qubits[0]]].matrix())
                kk = np.kron(CLIFFORDS[f.exit[g.qubits[1]]].matrix(), CLIFFORDS[f.exit[g.qubits[0]]].matrix())
                assert equal_up_to_phase(kk @ gate_matrix(gp) @ e, gate_matrix(g))


def test_small_random_circuits_both_modes():
    rng = np.random.default_rng(1)
    for trial in range(30):
        n = int(rng.integers(2, 5))
        cycles = []
        for d in range(4):
            if d % 2:
                perm = rng.permutation(n)
                gates = []
                for a, b in zip(perm[::2], perm[1::2]):
                    gates.append(Gate("RZZ", (int(a), int(b)), float(rng.uniform(-3, 3))) if rng.random() < 0.5
                                 else Gate("CNOT", (int(a), int(b))))
                cycles.append(hard(gates))
            else:
                cycles.append(easy(Gate("RX", (q,), float(rng.uniform(-3, 3))) if rng.random() < 0.5
                                   else Gate(str(rng.choice(["H", "S", "Y"])), (q,)) for q in range(n)))
        c = Circuit(n, tuple(cycles))
        u = circuit_unitary(c)
        for mode in ("pauli", "clifford"):
            for o in randomize(c, TwirlConfig(mode, 3, trial)):
                assert equal_up_to_phase(circuit_unitary(o), u, atol=1e-10)


def test_fold_x_after_x_is_identity():
    c = easy([Gate("X", (0,))])
    out = fold_frame_into_easy_cycle(c, {0: PAULI_INDEX["X"]}, "after")
    assert out.gates == ()


def test_fold_z_before_rx():
    theta = 0.8
    c = easy([Gate("RX", (0,), theta)])
    out = fold_frame_into_easy_cycle(c, {0: PAULI_INDEX["Z"]}, "before")
    m = circuit_unitary(Circuit(1, (out,)))
    assert equal_up_to_phase(m, rx(theta) @ np.diag([1, -1]), atol=1e-12)


def test_fold_identity_unchanged():
    c = easy([Gate("H", (0,)), Gate("RX", (1,), 0.3)])
    assert fold_frame_into_easy_cycle(c, {0: 0, 1: 0}, "before") == c


def test_fold_into_empty_and_into_hard():
    out = fold_frame_into_easy_cycle(easy(), {2: NAMED_CLIFFORDS["H"]}, "after")
    assert out.gates == (Gate("H", (2,)),)
    with pytest.raises(TwirlError):
        fold_frame_into_easy_cycle(hard([Gate("CNOT", (0, 1))]), {0: 1}, "after")


def test_fold_all_cliffords_against_matrices():
    base = [Gate("H", (0,)), Gate("RY", (0,), 0.7)]
    word = LocalWord.from_gates(base)
    m0 = word.matrix()
    for c in range(24):
        d = CLIFFORDS[c].matrix()
        after = fold_frame_into_easy_cycle(easy(base), {0: c}, "after")
        before = fold_frame_into_easy_cycle(easy(base), {0: c}, "before")
        assert equal_up_to_phase(circuit_unitary(Circuit(1, (after,))), d @ m0, atol=1e-12)
        assert equal_up_to_phase(circuit_unitary(Circuit(1, (before,))), m0 @ d, atol=1e-12)
        assert len(after.gates) <= 2 and len(before.gates) <= 2


def _manual_twirl_ptm(cycle, nm, k):
    """Independent average: explicit frames and corrections from matrices."""
    from framerand.twirl import _noisy_cycle_channel
    paulis = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}
    u = circuit_unitary(Circuit(k, (cycle,)))
    total = 0
    for ops in itertools.product("IXYZ", repeat=k):
        e = np.eye(1)
        for o in reversed(ops):
            e = np.kron(e, paulis[o])
        corr = u @ e.conj().T @ u.conj().T  # K = G E^dag G^dag, a Pauli for Clifford G
        noisy = _noisy_cycle_channel(cycle, nm, k)
        total = total + ptm(lambda r: corr @ noisy(e @ r @ e.conj().T) @ corr.conj().T, k)
    return total / 4 ** k


def test_noiseless_cnot_twirl_is_bare():
    c = hard([Gate("CNOT", (0, 1))])
    t = twirl_average_channel(c, NoiseModel())
    assert np.allclose(t.ptm, unitary_ptm(circuit_unitary(Circuit(2, (c,)))), atol=1e-12)


def test_coherent_target_z_twirled_is_diagonal():
    c = hard([Gate("CNOT", (0, 1))])
    nm = NoiseModel(coherent_target_z=0.1)
    t = twirl_average_channel(c, nm)
    assert t.max_offdiagonal() <= 1e-10
    assert bare_channel(c, nm).max_offdiagonal() > 1e-2
    assert np.allclose(t.ptm, _manual_twirl_ptm(c, nm, 2), atol=1e-12)


def test_depolarizing_unchanged_by_twirl():
    c = hard([Gate("CNOT", (0, 1))])
    nm = NoiseModel.depolarizing(0.0, 0.07)
    assert np.allclose(twirl_average_channel(c, nm).ptm, bare_channel(c, nm).ptm, atol=1e-12)


def test_rzz_twirl_with_overrotation_is_diagonal():
    c = hard([Gate("RZZ", (0, 1), 0.6)])
    t = twirl_average_channel(c, NoiseModel(coherent_zz=0.1, coherent_target_z=0.05))
    assert t.max_offdiagonal() <= 1e-10


def test_twirl_channel_size_limit():
    with pytest.raises(TwirlError):
        twirl_average_channel(hard([Gate("CNOT", (0, 2))]), NoiseModel())
