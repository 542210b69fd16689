"""NumPy implementations of the statevector kernels.

All kernels update ``state`` (a contiguous complex128 vector of length 2**n)
in place. Qubit ``q`` is bit ``q`` of the amplitude index.
"""
import numpy as np


def _split(state, q):
    # (high bits, bit q, low bits) view
    return state.reshape(-1, 2, 1 << q)


def apply_1q(state, mat, q):
    v = _split(state, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = mat[0, 0] * a0 + mat[0, 1] * a1
    v[:, 1, :] = mat[1, 0] * a0 + mat[1, 1] * a1


def apply_cnot(state, control, target):
    idx = np.arange(state.shape[0])
    sel = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
    partner = sel | (1 << target)
    tmp = state[sel].copy()
    state[sel] = state[partner]
    state[partner] = tmp


def apply_rzz(state, a, b, theta):
    idx = np.arange(state.shape[0])
    parity = ((idx >> a) ^ (idx >> b)) & 1
    phase = np.exp(-0.5j * theta)
    state *= np.where(parity == 0, phase, np.conj(phase))


def apply_pauli(state, letter, q):
    v = _split(state, q)
    if letter == "X":
        v[:, [0, 1], :] = v[:, [1, 0], :]
    elif letter == "Y":
        a0 = v[:, 0, :].copy()
        v[:, 0, :] = -1j * v[:, 1, :]
        v[:, 1, :] = 1j * a0
    elif letter == "Z":
        v[:, 1, :] *= -1


def probabilities(state):
    return state.real ** 2 + state.imag ** 2
