# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels; same contracts as ``_fallback``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def apply_1q(double complex[::1] state, mat, Py_ssize_t q):
    cdef double complex m00 = mat[0, 0], m01 = mat[0, 1], m10 = mat[1, 0], m11 = mat[1, 1]
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t base, k, i0, i1
    cdef double complex a0, a1
    with nogil:
        base = 0
        while base < n:
            for k in range(stride):
                i0 = base + k
                i1 = i0 + stride
                a0 = state[i0]
                a1 = state[i1]
                state[i0] = m00 * a0 + m01 * a1
                state[i1] = m10 * a0 + m11 * a1
            base += 2 * stride


def apply_cnot(double complex[::1] state, Py_ssize_t control, Py_ssize_t target):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << control
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << target
    cdef Py_ssize_t i, j
    cdef double complex tmp
    with nogil:
        for i in range(n):
            if (i & cbit) and not (i & tbit):
                j = i | tbit
                tmp = state[i]
                state[i] = state[j]
                state[j] = tmp


def apply_rzz(double complex[::1] state, Py_ssize_t a, Py_ssize_t b, double theta):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t i
    cdef double c = cos(0.5 * theta), s = sin(0.5 * theta)
    cdef double complex even = c - 1j * s
    cdef double complex odd = c + 1j * s
    with nogil:
        for i in range(n):
            if ((i >> a) ^ (i >> b)) & 1:
                state[i] = state[i] * odd
            else:
                state[i] = state[i] * even


def apply_pauli(double complex[::1] state, str letter, Py_ssize_t q):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t base, k, i0, i1
    cdef double complex a0
    cdef int kind = 1 if letter == "X" else (2 if letter == "Y" else (3 if letter == "Z" else 0))
    if kind == 0:
        return
    with nogil:
        base = 0
        while base < n:
            for k in range(stride):
                i0 = base + k
                i1 = i0 + stride
                a0 = state[i0]
                if kind == 1:
                    state[i0] = state[i1]
                    state[i1] = a0
                elif kind == 2:
                    state[i0] = -1j * state[i1]
                    state[i1] = 1j * a0
                else:
                    state[i1] = -state[i1]
            base += 2 * stride


def probabilities(double complex[::1] state):
    cdef Py_ssize_t n = state.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = state[i].real * state[i].real + state[i].imag * state[i].imag
    return out
