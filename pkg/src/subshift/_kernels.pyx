# cython: boundscheck=False, wraparound=False, cdivision=True
import numpy as np
cimport numpy as cnp

cnp.import_array()


def monoid_step(const int[:, ::1] rel, const int[::1] flat, const int[::1] offsets):
    cdef Py_ssize_t n = rel.shape[0], width = rel.shape[1]
    cdef Py_ssize_t a, q, j
    out_arr = np.empty((n, width), dtype=np.int32)
    cdef int[:, ::1] out = out_arr
    cdef int s
    for a in range(n):
        for q in range(width):
            s = <int>q
            for j in range(offsets[a], offsets[a + 1]):
                s = rel[flat[j], s]
            out[a, q] = s
    return out_arr


def run_word(const int[:, ::1] delta, const int[::1] word, int state):
    cdef Py_ssize_t j
    for j in range(word.shape[0]):
        state = delta[state, word[j]]
    return state
