# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled ball evaluation kernel.

Same contract and word order as _ballcore_py.ball_evaluate; the matrix
products run as typed C loops.  Bookkeeping arrays use dtype np.longlong so
the memoryview format matches `long long` on every platform.
"""

from libc.math cimport fabs, isfinite, log

import numpy as np


def ball_evaluate(letter_mats, radius, renorm_threshold=1e150):
    lm = np.ascontiguousarray(letter_mats, dtype=np.complex128)
    if lm.ndim != 3 or lm.shape[1] != lm.shape[2]:
        raise ValueError(f"letter matrix stack has bad shape {lm.shape}")
    cdef Py_ssize_t num_letters = lm.shape[0]
    cdef Py_ssize_t d = lm.shape[1]
    if num_letters < 2 or num_letters % 2 != 0:
        raise ValueError("letter stack must hold generator/inverse pairs")
    cdef long long rad = radius
    if rad < 0:
        raise ValueError("radius must be >= 0")
    cdef double thr = renorm_threshold

    cdef Py_ssize_t total = 1, layer = num_letters, k
    for k in range(rad):
        total += layer
        layer *= num_letters - 1

    lengths = np.zeros(total, dtype=np.longlong)
    last_letters = np.full(total, -1, dtype=np.longlong)
    parents = np.full(total, -1, dtype=np.longlong)
    mats = np.empty((total, d, d), dtype=np.complex128)
    logscale = np.zeros(total, dtype=np.float64)
    flags = np.zeros(total, dtype=np.uint8)

    cdef long long[::1] lengths_v = lengths
    cdef long long[::1] last_v = last_letters
    cdef long long[::1] par_v = parents
    cdef double complex[:, :, ::1] mats_v = mats
    cdef double complex[:, :, ::1] lm_v = lm
    cdef double[::1] log_v = logscale
    cdef unsigned char[::1] flag_v = flags

    mats[0] = np.eye(d)

    cdef Py_ssize_t front_lo = 0, front_hi = 1, pos = 1
    cdef Py_ssize_t p, letter, a, b, c
    cdef long long last, depth
    cdef double complex acc
    cdef double peak, re, im

    for depth in range(1, rad + 1):
        for p in range(front_lo, front_hi):
            last = last_v[p]
            for letter in range(num_letters):
                if last >= 0 and letter == (last ^ 1):
                    continue
                peak = 0.0
                for a in range(d):
                    for b in range(d):
                        acc = 0
                        for c in range(d):
                            acc = acc + mats_v[p, a, c] * lm_v[letter, c, b]
                        mats_v[pos, a, b] = acc
                        re = fabs(acc.real)
                        im = fabs(acc.imag)
                        if re > peak:
                            peak = re
                        if im > peak:
                            peak = im
                par_v[pos] = p
                last_v[pos] = letter
                lengths_v[pos] = depth
                log_v[pos] = log_v[p]
                flag_v[pos] = flag_v[p]
                if not isfinite(peak) or peak == 0.0:
                    flag_v[pos] = 1
                elif peak > thr:
                    for a in range(d):
                        for b in range(d):
                            mats_v[pos, a, b] = mats_v[pos, a, b] / peak
                    log_v[pos] = log_v[pos] + log(peak)
                pos += 1
        front_lo = front_hi
        front_hi = pos

    return lengths, last_letters, parents, mats, logscale, flags
