# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t

cnp.import_array()


cdef inline int lowbit(long mask) nogil:
    cdef int i = 0
    while not (mask & 1):
        mask >>= 1
        i += 1
    return i


def subset_folds(table, long unit, int n):
    cdef const int64_t[:, ::1] t = np.ascontiguousarray(table, dtype=np.int64)
    cdef long size = 1 << n
    out_arr = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef long mask
    out[0] = unit
    with nogil:
        for mask in range(1, size):
            out[mask] = t[out[mask & (mask - 1)], lowbit(mask)]
    return out_arr


def subset_and(masks, int n):
    cdef const uint64_t[::1] m = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef long size = 1 << n
    out_arr = np.empty(size, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef long mask
    out[0] = (<uint64_t>1 << n) - 1
    with nogil:
        for mask in range(1, size):
            out[mask] = out[mask & (mask - 1)] & m[lowbit(mask)]
    return out_arr


def app_table(leq, imp, meet, long top):
    cdef const uint8_t[:, ::1] le = np.ascontiguousarray(leq, dtype=np.uint8)
    cdef const int64_t[:, ::1] im = np.ascontiguousarray(imp, dtype=np.int64)
    cdef const int64_t[:, ::1] mt = np.ascontiguousarray(meet, dtype=np.int64)
    cdef int n = im.shape[0]
    out_arr = np.empty((n, n), dtype=np.int64)
    cdef int64_t[:, ::1] out = out_arr
    cdef int a, b, c
    cdef long acc
    with nogil:
        for a in range(n):
            for b in range(n):
                acc = top
                for c in range(n):
                    if le[a, im[b, c]]:
                        acc = mt[acc, c]
                out[a, b] = acc
    return out_arr


def encoded_meet_table(imp, meet, long top):
    cdef const int64_t[:, ::1] im = np.ascontiguousarray(imp, dtype=np.int64)
    cdef const int64_t[:, ::1] mt = np.ascontiguousarray(meet, dtype=np.int64)
    cdef int n = im.shape[0]
    out_arr = np.empty((n, n), dtype=np.int64)
    cdef int64_t[:, ::1] out = out_arr
    cdef int a, b, c
    cdef long acc
    with nogil:
        for a in range(n):
            for b in range(n):
                acc = top
                for c in range(n):
                    acc = mt[acc, im[im[a, im[b, c]], c]]
                out[a, b] = acc
    return out_arr


def lam_reduce(imp, meet, long top, body):
    cdef const int64_t[:, ::1] im = np.ascontiguousarray(imp, dtype=np.int64)
    cdef const int64_t[:, ::1] mt = np.ascontiguousarray(meet, dtype=np.int64)
    cdef const int64_t[:, ::1] bd = np.ascontiguousarray(body, dtype=np.int64)
    cdef long rows = bd.shape[0], cols = bd.shape[1]
    out_arr = np.full(cols, top, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef long a, j
    with nogil:
        for a in range(rows):
            for j in range(cols):
                out[j] = mt[out[j], im[a, bd[a, j]]]
    return out_arr


def map_witnesses(weights, meet, long top):
    cdef const int64_t[:, ::1] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef const int64_t[:, ::1] mt = np.ascontiguousarray(meet, dtype=np.int64)
    cdef long m = w.shape[0], k = w.shape[1]
    cdef long total = 1, i, j, x, size
    for x in range(m):
        total *= k
    out_arr = np.empty(total, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    out[0] = top
    size = 1
    # expand in place from the back so prefixes are read before overwritten
    with nogil:
        for x in range(m):
            i = size - 1
            while i >= 0:
                for j in range(k - 1, -1, -1):
                    out[i * k + j] = mt[out[i], w[x, j]]
                i -= 1
            size *= k
    return out_arr


def meet_distribution_violations(imp, meet, submeet, int n):
    cdef const int64_t[:, ::1] im = np.ascontiguousarray(imp, dtype=np.int64)
    cdef const int64_t[:, ::1] mt = np.ascontiguousarray(meet, dtype=np.int64)
    cdef const int64_t[::1] sm = np.ascontiguousarray(submeet, dtype=np.int64)
    cdef long size = 1 << n
    folded_arr = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] folded = folded_arr
    cdef long mask
    cdef int a
    out = []
    for a in range(n):
        folded[0] = sm[0]
        for mask in range(size):
            if mask:
                folded[mask] = mt[folded[mask & (mask - 1)], im[a, lowbit(mask)]]
            if im[a, sm[mask]] != folded[mask]:
                out.append((a, mask))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def joins_violations(imp, meet, subjoin, int n, long top):
    cdef const int64_t[:, ::1] im = np.ascontiguousarray(imp, dtype=np.int64)
    cdef const int64_t[:, ::1] mt = np.ascontiguousarray(meet, dtype=np.int64)
    cdef const int64_t[::1] sj = np.ascontiguousarray(subjoin, dtype=np.int64)
    cdef long size = 1 << n
    folded_arr = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] folded = folded_arr
    cdef long mask
    cdef int b
    out = []
    for b in range(n):
        folded[0] = top
        for mask in range(size):
            if mask:
                folded[mask] = mt[folded[mask & (mask - 1)], im[lowbit(mask), b]]
            if im[sj[mask], b] != folded[mask]:
                out.append((mask, b))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def exists_all(imp, meet, long top, int n):
    cdef const int64_t[:, ::1] im = np.ascontiguousarray(imp, dtype=np.int64)
    cdef const int64_t[:, ::1] mt = np.ascontiguousarray(meet, dtype=np.int64)
    cdef long size = 1 << n
    out_arr = np.full(size, top, dtype=np.int64)
    g_arr = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t[::1] g = g_arr
    cdef long mask
    cdef int c
    with nogil:
        for c in range(n):
            g[0] = top
            for mask in range(1, size):
                g[mask] = mt[g[mask & (mask - 1)], im[lowbit(mask), c]]
            for mask in range(size):
                out[mask] = mt[out[mask], im[g[mask], c]]
    return out_arr
