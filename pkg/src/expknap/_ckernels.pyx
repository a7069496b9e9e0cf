# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled selection kernels; see ``_pykernels`` for the reference versions."""
import numpy as np

from libc.math cimport INFINITY

cdef enum:
    OFFLINE = 0
    DECISION = 1


def threshold_select(const double[::1] vals, Py_ssize_t t, Py_ssize_t[::1] out):
    cdef Py_ssize_t n = vals.shape[0], p, c = 0
    cdef double best = -INFINITY, v
    for p in range(t):
        if vals[p] > best:
            best = vals[p]
    for p in range(t, n):
        v = vals[p]
        if v > best:
            best = v
            out[c] = p
            c += 1
    return c


def classical_select(const double[::1] vals, Py_ssize_t t, Py_ssize_t[::1] out):
    cdef Py_ssize_t n = vals.shape[0], p
    cdef double best = -INFINITY
    for p in range(t):
        if vals[p] > best:
            best = vals[p]
    for p in range(t, n):
        if vals[p] > best:
            out[0] = p
            return 1
    return 0


cdef inline void _min_sift_down(double[::1] h, Py_ssize_t size) noexcept nogil:
    cdef Py_ssize_t i = 0, l, r, m
    cdef double tmp
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < size and h[l] < h[m]:
            m = l
        if r < size and h[r] < h[m]:
            m = r
        if m == i:
            return
        tmp = h[i]; h[i] = h[m]; h[m] = tmp
        i = m


cdef inline void _min_push(double[::1] h, Py_ssize_t size, double v) noexcept nogil:
    cdef Py_ssize_t i = size, parent
    h[i] = v
    while i > 0:
        parent = (i - 1) // 2
        if h[parent] <= h[i]:
            break
        h[parent], h[i] = h[i], h[parent]
        i = parent


def ksec_select(const double[::1] vals, Py_ssize_t k, Py_ssize_t t, Py_ssize_t[::1] out):
    cdef Py_ssize_t n = vals.shape[0], p, c = 0, size = 0
    cdef double v
    cdef double[::1] h = np.empty(max(k, 1), dtype=np.float64)
    for p in range(t):
        v = vals[p]
        if size < k:
            _min_push(h, size, v)
            size += 1
        elif v > h[0]:
            h[0] = v
            _min_sift_down(h, size)
    for p in range(t, n):
        v = vals[p]
        if size < k:
            _min_push(h, size, v)
            size += 1
        elif v > h[0]:
            h[0] = v
            _min_sift_down(h, size)
        else:
            continue
        out[c] = p
        c += 1
    return c


cdef inline bint _worse(double[::1] hb, long long[::1] hid, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    # (b, id) lexicographic greater-than
    return hb[a] > hb[b] or (hb[a] == hb[b] and hid[a] > hid[b])


cdef inline void _swap(double[::1] hb, double[::1] hw, long long[::1] hid,
                       unsigned char[::1] ho, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    hb[a], hb[b] = hb[b], hb[a]
    hw[a], hw[b] = hw[b], hw[a]
    hid[a], hid[b] = hid[b], hid[a]
    ho[a], ho[b] = ho[b], ho[a]


cdef void _max_sift_down(double[::1] hb, double[::1] hw, long long[::1] hid,
                         unsigned char[::1] ho, Py_ssize_t i, Py_ssize_t size) noexcept nogil:
    cdef Py_ssize_t l, r, m
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < size and _worse(hb, hid, l, m):
            m = l
        if r < size and _worse(hb, hid, r, m):
            m = r
        if m == i:
            return
        _swap(hb, hw, hid, ho, i, m)
        i = m


def aug_on_select(const double[::1] b, const double[::1] w, const long long[::1] ids,
                  Py_ssize_t t, const double[::1] ref_b, const double[::1] ref_w,
                  const long long[::1] ref_id, Py_ssize_t[::1] out):
    cdef Py_ssize_t n = b.shape[0], k = ref_b.shape[0], p, j, c = 0
    if k == 0:
        return 0
    cdef double[::1] hb = np.empty(k, dtype=np.float64)
    cdef double[::1] hw = np.empty(k, dtype=np.float64)
    cdef long long[::1] hid = np.empty(k, dtype=np.int64)
    cdef unsigned char[::1] ho = np.zeros(k, dtype=np.uint8)
    for j in range(k):
        hb[j] = ref_b[j]
        hw[j] = ref_w[j]
        hid[j] = ref_id[j]
    j = k // 2 - 1
    while j >= 0:
        _max_sift_down(hb, hw, hid, ho, j, k)
        j -= 1
    with nogil:
        for p in range(t, n):
            if b[p] < hb[0]:
                if ho[0] == OFFLINE and w[p] <= hw[0]:
                    out[c] = p
                    c += 1
                hb[0] = b[p]
                hw[0] = w[p]
                hid[0] = ids[p]
                ho[0] = DECISION
                _max_sift_down(hb, hw, hid, ho, 0, k)
    return c
