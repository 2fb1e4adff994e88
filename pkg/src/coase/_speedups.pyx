# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; mirrors ``coase._purekernels`` exactly."""

from libc.stdlib cimport malloc, free


cdef int* _int_array(seq, Py_ssize_t size) except NULL:
    cdef int* buf = <int*> malloc(size * sizeof(int))
    cdef Py_ssize_t k
    if buf == NULL:
        raise MemoryError()
    for k in range(size):
        buf[k] = seq[k]
    return buf


def bilateral_trades(ranks, int n, int m, holdings):
    cdef int size = 1 << m
    cdef int* rk = _int_array(ranks, n * size)
    cdef int* h = _int_array(holdings, n)
    cdef int i, j, hi, hj, bi, bj, cur_i, cur_j, r1, r2, keep_i, r1_j, r1_i
    out = []
    try:
        for i in range(n):
            hi = h[i]
            bi = i * size
            cur_i = rk[bi + hi]
            for j in range(i + 1, n):
                hj = h[j]
                bj = j * size
                cur_j = rk[bj + hj]
                r1 = 0
                while True:
                    keep_i = hi & ~r1
                    r1_j = rk[bj + r1]
                    r1_i = rk[bi + r1]
                    r2 = 0
                    while True:
                        if (rk[bi + r2] > r1_i
                                and r1_j > rk[bj + r2]
                                and rk[bi + (keep_i | r2)] > cur_i
                                and rk[bj + ((hj & ~r2) | r1)] > cur_j):
                            out.append((i, j, r1, r2))
                        r2 = (r2 - hj) & hj
                        if r2 == 0:
                            break
                    r1 = (r1 - hi) & hi
                    if r1 == 0:
                        break
    finally:
        free(rk)
        free(h)
    return out


def improving_allocations(ranks, int n, int m, holdings, long limit=0):
    cdef int size = 1 << m
    cdef int* rk = _int_array(ranks, n * size)
    cdef int* cur = <int*> malloc(n * sizeof(int))
    cdef int* owners = <int*> malloc(m * sizeof(int))
    cdef int* bundles = <int*> malloc(n * sizeof(int))
    cdef long long code, total = 1
    cdef long found = 0
    cdef int i, k, o, r, c, bit
    cdef bint better, worse
    out = []
    if cur == NULL or owners == NULL or bundles == NULL:
        free(rk); free(cur); free(owners); free(bundles)
        raise MemoryError()
    try:
        for i in range(n):
            cur[i] = rk[i * size + <int> holdings[i]]
            bundles[i] = 0
        for k in range(m):
            owners[k] = 0
            total *= n
        bundles[0] = size - 1
        code = 0
        while code < total:
            better = False
            worse = False
            for i in range(n):
                r = rk[i * size + bundles[i]]
                c = cur[i]
                if r < c:
                    worse = True
                    break
                if r > c:
                    better = True
            if better and not worse:
                out.append(code)
                found += 1
                if limit > 0 and found >= limit:
                    break
            k = m - 1
            while k >= 0:
                bit = 1 << k
                o = owners[k]
                bundles[o] ^= bit
                if o + 1 < n:
                    owners[k] = o + 1
                    bundles[o + 1] |= bit
                    break
                owners[k] = 0
                bundles[0] |= bit
                k -= 1
            code += 1
    finally:
        free(rk); free(cur); free(owners); free(bundles)
    return out


def potential(ranks, int n, int m, holdings):
    cdef int size = 1 << m
    cdef long total = 0
    cdef int i
    for i in range(n):
        total += <int> ranks[i * size + <int> holdings[i]]
    return total
