# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: S-unit exponent-box sieve and segmented squarefree sieve.

Contracts are identical to ``_pykernels``; see the docstrings there.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t
from libc.string cimport memset

cnp.import_array()


def sunit_box_sieve(powtab, torstab, moduli, member, long bound,
                    long first_lo=0, first_hi=None):
    cdef int64_t[:, :, ::1] pt = np.ascontiguousarray(powtab, dtype=np.int64)
    cdef int64_t[:, ::1] tt = np.ascontiguousarray(torstab, dtype=np.int64)
    cdef int64_t[::1] qs = np.ascontiguousarray(moduli, dtype=np.int64)
    cdef uint8_t[:, ::1] mem = np.ascontiguousarray(member, dtype=np.uint8)
    cdef Py_ssize_t m = pt.shape[0], r = pt.shape[1], width = pt.shape[2]
    cdef Py_ssize_t w = tt.shape[1]
    cdef long hi = width if first_hi is None else first_hi
    cdef Py_ssize_t t, i, j, k
    cdef int64_t lam, mu, q
    cdef bint ok
    cdef int64_t[::1] idx = np.zeros(max(r, 1), dtype=np.int64)
    out = []
    if r > 0 and first_lo >= hi:
        return np.zeros((0, r + 1), dtype=np.int64)
    for t in range(w):
        for i in range(r):
            idx[i] = 0
        if r > 0:
            idx[0] = first_lo
        while True:
            ok = True
            for j in range(m):
                q = qs[j]
                lam = tt[j, t]
                for i in range(r):
                    lam = (lam * pt[j, i, idx[i]]) % q
                mu = (1 - lam) % q
                if mu < 0:
                    mu += q
                if mu == 0 or mem[j, mu] == 0:
                    ok = False
                    break
            if ok:
                row = [t]
                for i in range(r):
                    row.append(idx[i] - bound)
                out.append(row)
            # odometer, last coordinate fastest; coordinate 0 limited to [first_lo, hi)
            k = r - 1
            while k >= 0:
                idx[k] += 1
                if (k == 0 and idx[k] < hi) or (k > 0 and idx[k] < width):
                    break
                idx[k] = 0
                k -= 1
            if k < 0:
                break
    return np.array(out, dtype=np.int64).reshape(len(out), r + 1)


cdef void _mark_block(uint8_t* buf, long lo, long n, int64_t[::1] sq) nogil:
    cdef Py_ssize_t i, nsq = sq.shape[0]
    cdef long q2, start, x
    memset(buf, 1, n)
    for i in range(nsq):
        q2 = sq[i]
        if q2 >= lo + n:
            break
        start = (q2 - lo % q2) % q2
        x = start
        while x < n:
            buf[x] = 0
            x += q2


def squarefree_block(long lo, long hi, prime_squares):
    cdef int64_t[::1] sq = np.ascontiguousarray(prime_squares, dtype=np.int64)
    cdef long n = hi - lo
    arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] view = arr
    if n > 0:
        _mark_block(&view[0], lo, n, sq)
    return arr


def count_squarefree_residues(long X, prime_squares, long block):
    cdef int64_t[::1] sq = np.ascontiguousarray(prime_squares, dtype=np.int64)
    counts = np.zeros(8, dtype=np.int64)
    cdef int64_t[::1] c = counts
    buf = np.empty(block, dtype=np.uint8)
    cdef uint8_t[::1] b = buf
    cdef long lo = 2, hi, n, i
    with nogil:
        while lo <= X:
            hi = lo + block
            if hi > X + 1:
                hi = X + 1
            n = hi - lo
            _mark_block(&b[0], lo, n, sq)
            for i in range(n):
                if b[i]:
                    c[(lo + i) & 7] += 1
            lo = hi
    return counts
