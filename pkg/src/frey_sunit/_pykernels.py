"""Pure-Python kernels; same contracts as the compiled ``_ckernels`` module."""
from itertools import product

import numpy as np


def sunit_box_sieve(powtab, torstab, moduli, member, bound, first_lo=0, first_hi=None):
    """Exponent vectors (t, e_1..e_r) whose lambda passes every modular test.

    powtab[j, i, e + bound] = g_i^e mod q_j, torstab[j, t] = zeta^t mod q_j and
    member[j, x] flags the residues of the S-unit group image mod q_j.  A vector
    survives when 1 - lambda is a nonzero member modulo every q_j.  Only vectors
    with e_1 + bound in [first_lo, first_hi) are scanned.
    """
    powtab = np.asarray(powtab, dtype=np.int64)
    torstab = np.asarray(torstab, dtype=np.int64)
    m, r, width = powtab.shape
    w = torstab.shape[1]
    if first_hi is None:
        first_hi = width
    qs = [int(q) for q in moduli]
    pt = powtab.tolist()
    tt = torstab.tolist()
    mem = [bytes(member[j, : qs[j]]) for j in range(m)]
    ranges = [range(width)] * r
    if r:
        ranges[0] = range(first_lo, first_hi)
    out = []
    for t in range(w):
        for idx in product(*ranges):
            for j in range(m):
                q = qs[j]
                lam = tt[j][t]
                row = pt[j]
                for i in range(r):
                    lam = lam * row[i][idx[i]] % q
                mu = (1 - lam) % q
                if mu == 0 or not mem[j][mu]:
                    break
            else:
                out.append((t,) + tuple(k - bound for k in idx))
    return np.array(out, dtype=np.int64).reshape(len(out), r + 1)


def squarefree_block(lo, hi, prime_squares):
    """uint8 flags for lo <= d < hi: 1 iff no listed prime square divides d."""
    n = hi - lo
    buf = bytearray(b"\x01") * n
    for q2 in prime_squares:
        q2 = int(q2)
        if q2 >= hi:
            break  # sorted input; no positive multiple below hi
        start = (-lo) % q2
        if start < n:
            buf[start::q2] = bytes(len(range(start, n, q2)))
    return np.frombuffer(bytes(buf), dtype=np.uint8).copy()


def count_squarefree_residues(X, prime_squares, block):
    """Counts of squarefree d in [2, X] per residue class mod 8."""
    counts = [0] * 8
    lo = 2
    while lo <= X:
        hi = min(X + 1, lo + block)
        flags = squarefree_block(lo, hi, prime_squares).tobytes()
        for r in range(8):
            counts[(lo + r) % 8] += flags[r::8].count(1)
        lo = hi
    return np.array(counts, dtype=np.int64)
