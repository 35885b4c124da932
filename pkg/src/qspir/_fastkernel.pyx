# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-q linear algebra kernel.

Same semantics and pivoting order as `_purekernel` (first nonzero pivot,
top to bottom), operating on C long long buffers. q is a prime well below
2^15 in practice, so products fit long long with room to spare.
"""

from libc.stdlib cimport malloc, free

KERNEL_NAME = "fast"


cdef long long _modinv(long long a, long long q):
    # extended Euclid; a != 0 mod q guaranteed by callers
    cdef long long t = 0, newt = 1, r = q, newr = a % q, tmp, quot
    while newr != 0:
        quot = r / newr
        tmp = t - quot * newt
        t = newt
        newt = tmp
        tmp = r - quot * newr
        r = newr
        newr = tmp
    if t < 0:
        t += q
    return t


def k_mul(a, int ar, int ac, b, int br, int bc, int q):
    cdef long long *am = <long long *> malloc(ar * ac * sizeof(long long))
    cdef long long *bm = <long long *> malloc(br * bc * sizeof(long long))
    cdef long long *om = <long long *> malloc(ar * bc * sizeof(long long))
    cdef int i, j, k
    cdef long long av, acc
    try:
        for i in range(ar * ac):
            am[i] = a[i]
        for i in range(br * bc):
            bm[i] = b[i]
        for i in range(ar * bc):
            om[i] = 0
        for i in range(ar):
            for k in range(ac):
                av = am[i * ac + k]
                if av == 0:
                    continue
                for j in range(bc):
                    om[i * bc + j] = (om[i * bc + j] + av * bm[k * bc + j]) % q
        return [om[i] for i in range(ar * bc)]
    finally:
        free(am)
        free(bm)
        free(om)


def k_rank(a, int r, int c, int q):
    cdef long long *m = <long long *> malloc(r * c * sizeof(long long))
    cdef int rank = 0, col, row, piv, j
    cdef long long inv, factor, tmp
    try:
        for j in range(r * c):
            m[j] = a[j]
        for col in range(c):
            piv = -1
            for row in range(rank, r):
                if m[row * c + col] % q != 0:
                    piv = row
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(c):
                    tmp = m[piv * c + j]
                    m[piv * c + j] = m[rank * c + j]
                    m[rank * c + j] = tmp
            inv = _modinv(m[rank * c + col], q)
            for j in range(col, c):
                m[rank * c + j] = m[rank * c + j] * inv % q
            for row in range(r):
                if row == rank:
                    continue
                factor = m[row * c + col]
                if factor:
                    for j in range(col, c):
                        m[row * c + j] = (m[row * c + j] - factor * m[rank * c + j]) % q
                        if m[row * c + j] < 0:
                            m[row * c + j] += q
            rank += 1
            if rank == r:
                break
        return rank
    finally:
        free(m)


cdef int _gauss_jordan(long long *m, int n, int w, int q):
    # in-place reduction of an n x w augmented matrix; returns 0 if singular
    cdef int col, row, piv, j
    cdef long long inv, factor, tmp
    for col in range(n):
        piv = -1
        for row in range(col, n):
            if m[row * w + col] % q != 0:
                piv = row
                break
        if piv < 0:
            return 0
        if piv != col:
            for j in range(w):
                tmp = m[piv * w + j]
                m[piv * w + j] = m[col * w + j]
                m[col * w + j] = tmp
        inv = _modinv(m[col * w + col], q)
        for j in range(w):
            m[col * w + j] = m[col * w + j] * inv % q
        for row in range(n):
            if row == col:
                continue
            factor = m[row * w + col]
            if factor:
                for j in range(w):
                    m[row * w + j] = (m[row * w + j] - factor * m[col * w + j]) % q
                    if m[row * w + j] < 0:
                        m[row * w + j] += q
    return 1


def k_inv(a, int n, int q):
    cdef int w = 2 * n
    cdef long long *m = <long long *> malloc(n * w * sizeof(long long))
    cdef int i, j, ok
    try:
        for i in range(n):
            for j in range(n):
                m[i * w + j] = a[i * n + j]
            for j in range(n, w):
                m[i * w + j] = 1 if j - n == i else 0
        ok = _gauss_jordan(m, n, w, q)
        if not ok:
            return None
        return [m[i * w + n + j] for i in range(n) for j in range(n)]
    finally:
        free(m)


def k_solve(a, int n, b, int q):
    cdef int w = n + 1
    cdef long long *m = <long long *> malloc(n * w * sizeof(long long))
    cdef int i, j, ok
    try:
        for i in range(n):
            for j in range(n):
                m[i * w + j] = a[i * n + j]
            m[i * w + n] = b[i] % q
        ok = _gauss_jordan(m, n, w, q)
        if not ok:
            return None
        return [m[i * w + n] for i in range(n)]
    finally:
        free(m)
