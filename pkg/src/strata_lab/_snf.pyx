# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Smith form over Z/p^c for moduli below 2^62."""

from cpython.array cimport array, clone

cdef extern from *:
    """
    typedef __int128 strata_i128;
    static inline long long strata_mulmod(long long a, long long b, long long m) {
        strata_i128 r = ((strata_i128)a * (strata_i128)b) % m;
        if (r < 0) r += m;
        return (long long)r;
    }
    """
    long long strata_mulmod(long long a, long long b, long long m) nogil

MAX_MODULUS = 2**62

cdef array _template = array('q', [])


cdef inline long long _submod(long long a, long long b, long long m) nogil:
    cdef long long r = a - b
    if r < 0:
        r += m
    return r


cdef long long _invmod(long long a, long long m):
    cdef long long r0 = m, r1 = a % m, s0 = 0, s1 = 1, q, tmp
    while r1:
        q = r0 // r1
        tmp = r0 - q * r1; r0 = r1; r1 = tmp
        tmp = s0 - q * s1; s0 = s1; s1 = tmp
    if r0 != 1:
        raise ZeroDivisionError("not a unit")
    if s0 < 0:
        s0 += m
    return s0


cdef array _identity(int k):
    cdef array out = clone(_template, k * k, zero=True)
    cdef long long[:] v = out
    cdef int i
    for i in range(k):
        v[i * k + i] = 1
    return out


cdef list _to_rows(array buf, int r, int c):
    cdef long long[:] v = buf
    return [[v[i * c + j] for j in range(c)] for i in range(r)]


def smith_mod(a, long long p, int c, bint want_left=False, bint want_left_inv=False,
              bint want_right=True):
    """Same contract as the pure-Python kernel; requires p**c < 2**62."""
    cdef object Mobj = (<object>p) ** c
    if Mobj >= MAX_MODULUS:
        raise OverflowError("modulus too large for the compiled kernel")
    cdef long long M = Mobj
    cdef int m = len(a)
    cdef int n = len(a[0]) if m else 0
    cdef array Abuf = clone(_template, m * n, zero=True)
    cdef long long[:] A = Abuf
    cdef int i, j, t, bi, bj, v, best_v, k
    cdef long long x, pv, unit, uinv, f, tmp
    for i in range(m):
        row = a[i]
        for j in range(n):
            A[i * n + j] = row[j] % Mobj
    cdef array Lbuf = _identity(m) if want_left else clone(_template, 1, zero=True)
    cdef array Libuf = _identity(m) if want_left_inv else clone(_template, 1, zero=True)
    cdef array Rbuf = _identity(n) if want_right else clone(_template, 1, zero=True)
    cdef long long[:] L = Lbuf
    cdef long long[:] Li = Libuf
    cdef long long[:] R = Rbuf
    cdef list pw = [1] * (c + 1)
    for i in range(1, c + 1):
        pw[i] = pw[i - 1] * p
    vals = []
    cdef int kmin = m if m < n else n
    for t in range(kmin):
        best_v = c
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                x = A[i * n + j]
                if x:
                    v = 0
                    while x % p == 0:
                        x //= p
                        v += 1
                    if v < best_v:
                        best_v = v
                        bi = i
                        bj = j
                        if v == 0:
                            break
            if best_v == 0:
                break
        if bi < 0:
            vals.extend([c] * (kmin - t))
            break
        if bi != t:
            for j in range(n):
                tmp = A[t * n + j]; A[t * n + j] = A[bi * n + j]; A[bi * n + j] = tmp
            if want_left:
                for j in range(m):
                    tmp = L[t * m + j]; L[t * m + j] = L[bi * m + j]; L[bi * m + j] = tmp
            if want_left_inv:
                for k in range(m):
                    tmp = Li[k * m + t]; Li[k * m + t] = Li[k * m + bi]; Li[k * m + bi] = tmp
        if bj != t:
            for i in range(m):
                tmp = A[i * n + t]; A[i * n + t] = A[i * n + bj]; A[i * n + bj] = tmp
            if want_right:
                for k in range(n):
                    tmp = R[k * n + t]; R[k * n + t] = R[k * n + bj]; R[k * n + bj] = tmp
        v = best_v
        pv = pw[v]
        unit = A[t * n + t] // pv
        uinv = _invmod(unit, M)
        for j in range(t, n):
            A[t * n + j] = strata_mulmod(A[t * n + j], uinv, M)
        if want_left:
            for j in range(m):
                L[t * m + j] = strata_mulmod(L[t * m + j], uinv, M)
        if want_left_inv:
            for k in range(m):
                Li[k * m + t] = strata_mulmod(Li[k * m + t], unit, M)
        for i in range(t + 1, m):
            if A[i * n + t]:
                f = A[i * n + t] // pv
                for j in range(t, n):
                    if A[t * n + j]:
                        A[i * n + j] = _submod(A[i * n + j], strata_mulmod(f, A[t * n + j], M), M)
                if want_left:
                    for j in range(m):
                        if L[t * m + j]:
                            L[i * m + j] = _submod(L[i * m + j], strata_mulmod(f, L[t * m + j], M), M)
                if want_left_inv:
                    for k in range(m):
                        if Li[k * m + i]:
                            Li[k * m + t] = (Li[k * m + t] + strata_mulmod(f, Li[k * m + i], M)) % M
        for j in range(t + 1, n):
            if A[t * n + j]:
                f = A[t * n + j] // pv
                A[t * n + j] = 0
                if want_right:
                    for k in range(n):
                        if R[k * n + t]:
                            R[k * n + j] = _submod(R[k * n + j], strata_mulmod(f, R[k * n + t], M), M)
        vals.append(v)
    return (
        vals,
        _to_rows(Lbuf, m, m) if want_left else None,
        _to_rows(Libuf, m, m) if want_left_inv else None,
        _to_rows(Rbuf, n, n) if want_right else None,
    )
