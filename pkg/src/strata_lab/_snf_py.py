"""Pure-Python Smith form over Z/p^c (reference kernel and fallback)."""

from __future__ import annotations


def smith_mod(a, p, c, want_left=False, want_left_inv=False, want_right=True):
    """Diagonalise ``a`` (list of rows) over Z/p^c.

    Returns ``(vals, L, Linv, R)`` with ``L * a * R == diag(p**vals)`` mod p^c.
    ``vals`` has length min(rows, cols); a value of ``c`` marks a zero pivot.
    Matrices that were not requested are returned as ``None``.
    """
    M = p**c
    m = len(a)
    n = len(a[0]) if m else 0
    A = [[x % M for x in row] for row in a]
    L = [[int(i == j) for j in range(m)] for i in range(m)] if want_left else None
    Li = [[int(i == j) for j in range(m)] for i in range(m)] if want_left_inv else None
    R = [[int(i == j) for j in range(n)] for i in range(n)] if want_right else None
    pw = [1] * (c + 1)
    for i in range(1, c + 1):
        pw[i] = pw[i - 1] * p
    vals = []
    for t in range(min(m, n)):
        best_v, bi, bj = c, -1, -1
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    v = 0
                    while x % p == 0:
                        x //= p
                        v += 1
                    if v < best_v:
                        best_v, bi, bj = v, i, j
                        if v == 0:
                            break
            if best_v == 0:
                break
        if bi < 0:
            vals.extend([c] * (min(m, n) - t))
            break
        if bi != t:
            A[t], A[bi] = A[bi], A[t]
            if L is not None:
                L[t], L[bi] = L[bi], L[t]
            if Li is not None:
                for row in Li:
                    row[t], row[bi] = row[bi], row[t]
        if bj != t:
            for row in A:
                row[t], row[bj] = row[bj], row[t]
            if R is not None:
                for row in R:
                    row[t], row[bj] = row[bj], row[t]
        v = best_v
        pv = pw[v]
        unit = A[t][t] // pv
        uinv = pow(unit, -1, M)
        rt = A[t]
        for j in range(t, n):
            rt[j] = rt[j] * uinv % M
        if L is not None:
            lt = L[t]
            for j in range(m):
                lt[j] = lt[j] * uinv % M
        if Li is not None:
            for row in Li:
                row[t] = row[t] * unit % M
        for i in range(t + 1, m):
            ri = A[i]
            if ri[t]:
                f = ri[t] // pv
                for j in range(t, n):
                    if rt[j]:
                        ri[j] = (ri[j] - f * rt[j]) % M
                if L is not None:
                    li, lt = L[i], L[t]
                    for j in range(m):
                        if lt[j]:
                            li[j] = (li[j] - f * lt[j]) % M
                if Li is not None:
                    for row in Li:
                        if row[i]:
                            row[t] = (row[t] + f * row[i]) % M
        for j in range(t + 1, n):
            if rt[j]:
                f = rt[j] // pv
                rt[j] = 0
                if R is not None:
                    for row in R:
                        if row[t]:
                            row[j] = (row[j] - f * row[t]) % M
        vals.append(v)
    return vals, L, Li, R
