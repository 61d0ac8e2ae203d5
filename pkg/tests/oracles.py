"""Independent reference computations used by the tests.

Nothing here imports the package: these are naive, slow re-derivations over Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def vp(x, p):
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def hensel_teichmuller(a, p, k):
    """The (p-1)-th root of unity congruent to a, modulo p^k, by x <- x^p."""
    x = a % p**k
    for _ in range(k + 2):
        x = pow(x, p, p**k)
    return x


def bareiss_det(a):
    """Exact integer determinant (fraction-free elimination)."""
    m = [list(map(int, r)) for r in a]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def multiplicative_order(x, mul, one):
    k, y = 1, x
    while y != one:
        y = mul(y, x)
        k += 1
    return k


# ---------------------------------------------------------------- Q_p(sqrt p), N = 2

def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def mat_sub(a, b):
    return [[a[i][j] - b[i][j] for j in range(2)] for i in range(2)]


def ramified_quadratic(p):
    """Left multiplication by pi on the basis (1, pi) of Q_p(pi), pi^2 = p."""
    pi = [[Fraction(0), Fraction(p)], [Fraction(1), Fraction(0)]]
    one = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    return pi, one


def in_chain(v, j, p):
    """v in pi^j o_E, o_E = Z_p + Z_p pi, coordinates (v1, v2) on (1, pi)."""
    a, b = divmod(j, 2)
    need1, need2 = a + b, a
    v1, v2 = vp(v[0], p), vp(v[1], p)
    return (v1 is None or v1 >= need1) and (v2 is None or v2 >= need2)


def in_radical_power(x, k, p):
    """x in P^k  <=>  x L_j inside L_(j+k) for j = 0, 1."""
    for j in range(2):
        a, b = divmod(j, 2)
        basis = [(Fraction(p) ** (a + b), Fraction(0)), (Fraction(0), Fraction(p) ** a)]
        for v in basis:
            img = (x[0][0] * v[0] + x[0][1] * v[1], x[1][0] * v[0] + x[1][1] * v[1])
            if not in_chain(img, j + k, p):
                return False
    return True


def brute_k0(beta, n, p):
    """max{k : some x in A with [beta, x] in P^k lies outside B + P}, by enumeration.

    Here A = [[a, p b], [c, d]] and (B + P)/P is the diagonal scalars, so x is outside
    B + P iff a != d mod p.  Returns None when no k in [-n, 0] qualifies.
    """
    t = max(1, -(-n // 2))
    M = p**t
    best = None
    for k in range(-n, 1):
        found = False
        for a, b, c, d in product(range(M), repeat=4):
            if (a - d) % p == 0:
                continue
            x = [[Fraction(a), Fraction(p * b)], [Fraction(c), Fraction(d)]]
            comm = mat_sub(mat_mul(beta, x), mat_mul(x, beta))
            if in_radical_power(comm, k, p):
                found = True
                break
        if found:
            best = k
    return best
