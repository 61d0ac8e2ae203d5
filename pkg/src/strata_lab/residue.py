"""Finite fields F_q = F_p[X]/(h) with a primitive modulus, plus log/exp tables."""

from __future__ import annotations

from functools import lru_cache
from itertools import product


def _polymulmod(a, b, h, p):
    """Multiply residues a, b (coefficient lists of length f) modulo monic h (length f+1)."""
    f = len(h) - 1
    prod = [0] * (2 * f - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(2 * f - 2, f - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(f + 1):
                prod[k - f + i] -= c * h[i]
    return tuple(x % p for x in prod[:f])


class ResidueField:
    """F_q presented as F_p[X]/(h) where X generates the multiplicative group."""

    def __init__(self, p: int, f: int):
        self.p = p
        self.f = f
        self.q = p**f
        self.h = _primitive_modulus(p, f)
        exp = []
        x = tuple([1] + [0] * (f - 1))
        gen = tuple([0, 1] + [0] * (f - 2)) if f > 1 else ((-self.h[0]) % p,)
        for _ in range(self.q - 1):
            exp.append(x)
            x = self.mul(x, gen)
        self.exp_table = exp
        self.log_table = {v: k for k, v in enumerate(exp)}
        if len(self.log_table) != self.q - 1:
            raise ValueError("modulus is not primitive")

    @property
    def generator(self):
        return self.exp_table[1]

    def mul(self, a, b):
        if self.f == 1:
            return ((a[0] * b[0]) % self.p,)
        return _polymulmod(a, b, self.h, self.p)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def zero(self):
        return (0,) * self.f

    def one(self):
        return (1,) + (0,) * (self.f - 1)

    def log(self, a) -> int:
        a = tuple(x % self.p for x in a)
        if a not in self.log_table:
            raise ZeroDivisionError("zero has no discrete logarithm")
        return self.log_table[a]

    def exp(self, k: int):
        return self.exp_table[k % (self.q - 1)]

    def degree(self, a) -> int:
        """Degree over F_p of the subfield generated by ``a`` (1 for zero)."""
        if not any(x % self.p for x in a):
            return 1
        k = self.log(a)
        order = (self.q - 1) // _gcd(k, self.q - 1)
        d = 1
        while (self.p**d - 1) % order:
            d += 1
        return d


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _powmod(x, k, h, p):
    f = len(h) - 1
    result = tuple([1] + [0] * (f - 1))
    while k:
        if k & 1:
            result = _polymulmod(result, x, h, p)
        x = _polymulmod(x, x, h, p)
        k >>= 1
    return result


def _is_primitive_modulus(h, p, f):
    """X has multiplicative order q - 1 modulo h (which forces h irreducible)."""
    q = p**f
    if f == 1:
        g = (-h[0]) % p
        if g == 0:
            return False
        return all(pow(g, (q - 1) // l, p) != 1 for l in _prime_factors(q - 1))
    # cheap necessary conditions: the norm of X generates F_p^x, and h has no linear factor
    norm = (h[0] if f % 2 == 0 else -h[0]) % p
    if p > 2 and any(pow(norm, (p - 1) // l, p) == 1 for l in _prime_factors(p - 1)):
        return False
    if any(sum(c * pow(a, i, p) for i, c in enumerate(h)) % p == 0 for a in range(p)):
        return False
    one = tuple([1] + [0] * (f - 1))
    gen = tuple([0, 1] + [0] * (f - 2))
    if _powmod(gen, q - 1, h, p) != one:
        return False
    return all(_powmod(gen, (q - 1) // l, h, p) != one for l in _prime_factors(q - 1))


@lru_cache(maxsize=None)
def _primitive_modulus(p, f):
    """First monic primitive polynomial of degree f in lexicographic order of lower coefficients."""
    for low in product(range(p), repeat=f):
        h = tuple(low) + (1,)
        if h[0] == 0:
            continue
        if _is_primitive_modulus(h, p, f):
            return h
    raise ValueError("no primitive polynomial found")


@lru_cache(maxsize=None)
def residue_field(p: int, f: int) -> ResidueField:
    return ResidueField(p, f)
