"""Q_p-embeddings of a tower (and its subfields) into a splitting tower Omega."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import OmegaTooSmall
from .padic import Elem, Subfield, Tower, _embedding_power, get_tower


def omega_inertia(E: Tower) -> int:
    """Least multiple F of f with e | p^F - 1 and e | t (p^F - 1)/(q - 1)."""
    p, f, e, t = E.p, E.f, E.e, E.t
    F = f
    while True:
        Q = p**F
        if (Q - 1) % e == 0 and (t * ((Q - 1) // (E.q - 1))) % e == 0:
            return F
        F += f
        if F > 64:
            raise OmegaTooSmall("no splitting inertia degree found")


@lru_cache(maxsize=None)
def splitting_tower(key) -> Tower:
    E = get_tower(*key)
    return get_tower(E.p, omega_inertia(E), E.e, 0, E.P)


@dataclass(frozen=True)
class Embedding:
    """zeta -> zeta_Omega^D, pi -> zeta_Omega^u pi_Omega (exponents modulo Q - 1)."""

    E: Tower
    Omega: Tower
    j: int
    D: int
    u: int

    def monomial_image(self, k, v):
        """Exponents (zeta_Omega power, pi_Omega power) of the image of zeta^k pi^v."""
        Q1 = self.Omega.q - 1
        return ((k * self.D + self.u * v) % Q1, v)

    def __call__(self, x: Elem) -> Elem:
        Om = self.Omega
        if x.is_zero():
            return Om.zero(x.abs_prec)
        E = self.E
        total = Om.zero()
        for j in range(E.e):
            for a in range(E.f):
                c = x.c[j * E.f + a]
                if c:
                    k, v = self.monomial_image(a, j)
                    total = total + Om.monomial(k, v) * Om.elem([c] + [0] * (Om.n - 1), x.s, x.prec)
        return total

    def restriction_key(self, L: Subfield):
        """Images of the generators of L; equal keys mean equal restrictions to L."""
        return (self.monomial_image(L.dL, 0)[0], self.monomial_image(L.b, L.ep)[0])


def all_embeddings(E: Tower, Omega: Tower | None = None):
    Omega = Omega or splitting_tower(E.key)
    if Omega.e % E.e or Omega.f % E.f:
        raise OmegaTooSmall("Omega does not contain the tower's invariants")
    Q1 = Omega.q - 1
    d = Q1 // (E.q - 1)
    k0 = _embedding_power(E.p, E.f, Omega.f)
    # the uniformizer of Omega is pi_Omega with pi_Omega^eO = p; pi maps to a unit times pi_Omega^(eO/e)
    if Omega.e != E.e or Omega.t != 0:
        raise OmegaTooSmall("splitting tower must share e and be untwisted")
    out = []
    for j in range(E.f):
        D = d * k0 * E.p**j % Q1
        rhs = (-E.t * D) % Q1
        g = math.gcd(E.e, Q1)
        if rhs % g:
            raise OmegaTooSmall("twist is not an e-th power in Omega")
        step = Q1 // g
        u0 = _solve_linear(E.e, rhs, Q1)
        for k in range(g):
            out.append(Embedding(E, Omega, j, D, (u0 + k * step) % Q1))
    if len(out) != E.n:
        raise OmegaTooSmall("wrong number of embeddings")
    return out


def _solve_linear(a, b, m):
    g = math.gcd(a, m)
    a1, b1, m1 = a // g, b // g, m // g
    return b1 * pow(a1, -1, m1) % m1 if m1 > 1 else 0


def subfield_embeddings(L: Subfield, Omega: Tower | None = None):
    """One representative embedding per distinct restriction to L."""
    seen = {}
    for s in all_embeddings(L.E, Omega):
        seen.setdefault(s.restriction_key(L), s)
    return list(seen.values())


def embeddings(Eprime: Subfield, E: Subfield, Omega: Tower | None = None):
    """Embeddings of Eprime into Omega grouped by their restriction to E (dict key -> list)."""
    groups = {}
    for s in subfield_embeddings(Eprime, Omega):
        groups.setdefault(s.restriction_key(E), []).append(s)
    return groups


def conjugate_degree(x: Elem, L: Subfield | None = None) -> int:
    """[L[x]:L] as the number of distinct images of x under embeddings fixing L."""
    E = x.F
    L = L or E.prime
    embs = all_embeddings(E)
    key = embs[0].restriction_key(L)
    images = []
    for s in embs:
        if s.restriction_key(L) != key:
            continue
        y = s(x)
        if all(not (y - z).is_zero() for z in images):
            images.append(y)
    return len(images)
