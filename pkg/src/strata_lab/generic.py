"""Standard representatives, the monomial group C_E, and conjugate-difference genericity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .embed import Embedding, conjugate_degree, embeddings
from .errors import NotMinimal, NotSubfield, ZeroElement
from .padic import INF, Elem, Subfield, Tower
from .strata import field_over, is_minimal


@dataclass(frozen=True)
class CEMonomial:
    """zeta^zeta_exp * pi^pi_exp, with zeta_exp taken modulo q - 1."""

    zeta_exp: int
    pi_exp: int

    def to_elem(self, E: Tower) -> Elem:
        return E.monomial(self.zeta_exp, self.pi_exp)


def sr(c: Elem) -> CEMonomial:
    """The monomial s with nu(s - c) > nu(c)."""
    if c.is_zero():
        raise ZeroElement("zero has no standard representative")
    k, v = c.leading()
    return CEMonomial(k % (c.F.q - 1), v)


def sr_elem(c: Elem) -> Elem:
    return sr(c).to_elem(c.F)


def in_CE(x: Elem, L: Subfield | None = None) -> bool:
    """x is a monomial of C_L (L defaults to the whole tower)."""
    if x.is_zero():
        return False
    m = sr(x)
    if not (x - m.to_elem(x.F)).is_zero():
        return False
    return L is None or L.contains_monomial(m.zeta_exp, m.pi_exp)


def ce_inclusion_check(L: Subfield, Lprime: Subfield) -> bool:
    """C_L inside C_L' for L inside L', tested on the generators of C_L."""
    if not L.is_subfield_of(Lprime):
        raise NotSubfield("first field is not contained in the second")
    E = L.E
    for g in (L.varpi, L.eta, E.monomial(L.dL * (L.q - 2), 0)):
        if not in_CE(g, Lprime):
            return False
        if not Lprime.contains(g):
            return False
    return True


def galois_valuation_property(s: Elem, s1: Embedding, s2: Embedding):
    """For a monomial s with s1(s) != s2(s): nu(s1 s - s2 s) = nu(s1 s) = nu(s).

    Returns None when the two images coincide (nothing to check).
    """
    a, b = s1(s), s2(s)
    diff = a - b
    if diff.is_zero():
        return None
    return diff.val() == a.val() == s.val()


def minimal_via_sr(beta: Elem, L: Subfield | None = None) -> bool:
    """L[sr(beta)] = L[beta], with the left degree counted by conjugates."""
    L = L or beta.F.prime
    if beta.is_zero():
        return False
    deg_sr = conjugate_degree(sr_elem(beta), L) * L.degree
    return deg_sr == field_over(L, [beta]).degree


@dataclass
class GenericityReport:
    depth: Fraction
    pairs: list = field(default_factory=list)   # (key1, key2, ord via exponents, ord via subtraction)
    ge1: bool = True
    ge2: str = "type A: no torsion primes for the dual root datum; satisfied by citation"

    def to_dict(self):
        return {
            "depth": str(self.depth),
            "pairs": [[str(k1), str(k2), str(o1), str(o2)] for k1, k2, o1, o2 in self.pairs],
            "ge1": self.ge1,
            "ge2": self.ge2,
        }


def check_GE1(c: Elem, Eprime: Subfield, E: Subfield, require_minimal: bool = True) -> GenericityReport:
    """Pairwise conjugate differences of sr(c) over embeddings of E' agreeing on E."""
    if require_minimal:
        if not field_over(E, [c]) == Eprime:
            raise NotMinimal("E' is not E[c]")
        if not is_minimal(c, E):
            raise NotMinimal("element is not minimal over the smaller field")
    s = sr(c)
    se = s.to_elem(c.F)
    e = c.F.e
    target = Fraction(se.val(), e)
    rep = GenericityReport(depth=-Fraction(c.val(), e))
    for key, group in sorted(embeddings(Eprime, E).items()):
        for s1, s2 in combinations(group, 2):
            z1 = s1.monomial_image(s.zeta_exp, s.pi_exp)
            z2 = s2.monomial_image(s.zeta_exp, s.pi_exp)
            # exponent level: images zeta^z1 pi^v and zeta^z2 pi^v differ by a unit iff z1 != z2
            ord_exp = Fraction(s.pi_exp, e) if z1[0] != z2[0] else INF
            d = s1(se) - s2(se)
            ord_sub = Fraction(d.val(), s1.Omega.e) if not d.is_zero() else INF
            rep.pairs.append(((s1.j, s1.u), (s2.j, s2.u), ord_exp, ord_sub))
            if not (ord_exp == ord_sub == target):
                rep.ge1 = False
    return rep
