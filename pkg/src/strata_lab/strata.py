"""Strata [A, n, r, beta]: purity, N_k, k0, simplicity, minimality, approximation."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from . import linalg
from .errors import (ConstructionFailed, InsufficientPrecision, ModulusTooSmall, NotPure,
                     NotSimple)
from .linalg import Lattice
from .orders import CentralizerAlgebra, StandardOrder
from .embed import conjugate_degree
from .padic import INF, Elem, Subfield, field_of_monomials, generated_field

NEG_INF = -INF


def field_over(L: Subfield, elems) -> Subfield:
    """L[elems] as a subfield of the tower."""
    E = L.E
    return generated_field([E.one(), L.eta, L.varpi] + list(elems), E)


@dataclass
class Stratum:
    """[B_L cap A, n, r, beta] inside the centralizer of L (L = Q_p gives A itself)."""

    order: StandardOrder
    n: int
    r: int
    beta: Elem
    alg: CentralizerAlgebra | None = None
    _k0: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.alg is None:
            self.alg = self.order.algebra()
        if self.n <= self.r:
            raise ValueError("a stratum needs n > r")

    @property
    def L(self) -> Subfield:
        return self.alg.L

    @property
    def field(self) -> Subfield:
        return field_over(self.L, [self.beta])

    def k0(self):
        if self._k0 is None:
            self._k0 = k0(self.beta, self.order, self.alg)
        return self._k0


# ------------------------------------------------------------------ purity

def purity_report(S: Stratum) -> dict:
    o = S.order
    Eb = S.field
    rank = conjugate_degree(S.beta, S.L) if not S.beta.is_zero() else 1
    # the conjugate count of beta over L must match the degree of L[beta]
    is_field = rank * S.L.degree == Eb.degree
    norm = all(o.in_normalizer(o.mat(g)) for g in (Eb.eta, Eb.varpi))
    nu = o.nu(o.mat(S.beta)) if not S.beta.is_zero() else INF
    return {"field": is_field, "normalizer": norm, "valuation": nu == -S.n}


def is_pure(S: Stratum) -> bool:
    return all(purity_report(S).values())


# ------------------------------------------------------------------ N_k and k0

def frak_N_k(beta: Elem, k: int, order: StandardOrder, alg: CentralizerAlgebra | None = None) -> Lattice:
    """N_k(beta) = {x in the order of B_L : beta x - x beta in P^k}."""
    alg = alg or order.algebra()
    Y = alg.order_lattice
    p = order.p
    if beta.is_zero() or not Y.cols:
        return Y
    X = order.mat(beta)
    ad, sb = order.ad_matrix(X)
    Ymat = linalg.from_columns(list(Y.cols), order.D)
    w = order.bounds(k)
    g = max(w) + sb + Y.shift
    if g <= 0:
        return Y
    if g > order.wp // 2:
        raise ModulusTooSmall(f"commutator test needs modulus exponent {g} beyond {order.wp // 2}")
    M = p**g
    AY = linalg.matmul(ad, Ymat, M)
    rows = []
    for r in range(order.D):
        sc = g - w[r] - sb - Y.shift
        if sc >= g:
            continue
        f = p**sc
        rows.append([x * f % M for x in AY[r]])
    if not rows:
        return Y
    Kz = linalg.modular_kernel(rows, p, g)
    gens = linalg.columns(linalg.matmul(Ymat, Kz))
    return Lattice.from_generators(p, order.D, gens, Y.shift, order.wp)


def _target(beta: Elem, order: StandardOrder, alg: CentralizerAlgebra) -> Lattice:
    """B_(L[beta]) cap A + P^1 cap B_L."""
    Lb = field_over(alg.L, [beta])
    return order.algebra(Lb).order_lattice + alg.radical_power(1)


def k0(beta: Elem, order: StandardOrder, alg: CentralizerAlgebra | None = None):
    """max{k : N_k not inside B_beta + P}; -inf when beta is central in B_L."""
    alg = alg or order.algebra()
    if beta.is_zero() or alg.L.contains(beta):
        return NEG_INF
    n = -order.nu(order.mat(beta))
    target = _target(beta, order, alg)
    for k in range(-n + 1, 1):
        if target.contains(frak_N_k(beta, k, order, alg)):
            return k - 1
    raise NotPure("k0 scan left the range [-n, 0]")


def is_simple(S: Stratum) -> bool:
    if not is_pure(S):
        return False
    return S.r < -S.k0()


def equivalent(S1: Stratum, S2: Stratum) -> bool:
    """beta1 - beta2 in P^(-r) (same order, n and r)."""
    if (S1.n, S1.r) != (S2.n, S2.r) or S1.order is not S2.order:
        raise ValueError("strata must share (A, n, r)")
    d = S1.beta - S2.beta
    return d.is_zero() or S1.order.nu(S1.order.mat(d)) >= -S1.r


# ------------------------------------------------------------------ minimality

def is_minimal(beta: Elem, L: Subfield | None = None) -> bool:
    """Minimality of beta over L via valuation gcd and residue generation."""
    E = beta.F
    L = L or E.prime
    if beta.is_zero():
        return False
    Eb = field_over(L, [beta])
    e_rel = Eb.eL // L.eL
    ep_b = E.e // Eb.eL
    v_top = beta.val()
    if v_top % ep_b:
        raise InsufficientPrecision("valuation not in the value group of L[beta]")
    nu = v_top // ep_b
    if gcd(nu, e_rel) != 1:
        return False
    # y = varpi_L^(-nu) beta^e_rel is a unit of L[beta]
    y = beta**e_rel * L.varpi ** (-nu)
    fy = E.kf.degree(y.residue())
    return _lcm(fy, L.fL) == Eb.fL


def _lcm(a, b):
    return a * b // gcd(a, b)


# ------------------------------------------------------------------ approximation

@dataclass
class ApproxSequence:
    order: StandardOrder
    n: int
    betas: list          # beta_0 .. beta_s
    rs: list             # r_0 = 0, r_1, .., r_s (r_(i+1) = -k0(beta_i))
    fields: list         # E_i = F[beta_i]
    case: str            # "A" when beta_s lies in F, "B" otherwise

    @property
    def s(self):
        return len(self.betas) - 1

    @property
    def d(self):
        return self.s if self.case == "A" else self.s + 1

    @property
    def cs(self):
        """c_i = beta_i - beta_(i+1), c_s = beta_s."""
        b = self.betas
        return [b[i] - b[i + 1] for i in range(self.s)] + [b[-1]]


def _digit_candidates(beta: Elem):
    E = beta.F
    digits = beta.digits(upto=0)
    if not digits:
        raise ConstructionFailed("beta has no negative-valuation digits")
    prefix = []
    fields = []
    for k, v in digits:
        prefix.append((k, v))
        fields.append(field_of_monomials(E, prefix))
    jumps = []
    prev = E.prime
    for idx, L in enumerate(fields):
        if L != prev:
            jumps.append(idx)
            prev = L
    return digits, jumps


def approx_sequence(beta: Elem, order: StandardOrder, verify: bool = True) -> ApproxSequence:
    """Approximation chain for the stratum [A, n, 0, beta] by Teichmuller digit truncation."""
    E = beta.F
    n = -order.nu(order.mat(beta))
    if n <= 0:
        raise ConstructionFailed("beta must have negative valuation")
    if beta.digits(upto=None) and any(v >= 0 for _, v in beta.digits(upto=None)):
        raise ConstructionFailed("beta must be a sum of negative-valuation digits")
    digits, jumps = _digit_candidates(beta)

    def partial(upto_idx):
        acc = E.zero()
        for k, v in digits[:upto_idx]:
            acc = acc + E.monomial(k, v)
        return acc

    betas = [beta]
    for j in reversed(jumps):
        betas.append(partial(j))
    if betas[-1].is_zero():
        betas.pop()
        case = "B"
    else:
        case = "A"
    rs = [0]
    for b in betas[:-1]:
        kk = k0(b, order)
        rs.append(-kk)
    fields = [generated_field([b]) for b in betas]
    seq = ApproxSequence(order, n, betas, rs, fields, case)
    if verify:
        rep = verify_sequence(seq)
        bad = [k for k, v in rep.items() if not v]
        if bad:
            raise ConstructionFailed(f"digit truncation failed conditions {bad}")
    return seq


def derived_stratum_simple(gamma: Elem, beta: Elem, order: StandardOrder, r: int) -> bool:
    """[B_gamma cap A, r, r - 1, beta - gamma] is simple in End_(F[gamma])(V)."""
    Eg = generated_field([gamma]) if not gamma.is_zero() else beta.F.prime
    alg = order.algebra(Eg)
    c = beta - gamma
    if c.is_zero():
        return False
    S = Stratum(order, r, r - 1, c, alg)
    return is_simple(S)


def verify_sequence(seq: ApproxSequence) -> dict:
    """Independent recheck of the defining conditions of an approximation chain."""
    o, n, b, rs, s = seq.order, seq.n, seq.betas, seq.rs, seq.s
    rep = {}
    # (i) each [A, n, r_i, beta_i] simple
    ok = True
    for i in range(s + 1):
        S = Stratum(o, n, rs[i], b[i])
        if not is_pure(S):
            ok = False
        elif rs[i] >= -S.k0():
            ok = False
    rep["i"] = ok
    rep["ii"] = (b[0] - b[0]).is_zero()
    rep["iii"] = rs[0] == 0 and all(rs[i] < rs[i + 1] for i in range(s)) and (s == 0 or rs[-1] < n)
    ok = True
    for i in range(s):
        if rs[i + 1] != -k0(b[i], o):
            ok = False
        d = b[i] - b[i + 1]
        if not d.is_zero() and o.nu(o.mat(d)) < -rs[i + 1]:
            ok = False
    rep["iv"] = ok
    kl = k0(b[s], o)
    rep["v"] = kl == -n or kl == NEG_INF
    ok = True
    ok2 = True
    for i in range(s):
        c = b[i] - b[i + 1]
        Eg = generated_field([b[i + 1]])
        alg = o.algebra(Eg)
        sc = alg.corestriction(o.mat(c))
        if not o.negligible(sc - o.mat(c)):
            ok = False
        if not derived_stratum_simple(b[i + 1], b[i], o, rs[i + 1]):
            ok2 = False
    rep["vi"] = ok and ok2
    rep["vi_prime"] = ok2
    rep["vii"] = all(seq.fields[i + 1].is_subfield_of(seq.fields[i]) for i in range(s))
    return rep
