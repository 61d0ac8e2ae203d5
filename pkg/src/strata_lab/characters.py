"""Exact Q/Z-valued characters: psi, psi_b, characters of principal units, simple characters.

psi is the standard character of Q_p (p-adic fractional part). The base character
used in every trace pairing is psi_F(x) = psi(x / p), whose conductor is p Z_p.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import AxiomViolation, ConductorMismatch, InsufficientPrecision
from .linalg import Lattice
from .orders import CentralizerAlgebra, MatElem, StandardOrder
from .padic import INF, Elem, Subfield, Tower, get_tower
from .strata import ApproxSequence


# ------------------------------------------------------------------ Q/Z and psi

def qz(x) -> Fraction:
    """Representative of x mod 1 in [0, 1)."""
    x = Fraction(x)
    return x - math.floor(x)


def psi_rational(r, p: int) -> Fraction:
    """p-adic fractional part of a rational number."""
    r = Fraction(r)
    if r == 0:
        return Fraction(0)
    den = r.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if k == 0:
        return Fraction(0)
    pk = p**k
    a = r.numerator * pow(den, -1, pk) % pk
    return Fraction(a, pk)


def psi(x, p: int | None = None) -> Fraction:
    """Standard character of Q_p on a rational or a base-field element."""
    if isinstance(x, Elem):
        if x.F.n != 1:
            raise ValueError("psi is defined on Q_p")
        if x.is_zero():
            return Fraction(0)
        if x.s > 0 and x.prec < x.s:
            raise InsufficientPrecision("value not known modulo Z_p")
        return psi_rational(Fraction(x.c[0], x.F.p**x.s) if x.s >= 0 else x.c[0] * x.F.p ** (-x.s),
                            x.F.p)
    return psi_rational(x, p)


def psi_F(x, p: int) -> Fraction:
    """Additive character of Q_p trivial exactly on p Z_p."""
    return psi_rational(Fraction(x) / p, p)


def psi_L(L: Subfield, y: Elem) -> Fraction:
    """psi_F(tr_(L/Q_p) y) for y in L."""
    if y.is_zero():
        return Fraction(0)
    t = L.trace_to_base(y)
    return psi_F(_as_rational(t), L.E.p)


def _as_rational(t: Elem) -> Fraction:
    if t.is_zero():
        return Fraction(0)
    return Fraction(t.c[0]) / Fraction(t.F.p) ** t.s


def psi_A(X: MatElem) -> Fraction:
    """psi_F(tr_(A/F) X)."""
    return psi_F(X.trace(), X.order.p)


def psi_b(b: MatElem, g: MatElem) -> Fraction:
    """psi_A(b (g - 1))."""
    return psi_A(b * (g - g.order.one()))


# ------------------------------------------------------------------ characters of U^1_L / U^hi_L

@lru_cache(maxsize=None)
def _unit_structure(Ekey, Lkey, hi):
    """Generators 1 + eta^a varpi^k (1 <= k < hi) of U^1_L / U^hi_L and their p-th power logs."""
    E = get_tower(*Ekey)
    L = next(S for S in E.subfields() if S.key == Lkey)
    return _UnitPresentation(E, L, hi)


class _UnitPresentation:
    def __init__(self, E: Tower, L: Subfield, hi: int):
        self.E, self.L, self.hi = E, L, hi
        self.p = E.p
        fL = L.fL
        self.gens = [(k, a) for k in range(1, hi) for a in range(fL)]
        self.index = {g: i for i, g in enumerate(self.gens)}
        kf = E.kf
        basis = [kf.exp(L.dL * a) for a in range(fL)]
        table = {}
        for coeffs in _cartesian(self.p, fL):
            acc = kf.zero()
            for c, b in zip(coeffs, basis):
                acc = kf.add(acc, tuple(c * x % self.p for x in b))
            table[acc] = coeffs
        self.table = table
        self.varpi_pows = {k: E.monomial(L.b * k, L.ep * k) for k in range(-1, hi + 1)}
        self.gen_elems = [self.element(k, a) for (k, a) in self.gens]
        self.gen_invs = [g.inverse() for g in self.gen_elems]
        self.power_logs = [self.dlog(g**self.p) for g in self.gen_elems]

    def element(self, k, a):
        return self.E.one() + self.E.monomial(self.L.dL * a, 0) * self.varpi_pows[k]

    def dlog(self, u: Elem):
        """Exponents x_j with u = prod g_j^(x_j) modulo U^hi (greedy by level)."""
        E, L = self.E, self.L
        out = [0] * len(self.gens)
        one = E.one()
        ep = L.ep
        for k in range(1, self.hi):
            y = u - one
            if y.is_zero():
                break
            v = y.val()
            if v < ep * k:
                if v < ep:
                    raise ValueError("element is not a principal unit of the subfield")
                raise ValueError("element is not in the expected subgroup")
            if v > ep * k:
                continue
            z = y * E.monomial(-L.b * k, -ep * k)
            r = z.residue()
            coeffs = self.table.get(r)
            if coeffs is None:
                raise ValueError("residue outside the residue field of the subfield")
            for a, c in enumerate(coeffs):
                if c:
                    idx = self.index[(k, a)]
                    out[idx] += c
                    u = u * self.gen_invs[idx] ** c
        return out


def _cartesian(p, f):
    if f == 0:
        yield ()
        return
    for rest in _cartesian(p, f - 1):
        for c in range(p):
            yield rest + (c,)


class MultChar:
    """A character of E_L^x: trivial on pi_L and zeta, given on U^1_L by values on generators."""

    def __init__(self, L: Subfield, hi: int, values):
        self.L = L
        self.hi = max(hi, 1)
        self.values = [qz(v) for v in values]
        self.pres = _unit_structure(L.E.key, L.key, self.hi)
        if len(self.values) != len(self.pres.gens):
            raise ValueError("value vector has the wrong length")

    pi_value = Fraction(0)
    zeta_value = Fraction(0)

    @property
    def gens(self):
        return self.pres.gens

    def __call__(self, u: Elem) -> Fraction:
        x = self.pres.dlog(u)
        return qz(sum(v * c for v, c in zip(self.values, x)))

    def relation_defects(self):
        """Generators j where p v_j differs from v . dlog(g_j^p)."""
        bad = []
        p = self.pres.p
        for j, row in enumerate(self.pres.power_logs):
            t = sum(v * c for v, c in zip(self.values, row))
            if qz(p * self.values[j] - t) != 0:
                bad.append(self.gens[j])
        return bad

    def is_character(self) -> bool:
        return not self.relation_defects()

    def restricted_values(self, lo: int):
        return [v for (k, a), v in zip(self.gens, self.values) if k >= lo]

    def to_dict(self):
        return {"field": list(self.L.key), "hi": self.hi, "pi": "0", "zeta": "0",
                "values": [f"{v.numerator}/{v.denominator}" for v in self.values]}

    @staticmethod
    def extend(L: Subfield, hi: int, deep: int, deep_value, rng: random.Random | None = None):
        """Character on U^1 agreeing with deep_value(g) on generators of level >= deep.

        Shallower generators get the solution of p v_j = v . dlog(g_j^p) plus a
        random (or, without rng, zero) multiple of 1/p.
        """
        pres = _unit_structure(L.E.key, L.key, max(hi, 1))
        p = pres.p
        vals = [None] * len(pres.gens)
        for j, (k, a) in enumerate(pres.gens):
            if k >= deep:
                vals[j] = qz(deep_value(j, pres.gen_elems[j]))
        for k in range(min(deep, pres.hi) - 1, 0, -1):
            for a in range(L.fL):
                j = pres.index[(k, a)]
                row = pres.power_logs[j]
                t = Fraction(0)
                for idx, c in enumerate(row):
                    if c:
                        if vals[idx] is None:
                            raise AssertionError("power relation reaches an unsolved generator")
                        t += vals[idx] * c
                lift = rng.randrange(p) if rng is not None else 0
                vals[j] = qz((qz(t) + lift) / p)
        return MultChar(L, hi, vals)


# ------------------------------------------------------------------ group shape

@dataclass
class Factor:
    index: int
    alg: CentralizerAlgebra
    exponent: int

    @property
    def lattice(self) -> Lattice:
        return self.alg.radical_power(self.exponent)


@dataclass
class GroupShape:
    """Factor lists of H^(m+1), J^m presentations attached to an approximation chain."""

    seq: ApproxSequence
    m: int
    h_factors: list
    j_factors: list

    @property
    def order(self) -> StandardOrder:
        return self.seq.order

    @property
    def n(self):
        return self.seq.n

    @property
    def d(self):
        return self.seq.d

    @property
    def s(self):
        return self.seq.s

    @property
    def case(self):
        return self.seq.case

    def field(self, i) -> Subfield:
        return self.h_factors[i].alg.L

    def eps(self, i) -> int:
        return self.order.e // self.field(i).eL

    def a(self, i) -> int:
        """Exponent of factor i of H^(m+1); a_(d+1) is the virtual [n/2]+1 in Cas A."""
        if i < len(self.h_factors):
            return self.h_factors[i].exponent
        return max(self.m, self.n // 2) + 1

    def r_next(self, i) -> int:
        """r_(i+1), with r_(s+1) = n."""
        return self.seq.rs[i + 1] if i + 1 <= self.s else self.n

    def prescribed_depth(self, i) -> int:
        """Level of U_(E_i) on which phi_i is forced to be psi_(c_i)."""
        return -(-self.a(i + 1) // self.eps(i))

    def realizable_depth(self, i) -> int:
        """Least level k with 1 + U^k_(E_i) realizable inside factor i."""
        return -(-self.a(i) // self.eps(i))

    def conductor(self, i) -> int:
        """phi_i is trivial on U^conductor(i)."""
        return -(-(self.r_next(i) + 1) // self.eps(i))

    def h_lattice(self) -> Lattice:
        lat = self.h_factors[0].lattice
        for f in self.h_factors[1:]:
            lat = lat + f.lattice
        return lat

    def j_lattice(self) -> Lattice:
        lat = self.j_factors[0].lattice
        for f in self.j_factors[1:]:
            lat = lat + f.lattice
        return lat

    def to_dict(self):
        return {"m": self.m, "case": self.case,
                "H": [[f.index, list(f.alg.L.key), f.exponent] for f in self.h_factors],
                "J": [[f.index, list(f.alg.L.key), f.exponent] for f in self.j_factors]}


def group_shape(seq: ApproxSequence, m: int = 0) -> GroupShape:
    o = seq.order
    h, j = [], []
    for i in range(seq.s + 1):
        alg = o.algebra(seq.fields[i])
        h.append(Factor(i, alg, max(m, seq.rs[i] // 2) + 1))
        j.append(Factor(i, alg, max(m, (seq.rs[i] + 1) // 2) if i else m))
    if seq.case == "B":
        alg = o.algebra()
        h.append(Factor(seq.s + 1, alg, max(m, seq.n // 2) + 1))
        j.append(Factor(seq.s + 1, alg, max(m, (seq.n + 1) // 2)))
    return GroupShape(seq, m, h, j)


# ------------------------------------------------------------------ simple characters

def decompose(shape: GroupShape, g: MatElem):
    """Split g in H^(m+1) into (g_0, .., g_d) with g_j in factor j, by successive corestrictions."""
    o = shape.order
    one = o.one()
    out = []
    rest = g
    for f in shape.h_factors[:-1]:
        gi = one + f.alg.corestriction(rest - one)
        out.append(gi)
        rest = gi.inverse() * rest
    out.append(rest)
    return out


def multiply(tup):
    g = tup[0]
    for x in tup[1:]:
        g = g * x
    return g


def random_lattice_element(order: StandardOrder, lat: Lattice, rng: random.Random, bound: int | None = None):
    p = order.p
    bound = bound or p**3
    coeffs = [rng.randrange(bound) for _ in lat.cols]
    vec = [0] * order.D
    for c, col in zip(coeffs, lat.cols):
        if c:
            for i, x in enumerate(col):
                if x:
                    vec[i] += c * x
    return order.from_vec(vec, lat.shift)


def random_factor_tuple(shape: GroupShape, rng: random.Random):
    o = shape.order
    return [o.one() + random_lattice_element(o, f.lattice, rng) for f in shape.h_factors]


class SimpleCharacter:
    """theta = sum of theta^i, evaluated on ordered tuples (g_0, .., g_d)."""

    def __init__(self, shape: GroupShape, phis, cs):
        self.shape = shape
        self.phis = list(phis)
        self.cs = list(cs)
        o = shape.order
        self._cmats = [o.mat(c) for c in self.cs]

    @property
    def order(self):
        return self.shape.order

    def level_values(self, tup):
        """[theta^0(tup), .., theta^s(tup)]."""
        sh = self.shape
        one = self.order.one()
        out = []
        for i in range(sh.s + 1):
            alg = sh.h_factors[i].alg
            total = Fraction(0)
            for j, g in enumerate(tup):
                if j <= i:
                    total += self.phis[i](alg.det(g))
                else:
                    total += psi_A(self._cmats[i] * (g - one))
            out.append(qz(total))
        return out

    def __call__(self, tup) -> Fraction:
        return qz(sum(self.level_values(tup)))

    def on_matrix(self, g: MatElem) -> Fraction:
        return self(decompose(self.shape, g))

    def to_dict(self):
        return {"shape": self.shape.to_dict(), "det_parts": [ph.to_dict() for ph in self.phis],
                "tr_parts": [[list(c.c), c.s] for c in self.cs], "m": self.shape.m}


def _prescribed(shape: GroupShape, i: int, c: Elem):
    L = shape.field(i)
    one = L.E.one()
    return lambda j, u: psi_L(L, c * (u - one))


def build_theta(shape: GroupShape, phis, cs=None) -> SimpleCharacter:
    """Assemble theta from per-level characters phi_i and elements c_i."""
    cs = list(shape.seq.cs) if cs is None else list(cs)
    if len(phis) != shape.s + 1 or len(cs) != shape.s + 1:
        raise ConductorMismatch("need one character and one element per level")
    for i, ph in enumerate(phis):
        if ph.L != shape.field(i):
            raise ConductorMismatch(f"level {i}: character lives on the wrong field")
        deep = shape.prescribed_depth(i)
        pres = _prescribed(shape, i, cs[i])
        for j, (k, a) in enumerate(ph.gens):
            if k >= deep and ph.values[j] != qz(pres(j, ph.pres.gen_elems[j])):
                raise ConductorMismatch(f"level {i}: character differs from psi_c on U^{deep}")
        if ph.hi < shape.conductor(i):
            raise ConductorMismatch(f"level {i}: character truncated below its conductor")
    return SimpleCharacter(shape, phis, cs)


def theta_from_dict(shape: GroupShape, d: dict) -> SimpleCharacter:
    """Inverse of SimpleCharacter.to_dict on a known shape; the result is re-validated."""
    parts = d["det_parts"]
    if len(parts) != shape.s + 1:
        raise ConductorMismatch("need one character per level")
    phis = []
    for i, pd in enumerate(parts):
        L = shape.field(i)
        if tuple(pd["field"]) != tuple(L.key):
            raise ConductorMismatch(f"level {i}: character lives on the wrong field")
        phis.append(MultChar(L, int(pd["hi"]), [Fraction(v) for v in pd["values"]]))
    E = shape.order.E
    cs = [E.elem(list(c), int(sh)) for c, sh in d["tr_parts"]]
    return build_theta(shape, phis, cs)


def sample_phis(shape: GroupShape, rng: random.Random | None = None, cs=None):
    """Characters phi_i extending psi_(c_i) from their prescribed depth (random lifts below)."""
    cs = list(shape.seq.cs) if cs is None else list(cs)
    out = []
    for i in range(shape.s + 1):
        L = shape.field(i)
        out.append(MultChar.extend(L, shape.conductor(i), shape.prescribed_depth(i),
                                   _prescribed(shape, i, cs[i]), rng))
    return out


def sample_theta(shape: GroupShape, rng: random.Random | None = None) -> SimpleCharacter:
    return build_theta(shape, sample_phis(shape, rng))


def factor_theta(theta, shape: GroupShape, cs=None):
    """Recover (phi_0, .., phi_s) from theta evaluated on factor-supported tuples.

    Works top level first: phi_i is read on U^k_(E_i) for k at the realizable depth
    of factor i after removing psi_(c_i') (i' < i) and the already recovered phi_i'
    (i' > i); below that depth it is extended by the zero-lift rule.
    """
    cs = list(shape.seq.cs) if cs is None else list(cs)
    o = shape.order
    one = o.one()
    cmats = [o.mat(c) for c in cs]
    d = len(shape.h_factors)
    rec = [None] * (shape.s + 1)
    for i in range(shape.s, -1, -1):
        alg = shape.h_factors[i].alg
        L = shape.field(i)

        def value(j, u, i=i, alg=alg):
            T = alg.realize(u)
            tup = [one] * d
            tup[i] = T
            v = theta(tup)
            for i2 in range(i):
                v -= psi_A(cmats[i2] * (T - one))
            for i2 in range(i + 1, shape.s + 1):
                v -= rec[i2](shape.h_factors[i2].alg.det(T))
            return v

        rec[i] = MultChar.extend(L, shape.conductor(i), shape.realizable_depth(i), value, None)
    return rec


# ------------------------------------------------------------------ axioms

def check_axioms(theta: SimpleCharacter, rng: random.Random | None = None, samples: int = 20,
                 raise_on_failure: bool = False) -> dict:
    """(a) psi_beta on the deep part, (b) det factorization and genuine characters, (c) recursion."""
    rng = rng or random.Random(0)
    sh = theta.shape
    o = sh.order
    one = o.one()
    beta = sh.seq.betas[0]
    bmat = o.mat(beta)
    failures = []

    # (a) on a Z_p-basis of the deep lattice: both sides are additive there
    deep = sh.h_lattice().intersect_coordinate_bounds(o.bounds(sh.n // 2 + 1))
    for vec in deep.cols:
        x = o.from_vec(list(vec), deep.shift)
        g = one + x
        if theta.on_matrix(g) != psi_A(bmat * x):
            failures.append(("a", "basis"))
            break
    for _ in range(samples):
        x = random_lattice_element(o, deep, rng)
        g = one + x
        if theta.on_matrix(g) != psi_A(bmat * x):
            failures.append(("a", "sample"))
            break

    # (b) genuine characters, prescribed deep parts, and factorization through det on factor 0
    for i, ph in enumerate(theta.phis):
        if not ph.is_character():
            failures.append(("b", f"level {i} relations"))
        pres = _prescribed(sh, i, theta.cs[i])
        deep_k = sh.prescribed_depth(i)
        for j, (k, a) in enumerate(ph.gens):
            if k >= deep_k and ph.values[j] != qz(pres(j, ph.pres.gen_elems[j])):
                failures.append(("b", f"level {i} deep value"))
                break
    alg0 = sh.h_factors[0].alg
    for _ in range(max(2, samples // 5)):
        g0 = one + random_lattice_element(o, sh.h_factors[0].lattice, rng)
        T = alg0.realize(alg0.det(g0))
        tup_g = [g0] + [one] * (len(sh.h_factors) - 1)
        tup_t = [T] + [one] * (len(sh.h_factors) - 1)
        if theta(tup_g) != theta(tup_t):
            failures.append(("b", "det factorization"))
            break

    # (c) theta - psi_(c_0) on the tail group is the character of the tail chain
    if sh.s >= 1:
        tail = tail_character(theta)
        for _ in range(max(2, samples // 5)):
            tup = random_factor_tuple(sh, rng)
            tup[0] = one
            lhs = qz(theta(tup) - sum(psi_A(theta._cmats[0] * (g - one)) for g in tup[1:]))
            if lhs != tail(tup[1:]):
                failures.append(("c", "recursion"))
                break
    rep = {"ok": not failures, "failures": failures}
    if failures and raise_on_failure:
        raise AxiomViolation(failures)
    return rep


def tail_sequence(seq: ApproxSequence) -> ApproxSequence:
    return ApproxSequence(seq.order, seq.n, seq.betas[1:], seq.rs[1:], seq.fields[1:], seq.case)


def tail_character(theta: SimpleCharacter) -> SimpleCharacter:
    """The character attached to (beta_1, .., beta_s) with the same factors 1..d."""
    sh = theta.shape
    tseq = tail_sequence(sh.seq)
    tshape = GroupShape(tseq, sh.a(1) - 1, sh.h_factors[1:], sh.j_factors[1:])
    return SimpleCharacter(tshape, theta.phis[1:], theta.cs[1:])
