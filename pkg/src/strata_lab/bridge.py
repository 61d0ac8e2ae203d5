"""Levi towers attached to an approximation chain, Moy-Prasad lattices at the chain point,
Yu's groups K_+, K0, K and the J / J_+ index ladder.

Groups of the form 1 + L (L a lattice inside the radical) are handled through L; the
depth-zero parahoric is the unit group of the order lattice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .errors import (EqualityFailed, IdentityFailed, MonotonicityViolation, NegativeDepthGroup,
                     NotTame, OddExponent, ProductMismatch)
from . import linalg
from .linalg import Lattice, diagonal_lattice
from .orders import CentralizerAlgebra, MatElem, StandardOrder, quotient_size
from .strata import ApproxSequence


# ------------------------------------------------------------------ tower

@dataclass
class LeviTower:
    """Fields E_0 > E_1 > .. > E_d and the centralizers G^i = Aut_(E_i)(V)."""

    seq: ApproxSequence
    fields: list
    algs: list

    @property
    def order(self) -> StandardOrder:
        return self.seq.order

    @property
    def case(self) -> str:
        return self.seq.case

    @property
    def d(self) -> int:
        return len(self.fields) - 1

    @property
    def e_chain(self) -> int:
        return self.order.e

    def rank(self, i) -> int:
        """N_i = N / [E_i : F]."""
        return self.order.N // self.fields[i].degree

    def eps(self, i) -> int:
        return self.order.e // self.fields[i].eL

    def chain_r(self, i) -> int:
        """r_i on the lattice-chain side (r_0 = 0, r_(s+1) = n in the Cas B tail)."""
        rs = self.seq.rs
        return rs[i] if i < len(rs) else self.seq.n

    def to_dict(self):
        return {"case": self.case, "d": self.d,
                "fields": [list(L.key) for L in self.fields],
                "ranks": [self.rank(i) for i in range(self.d + 1)],
                "y": {"e_chain": self.e_chain, "N": self.order.N,
                      "chain": "L_k = pi^k o_E^m, period e_chain"}}


def build_tower(seq: ApproxSequence) -> LeviTower:
    o = seq.order
    fields = list(seq.fields)
    if seq.case == "B":
        fields.append(o.E.prime)
    for L in fields:
        if L.eL % o.p == 0:
            raise NotTame("wildly ramified field in the tower")
    for a, b in zip(fields, fields[1:]):
        if not (b.is_subfield_of(a) and b.degree < a.degree):
            raise ValueError("tower fields must strictly decrease")
    return LeviTower(seq, fields, [o.algebra(L) for L in fields])


def depth_vector(seq: ApproxSequence) -> list:
    """(r_0, .., r_d) as exact rationals: -ord(c_i), repeated at the end in Cas B."""
    e = seq.order.e
    out = [Fraction(-seq.order.nu(seq.order.mat(c)), e) for c in seq.cs]
    if seq.case == "B":
        out.append(out[-1])
    check_depths(out, seq.case)
    # e * r_(i-1) = r_i on the chain side, and e * r_s = n
    for i, r in enumerate(out[: seq.s + 1]):
        target = seq.rs[i + 1] if i + 1 <= seq.s else seq.n
        if r * e != target:
            raise MonotonicityViolation(f"depth {i} does not match the chain exponent {target}")
    return out


def check_depths(rvec, case):
    if not rvec:
        return
    if rvec[0] <= 0:
        raise MonotonicityViolation("first depth must be positive")
    d = len(rvec) - 1
    for i in range(d - 1):
        if not rvec[i] < rvec[i + 1]:
            raise MonotonicityViolation(f"depths not increasing at {i}")
    if d >= 1:
        last_ok = rvec[d - 1] == rvec[d] if case == "B" else rvec[d - 1] < rvec[d]
        if not last_ok:
            raise MonotonicityViolation("last pair of depths violates the case rule")


# ------------------------------------------------------------------ depth dictionary

def exponent_for(e: int, r, plus: bool) -> int:
    r = Fraction(r)
    return floor(e * r) + 1 if plus else ceil(e * r)


@dataclass
class FiltLattice:
    level: int
    depth: Fraction
    plus: bool
    k: int
    lie: bool
    alg: CentralizerAlgebra = field(repr=False)
    head: bool = False

    @property
    def lattice(self) -> Lattice:
        return self.alg.radical_power(self.k)

    def label(self):
        sign = "+" if self.plus else ""
        kind = "g" if self.lie else "G"
        return f"{kind}^{self.level}_(y,{self.depth}{sign})"

    def to_dict(self):
        return {"level": self.level, "depth": str(self.depth), "plus": self.plus, "k": self.k,
                "lie": self.lie, "head": self.head, "fingerprint": self.lattice.fingerprint()}


def moy_prasad(tower: LeviTower, i: int, r, plus: bool, lie: bool = False) -> FiltLattice:
    r = Fraction(r)
    if not lie and r < 0:
        raise NegativeDepthGroup("group filtrations start at depth zero")
    k = exponent_for(tower.e_chain, r, plus)
    return FiltLattice(i, r, plus, k, lie, tower.algs[i])


def mp_lattice(tower: LeviTower, i: int, t, plus: bool) -> Lattice:
    """{X in B_i : X L(u) inside L(u + t) for all u}, L(u) = L_ceil(e u), built from the chain.

    Independent of the exponent dictionary: bounds come from the lattices L_a themselves.
    """
    o = tower.order
    e, N, p = o.e, o.N, o.p
    t = Fraction(t)
    if plus:
        t += Fraction(1, 2 * e * (e * t).denominator)
    jidx = o.jidx

    def w(a, c):
        return -((-(a - jidx[c])) // e)

    bounds = [None] * (N * N)
    for g in range(2 * e):
        u = Fraction(g, 2 * e)
        a, b = ceil(e * u), ceil(e * (u + t))
        for r in range(N):
            for c in range(N):
                val = w(b, r) - w(a, c)
                idx = r * N + c
                if bounds[idx] is None or val > bounds[idx]:
                    bounds[idx] = val
    alg = tower.algs[i]
    if alg.is_whole:
        return diagonal_lattice(p, bounds, o.wp)
    s0 = max(0, -min(bounds))
    return Lattice(p, o.D, alg.integral_basis.cols, s0, o.wp).intersect_coordinate_bounds(bounds)


# ------------------------------------------------------------------ the eight rows

ROW_NAMES = ("G s+", "G s", "G r+", "G r", "g s+", "g s", "g r+", "g r")


def dictionary_rows(tower: LeviTower, i: int):
    """(name, lattice-side exponent, depth, plus, lie) for the eight rows at level i >= 1."""
    ri = tower.chain_r(i)
    depth = Fraction(ri, tower.e_chain)          # r_(i-1) on the Moy-Prasad side
    half = depth / 2
    base = [(ri // 2 + 1, half, True), ((ri + 1) // 2, half, False),
            (ri + 1, depth, True), (ri, depth, False)]
    rows = []
    for lie in (False, True):
        for j, (k, dep, plus) in enumerate(base):
            rows.append((ROW_NAMES[4 * lie + j], k, dep, plus, lie))
    return rows


def _product_spot_check(o: StandardOrder, lat: Lattice, rng: random.Random, pairs=8) -> bool:
    mats = o.basis_mats(lat)
    if not mats:
        return True
    for _ in range(pairs):
        x, y = rng.choice(mats), rng.choice(mats)
        if not o.contains_mat(lat, x * y):
            return False
    return True


def verify_filt_dictionary(tower: LeviTower, mutate=None, raise_on_failure: bool = False,
                           rng: random.Random | None = None) -> dict:
    """Both-way containment of the lattice-chain side against the chain-point side.

    ``mutate = (level, row_index)`` adds one to that row's lattice-side exponent.
    """
    rng = rng or random.Random(0)
    o = tower.order
    seq = tower.seq
    top = tower.d if tower.case == "A" else tower.d - 1
    rows = []
    for i in range(1, top + 1):
        for j, (name, k, dep, plus, lie) in enumerate(dictionary_rows(tower, i)):
            if mutate == (i, j):
                k += 1
            lhs = tower.algs[i].radical_power(k)
            rhs = mp_lattice(tower, i, dep, plus)
            fwd, bwd = rhs.contains(lhs), lhs.contains(rhs)
            closed = True
            if not lie and fwd and bwd:
                closed = _product_spot_check(o, rhs, rng)
            rows.append({"level": i, "row": j, "name": name, "exponent": k, "depth": str(dep),
                         "plus": plus, "forward": fwd, "backward": bwd, "group_closed": closed,
                         "ok": fwd and bwd and closed,
                         "fingerprints": [lhs.fingerprint(), rhs.fingerprint()]})
    if tower.case == "B":
        i = tower.d
        k = seq.n + 1
        if mutate == (i, 0):
            k += 1
        dep = Fraction(seq.n, tower.e_chain)
        lhs = tower.algs[i].radical_power(k)
        rhs = mp_lattice(tower, i, dep, True)
        fwd, bwd = rhs.contains(lhs), lhs.contains(rhs)
        rows.append({"level": i, "row": 0, "name": "G tail+", "exponent": k, "depth": str(dep),
                     "plus": True, "forward": fwd, "backward": bwd, "group_closed": True,
                     "ok": fwd and bwd, "fingerprints": [lhs.fingerprint(), rhs.fingerprint()]})
    failed = [(r["level"], r["row"]) for r in rows if not r["ok"]]
    if failed and raise_on_failure:
        raise IdentityFailed(f"rows failed: {failed}")
    return {"rows": rows, "failed": failed, "ok": not failed}


# ------------------------------------------------------------------ K groups

@dataclass
class KGroups:
    plus: list          # K_+ factors
    circ: list          # K0 factors
    full: list          # K factors, first one carries the E^x head
    s: list             # s_i = r_i / 2

    def lattice(self, which: str) -> Lattice:
        facs = getattr(self, which)
        lat = facs[0].lattice
        for f in facs[1:]:
            lat = lat + f.lattice
        return lat

    def inclusions(self) -> bool:
        """K_+ inside K0 inside K, factor by factor."""
        for a, b, c in zip(self.plus, self.circ, self.full):
            if not (b.lattice.contains(a.lattice) and c.lattice.contains(b.lattice)):
                return False
        return True

    def exponents(self, which: str):
        return [f.k for f in getattr(self, which)]

    def to_dict(self):
        return {"s": [str(x) for x in self.s],
                "K_plus": [f.to_dict() for f in self.plus],
                "K_circ": [f.to_dict() for f in self.circ],
                "K": [f.to_dict() for f in self.full]}


def k_groups(tower: LeviTower, rvec) -> KGroups:
    s = [Fraction(r) / 2 for r in rvec]
    plus = [moy_prasad(tower, 0, 0, True)]
    circ = [moy_prasad(tower, 0, 0, False)]
    head = moy_prasad(tower, 0, 0, False)
    head.head = True
    full = [head]
    for i in range(1, tower.d + 1):
        plus.append(moy_prasad(tower, i, s[i - 1], True))
        circ.append(moy_prasad(tower, i, s[i - 1], False))
        full.append(moy_prasad(tower, i, s[i - 1], False))
    return KGroups(plus, circ, full, s)


# ------------------------------------------------------------------ lattice-chain side of H and J

def bk_lattices(seq: ApproxSequence, ceil_half: bool) -> Lattice:
    """Recursive order h(beta_0) (or j(beta_0) when ``ceil_half``) along the chain."""
    o = seq.order

    def half(r):
        return (r + 1) // 2 if ceil_half else r // 2 + 1

    s = seq.s
    if seq.case == "A":
        cur = o.algebra().order_lattice
    else:
        cur = o.algebra(seq.fields[s]).order_lattice + o.radical_power(half(seq.n))
    for i in range(s - 1, -1, -1):
        cur = o.algebra(seq.fields[i]).order_lattice + \
            cur.intersect_coordinate_bounds(o.bounds(half(seq.rs[i + 1])))
    return cur


def h1_lattice(seq: ApproxSequence) -> Lattice:
    return bk_lattices(seq, False).intersect_coordinate_bounds(seq.order.bounds(1))


def j1_lattice(seq: ApproxSequence) -> Lattice:
    return bk_lattices(seq, True).intersect_coordinate_bounds(seq.order.bounds(1))


def j0_lattice(seq: ApproxSequence) -> Lattice:
    return bk_lattices(seq, True)


# ------------------------------------------------------------------ group equalities

def _peel(tower: LeviTower, g: MatElem, factors, head_unit: bool):
    """Split g along the factor list by successive corestrictions onto B_0, B_1, .."""
    o = tower.order
    one = o.one()
    out = []
    rest = g
    for f in factors[:-1]:
        alg = tower.algs[f.level]
        gi = alg.corestriction(rest) if (head_unit and not out) else one + alg.corestriction(rest - one)
        out.append(gi)
        rest = gi.inverse() * rest
    out.append(rest)
    return out


def _random_unit(o: StandardOrder, lat: Lattice, rng: random.Random, tries=50) -> MatElem:
    from .characters import random_lattice_element
    for _ in range(tries):
        x = random_lattice_element(o, lat, rng)
        if x.is_zero():
            continue
        try:
            xi = x.inverse()
        except Exception:
            continue
        if o.nu(x) == 0 and o.nu(xi) == 0:
            return x
    raise EqualityFailed("could not sample a unit of the order")


def _sample_group(tower, lat, head_unit, rng):
    from .characters import random_lattice_element
    o = tower.order
    if head_unit:
        return _random_unit(o, lat, rng)
    return o.one() + random_lattice_element(o, lat, rng)


def _factor_members(tower, parts, factors, head_unit):
    o = tower.order
    one = o.one()
    for idx, (g, f) in enumerate(zip(parts, factors)):
        x = g if (head_unit and idx == 0) else g - one
        if not o.contains_mat(f.lattice, x):
            return False
        if not tower.algs[f.level].contains(g):
            return False
    return True


def verify_group_equalities(tower: LeviTower, rvec=None, samples: int = 20,
                            rng: random.Random | None = None, sabotage_s: int | None = None) -> dict:
    """H^1 = K_+, J^0 = K0 and E^x J^0 = K, via exponents, lattices and random membership.

    ``sabotage_s = i`` replaces s_i by s_i + 1/e (used to see (ii) fail).
    """
    from .characters import group_shape
    rng = rng or random.Random(0)
    seq = tower.seq
    o = tower.order
    rvec = depth_vector(seq) if rvec is None else list(rvec)
    K = k_groups(tower, rvec)
    if sabotage_s is not None:
        K.s[sabotage_s] += Fraction(1, tower.e_chain)
        i = sabotage_s + 1
        K.circ[i] = moy_prasad(tower, i, K.s[sabotage_s], False)
        K.full[i] = moy_prasad(tower, i, K.s[sabotage_s], False)
    shape = group_shape(seq, 0)
    rep = {"K": K.to_dict(), "inclusions": K.inclusions()}

    # exponent comparison per level
    h_exp = [f.exponent for f in shape.h_factors]
    j_exp = [f.exponent for f in shape.j_factors]
    rep["exponents_plus"] = [K.exponents("plus"), h_exp]
    rep["exponents_circ"] = [K.exponents("circ"), j_exp]

    H1 = h1_lattice(seq)
    J0 = j0_lattice(seq)
    Kp, Kc = K.lattice("plus"), K.lattice("circ")
    lat_i = H1.equals(Kp)
    lat_ii = J0.equals(Kc)

    def membership(lat, facs, head_unit):
        for _ in range(samples):
            g = _sample_group(tower, lat, head_unit, rng)
            parts = _peel(tower, g, facs, head_unit)
            if not _factor_members(tower, parts, facs, head_unit):
                return False
            prod = parts[0]
            for x in parts[1:]:
                prod = prod * x
            if not o.negligible(prod - g):
                return False
            # and back: a random factor product lies in the lattice-chain side
            tup = [(_random_unit(o, f.lattice, rng) if (head_unit and idx == 0)
                    else _sample_group(tower, f.lattice, False, rng)) for idx, f in enumerate(facs)]
            prod = tup[0]
            for x in tup[1:]:
                prod = prod * x
            y = prod - o.one()
            if head_unit:
                if not (o.contains_mat(lat, prod) and o.nu(prod.inverse()) >= 0):
                    return False
            elif not o.contains_mat(lat, y):
                return False
        return True

    rep["membership_i"] = membership(H1, K.plus, False)
    rep["membership_ii"] = membership(J0, K.circ, True)
    rep["i"] = lat_i and rep["membership_i"] and K.exponents("plus") == h_exp
    rep["ii"] = lat_ii and rep["membership_ii"] and K.exponents("circ") == j_exp

    # head: E_0^x A_0^x is the normalizer of A_0 in G^0 iff varpi_(E_0) has chain shift 1
    E0 = tower.fields[0]
    w = o.mat(E0.varpi)
    head_ok = o.in_normalizer(w) and o.nu(w) == 1
    rep["head"] = head_ok
    rep["iii"] = rep["ii"] and head_ok
    rep["ok"] = rep["i"] and rep["ii"] and rep["iii"] and rep["inclusions"]
    return rep


# ------------------------------------------------------------------ Yu's J^i and the index ladder

def _complement(alg: CentralizerAlgebra, lat: Lattice) -> Lattice:
    """(1 - s_L)(lat) for the trace-orthogonal projection s_L onto B_L.

    s_L maps lat into itself, so the image is lat cut by the trace pairing against B_L;
    that kernel is exact, unlike applying the numeric projection column by column.
    """
    o = alg.order
    if alg.is_whole:
        return Lattice(o.p, o.D, (), lat.shift, o.wp)
    if not lat.cols:
        return lat
    N = o.N
    tperm = [c * N + r for r in range(N) for c in range(N)]
    rows = [[sum(b[tperm[idx]] * col[idx] for idx in range(o.D) if col[idx]) for col in lat.cols]
            for b in alg.integral_basis.cols]
    K = linalg.saturated_kernel(rows, o.p, o.wp, expected_dim=lat.rank - len(rows))
    vecs = [[sum(K[i][j] * lat.cols[i][idx] for i in range(lat.rank)) for idx in range(o.D)]
            for j in range(len(K[0]))] if K and K[0] else []
    return Lattice.from_generators(o.p, o.D, vecs, lat.shift, o.wp)


def yu_j(tower: LeviTower, i: int, rvec, plus: bool) -> Lattice:
    """Lie lattice of J^i (or J^i_+): g^(i-1)_(r_(i-1)) + n^i_(s_(i-1)) (or s_(i-1)+)."""
    r = Fraction(rvec[i - 1])
    inner = moy_prasad(tower, i - 1, r, False, lie=True).lattice
    outer = moy_prasad(tower, i, r / 2, plus, lie=True).lattice
    return inner + _complement(tower.algs[i - 1], outer)


@dataclass
class IndexLadder:
    j_indices: list
    j1_h1: int
    dim: int
    steps: list
    product_ok: bool
    even_ok: bool

    def to_dict(self):
        return {"J_indices": [str(x) for x in self.j_indices], "J1_H1": str(self.j1_h1),
                "dim": str(self.dim), "steps": self.steps,
                "product_ok": self.product_ok, "even_ok": self.even_ok}


def _p_log(x: int, p: int) -> int:
    k = 0
    while x % p == 0 and x > 1:
        x //= p
        k += 1
    if x != 1:
        raise ValueError("not a power of p")
    return k


def index_ladder(tower: LeviTower, rvec=None, raise_on_failure: bool = False) -> IndexLadder:
    seq = tower.seq
    o = tower.order
    p = o.p
    rvec = depth_vector(seq) if rvec is None else list(rvec)
    base = moy_prasad(tower, 0, 0, True, lie=True).lattice
    A, B = base, base
    js, steps = [], []
    prev = 1
    for i in range(1, tower.d + 1):
        Ji, Jp = yu_j(tower, i, rvec, False), yu_j(tower, i, rvec, True)
        idx = quotient_size(Ji, Jp)
        js.append(idx)
        A, B = A + Ji, B + Jp
        cur = quotient_size(A, B)
        steps.append({"level": i, "quotient": str(cur), "ok": cur == prev * idx})
        prev = cur
    J1, H1 = j1_lattice(seq), h1_lattice(seq)
    j1h1 = quotient_size(J1, H1)
    prod = 1
    for x in js:
        prod *= x
    chain_match = A.equals(J1) and B.equals(H1)
    product_ok = prod == j1h1 and all(s["ok"] for s in steps) and chain_match
    k = _p_log(j1h1, p)
    even_ok = k % 2 == 0
    if raise_on_failure:
        if not product_ok:
            raise ProductMismatch(f"product {prod} against [J1:H1] = {j1h1}")
        if not even_ok:
            raise OddExponent(f"[J1:H1] = p^{k}")
    return IndexLadder(js, j1h1, p ** (k // 2) if even_ok else 0, steps, product_ok, even_ok)
