"""Generic Yu data from a maximal tame simple stratum and a simple character."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from . import bridge
from .characters import (MultChar, SimpleCharacter, check_axioms, factor_theta, psi_A, qz)
from .errors import AxiomViolation, Mismatch, MonotonicityViolation, NotMaximal, NotMinimal, NotTame
from .generic import check_GE1
from .linalg import vp
from .strata import ApproxSequence


@dataclass
class YuDatum:
    tower: bridge.LeviTower
    rvec: list
    rho_label: str
    phis: list                  # MultChar per level, None for the trivial Cas B tail
    cs: list
    kappa_dims: list = field(default_factory=list)

    @property
    def d(self):
        return self.tower.d

    def to_dict(self):
        return {"tower": self.tower.to_dict(),
                "r": [str(x) for x in self.rvec],
                "rho": self.rho_label,
                "phi": [ph.to_dict() if ph is not None else "trivial" for ph in self.phis],
                "c": [[list(c.c), c.s] for c in self.cs],
                "kappa_dims": [str(x) for x in self.kappa_dims]}


def _is_maximal(seq: ApproxSequence) -> bool:
    return seq.fields[0].eL == seq.order.e


def assemble(seq: ApproxSequence, theta: SimpleCharacter, sigma: str = "sigma",
             rng: random.Random | None = None, check: bool = True) -> YuDatum:
    if not _is_maximal(seq):
        raise NotMaximal("the order is not maximal for the field of beta")
    o = seq.order
    if any(L.eL % o.p == 0 for L in seq.fields):
        raise NotTame("wild ramification in the chain")
    if check:
        rep = check_axioms(theta, rng or random.Random(0), samples=8)
        if not rep["ok"]:
            raise AxiomViolation(rep["failures"])
    tower = bridge.build_tower(seq)
    rvec = bridge.depth_vector(seq)
    phis = factor_theta(theta, theta.shape)
    if seq.case == "B":
        phis = phis + [None]
    ladder = bridge.index_ladder(tower, rvec)
    dims = []
    for idx in ladder.j_indices:
        k = bridge._p_log(idx, o.p)
        dims.append(o.p ** (k // 2) if k % 2 == 0 else 0)
    return YuDatum(tower, rvec, sigma, phis, list(theta.cs), dims)


def _depth_levels(datum: YuDatum, i: int):
    """(first level where phi_i must vanish, the level where it must not) on U_(E_i)."""
    L = datum.tower.fields[i]
    x = datum.rvec[i] * L.eL
    return floor(x) + 1, ceil(x)


def validate(datum: YuDatum) -> dict:
    """Itemized checks of the five datum conditions (rho is trusted at the label level)."""
    T = datum.tower
    seq = T.seq
    items = {}
    tame = all(L.eL % T.order.p for L in T.fields)
    decreasing = all(b.is_subfield_of(a) and b.degree < a.degree for a, b in zip(T.fields, T.fields[1:]))
    items["tower"] = tame and decreasing
    items["anisotropic_center"] = True     # E_0^x / F^x is compact for a field E_0
    items["vertex"] = T.eps(0) == 1
    try:
        bridge.check_depths(datum.rvec, T.case)
        items["depths"] = True
    except MonotonicityViolation:
        items["depths"] = False
    cond = True
    for i, ph in enumerate(datum.phis):
        if ph is None:
            if not (T.case == "B" and i == T.d):
                cond = False
            continue
        triv_from, live_at = _depth_levels(datum, i)
        vals = list(zip(ph.gens, ph.values))
        if any(v != 0 for (k, _), v in vals if k >= triv_from):
            cond = False
        if not any(v != 0 for (k, _), v in vals if k >= live_at):
            cond = False
        if not ph.is_character():
            cond = False
    items["conductors"] = cond
    ge = []
    for i in range(T.d):
        c = datum.cs[i]
        try:
            r = check_GE1(c, T.fields[i], T.fields[i + 1])
            ge.append(r.ge1)
        except NotMinimal:
            ge.append(False)
    items["GE1"] = all(ge)
    items["GE1_levels"] = ge
    items["GE2"] = "type A: no torsion primes for the dual root datum"
    items["rho"] = f"label {datum.rho_label}: cuspidal of GL_f(k_E), extension to E^x A_0^x cited"
    items["ok"] = all(v for k, v in items.items() if isinstance(v, bool))
    return items


# ------------------------------------------------------------------ hat characters

def hat_value(datum: YuDatum, i: int, tup) -> Fraction:
    """phi_i o det on factors j <= i, psi(tr(c_i s_i(g_j - 1))) on factors j > i."""
    T = datum.tower
    o = T.order
    one = o.one()
    ph = datum.phis[i]
    if ph is None:
        return Fraction(0)
    alg = T.algs[i]
    cm = o.mat(datum.cs[i])
    total = Fraction(0)
    for j, g in enumerate(tup):
        if j <= i:
            total += ph(alg.det(g))
        else:
            total += psi_A(cm * alg.corestriction(g - one))
    return qz(total)


def hat_product(datum: YuDatum, tup) -> Fraction:
    return qz(sum(hat_value(datum, i, tup) for i in range(len(datum.phis))))


def _orthogonality(datum: YuDatum, K: bridge.KGroups) -> bool:
    """tr(c_i (1 - s_i) b) vanishes on bases of the factors beyond level i."""
    T = datum.tower
    o = T.order
    floor_v = o.wp // 2
    for i in range(min(len(datum.cs), T.d)):
        alg = T.algs[i]
        cm = o.mat(datum.cs[i])
        for f in K.plus[i + 1:]:
            for b in o.basis_mats(f.lattice):
                t = (cm * (b - alg.corestriction(b))).trace()
                if t != 0:
                    v = vp(t.numerator, o.p) - vp(t.denominator, o.p)
                    if v < floor_v - abs(cm.s) - abs(b.s):
                        return False
                    if psi_A(cm * (b - alg.corestriction(b))) != 0:
                        return False
    return True


def hat_product_equals_theta(datum: YuDatum, theta: SimpleCharacter, samples: int = 100,
                             rng: random.Random | None = None, raise_on_failure: bool = False) -> dict:
    rng = rng or random.Random(0)
    T = datum.tower
    o = T.order
    K = bridge.k_groups(T, datum.rvec)
    rep = {}
    # phi_i is pinned by theta only down to the realizable depth, so the datum is
    # compared with the canonical factorization of theta rather than its inputs
    canon = factor_theta(theta, theta.shape)
    ref = SimpleCharacter(theta.shape, canon, theta.cs)
    cong = []
    for i in range(len(canon)):
        ph = datum.phis[i]
        same = ph is not None and ph.values == canon[i].values and \
            (datum.cs[i] - theta.cs[i]).is_zero()
        cong.append(same)
    rep["congruence"] = cong
    rep["orthogonality"] = _orthogonality(datum, K)

    # level by level on random factor tuples, then on random elements of K_+
    from .characters import random_lattice_element
    mism = set()
    for _ in range(max(1, samples // 4)):
        tup = [o.one() + random_lattice_element(o, f.lattice, rng) for f in K.plus]
        lv = ref.level_values(tup)
        for i in range(len(lv)):
            if hat_value(datum, i, tup) != lv[i]:
                mism.add(i)
    rep["level_mismatches"] = sorted(mism)
    H1 = K.lattice("plus")
    bad = 0
    for _ in range(samples):
        g = o.one() + random_lattice_element(o, H1, rng)
        parts = bridge._peel(T, g, K.plus, False)
        if hat_product(datum, parts) != theta.on_matrix(g):
            bad += 1
    rep["samples"] = samples
    rep["sample_mismatches"] = bad
    rep["ok"] = all(cong) and rep["orthogonality"] and not mism and bad == 0
    if raise_on_failure and not rep["ok"]:
        raise Mismatch(f"levels {sorted(mism)}; {bad} sample mismatches")
    return rep
