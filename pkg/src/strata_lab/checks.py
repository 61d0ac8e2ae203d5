"""Per-instance property checks.

Each check takes a :class:`~strata_lab.sampling.Sample` (or a tower spec), a private RNG and
the precision policy, and returns ``(ok, witness)`` where the witness holds only exact,
JSON-ready data.  Exceptions are left to the caller, which turns them into fail verdicts.
"""

from __future__ import annotations

import random
from itertools import combinations

from . import bridge
from .characters import (build_theta, check_axioms, factor_theta, group_shape, multiply,
                         random_factor_tuple, random_lattice_element, sample_theta)
from .embed import all_embeddings, splitting_tower
from .generic import (ce_inclusion_check, check_GE1, galois_valuation_property, in_CE,
                      minimal_via_sr, sr, sr_elem)
from .padic import Tower
from .sampling import PrecisionPolicy, Sample, build
from .strata import (Stratum, approx_sequence, field_over, is_minimal, is_simple, k0,
                     verify_sequence)
from . import yu


def _s(x):
    return str(x)


# ------------------------------------------------------------------ strata

def minimal_k0_simple(smp: Sample, rng, policy):
    """minimal <=> k0 = -n <=> simple, for the pure stratum [A, n, n-1, beta]."""
    o = smp.order()
    beta = smp.beta
    n = -o.nu(o.mat(beta))
    S = Stratum(o, n, n - 1, beta)
    mi = is_minimal(beta)
    kk = S.k0()
    si = is_simple(S)
    ok = mi == (kk == -n) == si
    return ok, {"n": n, "minimal": mi, "k0": _s(kk), "simple": si}


def approximation(smp: Sample, rng, policy: PrecisionPolicy):
    """Recheck every chain condition, then rebuild at doubled precision and compare k0 values."""
    o = smp.order()
    seq = approx_sequence(smp.beta, o, verify=False)
    rep = verify_sequence(seq)
    hi = smp.at_precision(policy.doubled())
    seq2 = approx_sequence(hi.beta, hi.order(), verify=False)
    stable = seq2.rs == seq.rs and seq2.case == seq.case
    want = smp.extra.get("s"), smp.extra.get("case")
    shape_ok = want == (None, None) or want == (seq.s, seq.case)
    ok = all(rep.values()) and stable and shape_ok
    return ok, {"conditions": rep, "r": seq.rs, "case": seq.case, "s": seq.s,
                "stable_under_doubling": stable, "requested_shape_met": shape_ok}


def modification(smp: Sample, rng, policy):
    """For [A, n, r, beta] simple and b of valuation -r with [B_beta, r, r-1, b] simple."""
    E = smp.E
    o = smp.order()
    beta = smp.beta
    n = -o.nu(o.mat(beta))
    r = smp.extra["r"]
    b = E.monomial(*smp.extra["b"])
    Eb = field_over(E.prime, [beta])
    inside = Eb.contains(b)
    gamma = beta + b
    simple = is_simple(Stratum(o, n, r - 1, gamma))
    fields_ok = field_over(E.prime, [gamma]) == field_over(E.prime, [beta, b])
    kg, kb = k0(gamma, o), k0(beta, o)
    expected = kb if inside else -r
    ok = simple and fields_ok and kg == expected
    return ok, {"n": n, "r": r, "b_in_field": inside, "simple": simple, "fields_equal": fields_ok,
                "k0_sum": _s(kg), "k0_expected": _s(expected)}


# ------------------------------------------------------------------ standard representatives

def sr_minimality(smp: Sample, rng, policy):
    via_sr = minimal_via_sr(smp.beta)
    direct = is_minimal(smp.beta)
    return via_sr == direct, {"via_sr": via_sr, "direct": direct}


def sr_axioms(E: Tower, rng: random.Random, count: int = 1000):
    """nu(sr(c) - c) > nu(c) and sr(sr(c)) = sr(c) on random nonzero elements."""
    bad_def = bad_idem = 0
    done = 0
    while done < count:
        lo = rng.randint(-2 * E.e, 2 * E.e)
        c = E.random_elem(rng, lo, lo + 3 * E.e)
        if c.is_zero():
            continue
        done += 1
        m = sr_elem(c)
        d = m - c
        if not (d.is_zero() or d.val() > c.val()):
            bad_def += 1
        if sr(m) != sr(c) or not in_CE(m):
            bad_idem += 1
    return bad_def == bad_idem == 0, {"elements": done, "defining_failures": bad_def,
                                      "idempotence_failures": bad_idem}


def monomial_group(E: Tower, rng: random.Random, monomials: int = 12):
    """Inclusion along subfield pairs, Galois stability and the conjugate-difference valuation."""
    subs = list(E.subfields())
    incl = []
    for L, L2 in combinations(subs, 2):
        for a, b in ((L, L2), (L2, L)):
            if a.is_subfield_of(b):
                incl.append(ce_inclusion_check(a, b))
    embs = all_embeddings(E)
    Om = splitting_tower(E.key)
    stable = True
    for L in subs:
        for g in (L.varpi, L.eta):
            for s in embs:
                if not in_CE(s(g)):
                    stable = False
    checked = failures = 0
    for _ in range(monomials):
        x = E.monomial(rng.randrange(E.q - 1), rng.randint(-2 * E.e, 2 * E.e))
        for s1, s2 in combinations(embs, 2):
            res = galois_valuation_property(x, s1, s2)
            if res is None:
                continue
            checked += 1
            failures += not res
    ok = all(incl) and stable and failures == 0
    return ok, {"inclusion_pairs": len(incl), "inclusion_ok": all(incl), "galois_stable": stable,
                "omega": list(Om.key[:3]), "difference_pairs": checked,
                "difference_failures": failures}


# ------------------------------------------------------------------ characters

def character_factorization(smp: Sample, rng, policy, evaluations: int = 100):
    """build(factor(theta)) = theta on random elements; theta is the sum of its levels."""
    o = smp.order()
    seq = approx_sequence(smp.beta, o)
    shape = group_shape(seq)
    theta = sample_theta(shape, rng)
    axioms = check_axioms(theta, rng, samples=8)
    theta2 = build_theta(shape, factor_theta(theta, shape))
    H = shape.h_lattice()
    one = o.one()
    roundtrip_bad = levels_bad = mult_bad = 0
    for _ in range(evaluations):
        g = one + random_lattice_element(o, H, rng)
        if theta.on_matrix(g) != theta2.on_matrix(g):
            roundtrip_bad += 1
    for _ in range(max(4, evaluations // 10)):
        tup = random_factor_tuple(shape, rng)
        lv = theta.level_values(tup)
        if sum(lv) % 1 != theta(tup) or theta.on_matrix(multiply(tup)) != theta(tup):
            levels_bad += 1
        g = one + random_lattice_element(o, H, rng)
        h = one + random_lattice_element(o, H, rng)
        if theta.on_matrix(g * h) != (theta.on_matrix(g) + theta.on_matrix(h)) % 1:
            mult_bad += 1
    ok = axioms["ok"] and roundtrip_bad == levels_bad == mult_bad == 0
    return ok, {"s": seq.s, "case": seq.case, "axioms": axioms["ok"],
                "axiom_failures": [list(f) for f in axioms["failures"]],
                "evaluations": evaluations, "roundtrip_mismatches": roundtrip_bad,
                "level_sum_mismatches": levels_bad, "multiplicativity_failures": mult_bad}


# ------------------------------------------------------------------ filtrations and groups

def _tower(smp: Sample):
    seq = approx_sequence(smp.beta, smp.order())
    return bridge.build_tower(seq)


def filtration_dictionary(smp: Sample, rng, policy, mutations: bool = True):
    """Every dictionary row as a two-sided containment; each single-row mutation fails that row only."""
    T = _tower(smp)
    rep = bridge.verify_filt_dictionary(T, rng=rng)
    positions = [(r["level"], r["row"]) for r in rep["rows"]]
    mut_bad = []
    if mutations:
        for pos in positions:
            m = bridge.verify_filt_dictionary(T, mutate=pos, rng=rng)
            if m["failed"] != [pos]:
                mut_bad.append(list(pos))
    ok = rep["ok"] and not mut_bad
    return ok, {"d": T.d, "case": T.case, "rows": len(rep["rows"]),
                "failed": [list(x) for x in rep["failed"]],
                "mutations_tried": len(positions) if mutations else 0,
                "mutation_anomalies": mut_bad,
                "fingerprints": [[r["name"], r["level"], r["fingerprints"][0]] for r in rep["rows"]]}


def index_ladder(smp: Sample, rng, policy):
    L = bridge.index_ladder(_tower(smp))
    return L.product_ok and L.even_ok, L.to_dict()


def group_equalities(smp: Sample, rng, policy, samples: int = 10):
    T = _tower(smp)
    rep = bridge.verify_group_equalities(T, samples=samples, rng=rng)
    keys = ("i", "ii", "iii", "head", "inclusions", "membership_i", "membership_ii")
    w = {k: rep[k] for k in keys}
    w["exponents_plus"] = rep["exponents_plus"]
    w["exponents_circ"] = rep["exponents_circ"]
    return rep["ok"], w


# ------------------------------------------------------------------ Yu data

def _datum(smp: Sample, rng):
    seq = approx_sequence(smp.beta, smp.order())
    theta = sample_theta(group_shape(seq), rng)
    return seq, theta, yu.assemble(seq, theta, rng=rng)


def genericity(smp: Sample, rng, policy):
    """Every c_i below the top level is generic over E_(i+1) inside E_i."""
    seq = approx_sequence(smp.beta, smp.order())
    T = bridge.build_tower(seq)
    levels = []
    for i in range(T.d):
        rep = check_GE1(seq.cs[i], T.fields[i], T.fields[i + 1])
        levels.append(rep.to_dict())
    ok = all(x["ge1"] for x in levels)
    return ok, {"d": T.d, "case": T.case, "levels": levels}


def yu_datum(smp: Sample, rng, policy):
    seq, theta, D = _datum(smp, rng)
    v = yu.validate(D)
    return v["ok"], {k: v[k] for k in v if isinstance(v[k], (bool, list))} | {"datum": D.to_dict()}


def hat_product(smp: Sample, rng, policy, samples: int = 100):
    seq, theta, D = _datum(smp, rng)
    rep = yu.hat_product_equals_theta(D, theta, samples=samples, rng=rng)
    return rep["ok"], rep
