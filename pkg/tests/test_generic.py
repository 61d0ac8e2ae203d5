import random
from itertools import combinations

import pytest

from strata_lab.embed import all_embeddings, conjugate_degree, embeddings
from strata_lab.errors import NotMinimal, ZeroElement
from strata_lab.generic import (CEMonomial, ce_inclusion_check, check_GE1,
                                galois_valuation_property, in_CE, minimal_via_sr, sr)
from strata_lab.padic import make_tower
from strata_lab.strata import is_minimal


def test_sr_basic(q3_f2e4):
    E = q3_f2e4
    assert sr(E.pi) == CEMonomial(0, 1)
    assert sr(E.monomial(1, 3) * (E.one() + E.pi)) == CEMonomial(1, 3)
    with pytest.raises(ZeroElement):
        sr(E.zero())


def test_sr_of_six_digit_element(q3_f2e4):
    E = q3_f2e4
    rng = random.Random(11)
    x = E.zero()
    for v in range(-2, 4):
        x = x + E.monomial(rng.randrange(8), v)
    # exhaustive search over C_E monomials of the same valuation
    v = x.val()
    closer = [k for k in range(E.q - 1) if (x - E.monomial(k, v)).val() > v]
    assert closer == [7]
    assert sr(x) == CEMonomial(7, -2)


def test_monomial_group_inclusions(q3_f2e4):
    E = q3_f2e4
    for L in E.subfields():
        assert ce_inclusion_check(E.prime, L)
        assert ce_inclusion_check(L, L)
        assert ce_inclusion_check(L, E.whole)
    assert in_CE(E.monomial(5, -7), E.whole)
    assert not in_CE(E.one() + E.pi)


def test_embedding_count(q3_f2e4):
    assert len(all_embeddings(q3_f2e4)) == 8
    E5 = make_tower(5, [("totally_tame", 2, 1)])
    embs = all_embeddings(E5)
    assert len(embs) == 2
    images = {tuple(s(E5.pi).c) for s in embs}
    assert len(images) == 2          # pi and -pi


def test_galois_difference_valuation(q3_f2e4):
    E = q3_f2e4
    embs = all_embeddings(E)
    assert galois_valuation_property(E.pi, embs[0], embs[0]) is None
    rng = random.Random(3)
    for _ in range(6):
        s = E.monomial(rng.randrange(8), rng.randint(-4, 4))
        for s1, s2 in combinations(embs, 2):
            assert galois_valuation_property(s, s1, s2) in (None, True)


def test_conjugate_degree_matches_field_degree(q3_f2e4):
    E = q3_f2e4
    assert conjugate_degree(E.pi) == 8
    assert conjugate_degree(E.pi**4) == 2
    assert conjugate_degree(E.from_int(3)) == 1


def test_minimal_via_sr(q3_f2e4):
    E = q3_f2e4
    assert minimal_via_sr(E.monomial(1, -3))
    assert minimal_via_sr(E.from_int(9)) == is_minimal(E.from_int(9))
    b = E.pi**-2 + E.pi**-1
    assert minimal_via_sr(b) == is_minimal(b) is False


def test_genericity_levels():
    E = make_tower(3, [("unramified", 2), ("totally_tame", 2, "zeta")], abs_prec=20)
    # degree-one extension: no pairs to compare
    rep = check_GE1(E.monomial(1, -1), E.whole, E.whole)
    assert rep.ge1 and rep.pairs == []
    # c = zeta pi^-1 over the base field
    c = E.monomial(1, -1)
    rep = check_GE1(c, E.whole, E.prime)
    assert rep.ge1 and len(rep.pairs) == 6
    assert all(o1 == o2 for _, _, o1, o2 in rep.pairs)
    # a uniformizer over a subfield of index 2 in the ramification
    L = [K for K in E.subfields() if K.fL == 2 and K.eL == 1][0]
    assert check_GE1(E.pi, E.whole, L).ge1
    assert sum(len(g) for g in embeddings(E.whole, L).values()) == 4


def test_genericity_fails_for_non_minimal():
    E = make_tower(5, [("totally_tame", 2, 1)])
    c = E.pi**-2 + E.pi**-1
    with pytest.raises(NotMinimal):
        check_GE1(c, E.whole, E.prime)
    assert not check_GE1(c, E.whole, E.prime, require_minimal=False).ge1
