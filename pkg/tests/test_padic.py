from fractions import Fraction

import pytest

from oracles import hensel_teichmuller
from strata_lab.errors import BadTwist, NonTameStep, ZeroElement
from strata_lab.padic import (field_of_monomials, generated_field, make_tower, minimal_poly,
                              power_rank)


def test_tower_invariants(q3_f2e4):
    E = q3_f2e4
    assert (E.e, E.f, E.q, E.n) == (4, 2, 9, 8)
    # pi^4 * zeta^t = 3 re-evaluated digitwise
    assert (E.pi**4 * E.monomial(E.t, 0) - E.from_int(3)).is_zero()
    assert E.t == 1


def test_non_tame_step_rejected():
    with pytest.raises(NonTameStep):
        make_tower(3, [("totally_tame", 3, 1)])
    with pytest.raises(BadTwist):
        make_tower(5, [("totally_tame", 2, 0)])


def test_valuations(q5_sqrt5, q3_f2e4):
    E = q5_sqrt5
    assert E.pi.val() == 1
    assert E.from_int(5).val() == 2
    assert (E.one() + E.pi).val() == 0
    assert E.pi.ord_abs() == Fraction(1, 2)
    assert q3_f2e4.monomial(1, -3).ord_abs() == Fraction(-3, 4)
    with pytest.raises(ZeroElement):
        E.zero().ord_abs()


def test_teichmuller_lift_matches_hensel():
    Q5 = make_tower(5, [], abs_prec=12)
    t = Q5.teichmuller((2,))
    assert t.c[0] % 5**10 == hensel_teichmuller(2, 5, 10) == 6139557
    assert (t**4 - 1).is_zero()
    assert Q5.teichmuller((1,)) == Q5.one()
    assert Q5.teichmuller((4,)) == -Q5.one()


def test_trace_of_zeta_in_degree_two_unramified():
    E = make_tower(3, [("unramified", 2)], abs_prec=12)
    z = E.zeta
    tr = z.trace()
    conj = z + z**3          # sum of the two Frobenius conjugates
    assert tr.c[0] == conj.c[0] and conj.c[1:] == (0,)
    # zeta is a primitive 8th root of unity, so (zeta + zeta^3)^2 = -2
    assert (conj * conj + 2).is_zero()
    assert make_tower(5, [("totally_tame", 2, 1)]).pi.trace().is_zero()


def test_minimal_polynomials(q5_sqrt5, q3_f2e4):
    mp = minimal_poly(q5_sqrt5.pi)
    assert len(mp) == 3 and mp[0] == -5 and mp[1].is_zero() and mp[2] == 1
    c = q5_sqrt5.from_rational(Fraction(7, 5))
    assert len(minimal_poly(c)) == 2
    x = q3_f2e4.zeta + q3_f2e4.pi
    assert power_rank(x) == len(minimal_poly(x)) - 1 == 8


def test_subfields(q3_f2e4):
    E = q3_f2e4
    assert field_of_monomials(E, [(0, 0)]).degree == 1
    assert generated_field([E.pi]) == E.whole
    assert generated_field([E.pi**2]).degree == 4
    assert E.prime.is_subfield_of(E.whole)


def test_digits_round_trip(q3_f2e4):
    E = q3_f2e4
    x = E.monomial(3, -2) + E.monomial(5, 1) + E.monomial(0, 4)
    assert x.digits(upto=6) == [(3, -2), (5, 1), (0, 4)]
    assert x.leading() == (3, -2)
