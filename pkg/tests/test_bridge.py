import random
from fractions import Fraction

import pytest

from strata_lab import bridge
from strata_lab.errors import MonotonicityViolation
from strata_lab.orders import StandardOrder
from strata_lab.padic import make_tower
from strata_lab.strata import approx_sequence


def _tower(p, steps, m, make, prec=None):
    E = make_tower(p, steps, abs_prec=prec) if prec else make_tower(p, steps)
    seq = approx_sequence(make(E), StandardOrder(E, m))
    return bridge.build_tower(seq)


@pytest.fixture(scope="module")
def two_level():
    def beta(E):
        return E.from_rational(Fraction(1, 9)) + E.monomial(0, -2) + E.monomial(1, -1)
    return _tower(3, [("unramified", 2), ("totally_tame", 2, "zeta")], 1, beta, prec=20)


@pytest.fixture(scope="module")
def q5_minimal():
    return _tower(5, [("totally_tame", 2, 1)], 1, lambda E: E.pi**-1)


def test_exponent_for():
    assert bridge.exponent_for(4, Fraction(3, 4), plus=False) == 3
    assert bridge.exponent_for(4, Fraction(3, 4), plus=True) == 4
    assert bridge.exponent_for(2, Fraction(1, 3), plus=False) == 1
    assert bridge.exponent_for(2, Fraction(1, 3), plus=True) == 1


def test_depth_vector_minimal(q5_minimal):
    T = q5_minimal
    assert (T.d, T.case) == (1, "B")
    assert bridge.depth_vector(T.seq) == [Fraction(1, 2), Fraction(1, 2)]


def test_depth_vector_two_level(two_level):
    assert two_level.case == "A" and two_level.d == 2
    r = bridge.depth_vector(two_level.seq)
    assert r == sorted(r) and len(set(r)) == 3
    assert [x * two_level.e_chain for x in r] == [1, 2, 4]


def test_check_depths_rules():
    bridge.check_depths([Fraction(1, 2), Fraction(1)], "A")
    bridge.check_depths([Fraction(1, 2), Fraction(1, 2)], "B")
    with pytest.raises(MonotonicityViolation):
        bridge.check_depths([Fraction(1), Fraction(1, 2)], "A")
    with pytest.raises(MonotonicityViolation):
        bridge.check_depths([Fraction(1, 2), Fraction(1)], "B")
    with pytest.raises(MonotonicityViolation):
        bridge.check_depths([Fraction(0), Fraction(1)], "A")


@pytest.mark.parametrize("name", ["two_level", "q5_minimal"])
def test_filtration_dictionary_and_mutations(name, request):
    T = request.getfixturevalue(name)
    rng = random.Random(0)
    rep = bridge.verify_filt_dictionary(T, rng=rng)
    assert rep["ok"], rep["failed"]
    positions = [(r["level"], r["row"]) for r in rep["rows"]]
    for pos in positions:
        assert bridge.verify_filt_dictionary(T, mutate=pos, rng=rng)["failed"] == [pos]


def test_two_level_has_all_eight_rows(two_level):
    rep = bridge.verify_filt_dictionary(two_level)
    assert len({r["row"] for r in rep["rows"]}) == 8


# [J^1 : H^1] frozen from a hand count of |P / (P^2 + P_beta)|
LADDER = [
    (7, [("totally_tame", 3, 1)], 2, lambda E: E.pi**-2, 7**8, 7**4),
    (3, [("unramified", 2)], 2, lambda E: E.monomial(1, 0) * E.from_rational(Fraction(1, 9)), 3**8, 3**4),
    (5, [("totally_tame", 2, 1)], 1, lambda E: E.pi**-1, 1, 1),
]


@pytest.mark.parametrize("p,steps,m,make,index,dim", LADDER)
def test_index_ladder_frozen(p, steps, m, make, index, dim):
    L = bridge.index_ladder(_tower(p, steps, m, make))
    assert L.j1_h1 == index and L.dim == dim
    assert L.product_ok and L.even_ok


def test_index_ladder_two_level(two_level):
    L = bridge.index_ladder(two_level)
    prod = 1
    for x in L.j_indices:
        prod *= x
    assert prod == L.j1_h1 and L.even_ok


def test_group_equalities(two_level, q5_minimal):
    for T in (two_level, q5_minimal):
        rep = bridge.verify_group_equalities(T, samples=5, rng=random.Random(1))
        assert rep["i"] and rep["ii"] and rep["iii"] and rep["ok"]


def test_sabotaged_depth_breaks_second_equality(q5_minimal):
    rep = bridge.verify_group_equalities(q5_minimal, samples=3, sabotage_s=0)
    assert rep["i"] and not rep["ii"] and not rep["ok"]


def test_tower_fields_decrease(two_level):
    degs = [L.degree for L in two_level.fields]
    assert degs == sorted(degs, reverse=True) == [4, 2, 1]
    assert [two_level.rank(i) for i in range(3)] == [1, 2, 4]
