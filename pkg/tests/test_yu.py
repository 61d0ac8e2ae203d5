import random
from fractions import Fraction

import pytest

from strata_lab import yu
from strata_lab.characters import SimpleCharacter, group_shape, sample_theta
from strata_lab.errors import NotMaximal
from strata_lab.orders import StandardOrder
from strata_lab.padic import make_tower
from strata_lab.strata import approx_sequence


def _seq(p, steps, m, make, prec=None):
    E = make_tower(p, steps, abs_prec=prec) if prec else make_tower(p, steps)
    return approx_sequence(make(E), StandardOrder(E, m))


@pytest.fixture(scope="module")
def two_level():
    def beta(E):
        return E.from_rational(Fraction(1, 9)) + E.monomial(0, -2) + E.monomial(1, -1)
    seq = _seq(3, [("unramified", 2), ("totally_tame", 2, "zeta")], 1, beta, prec=20)
    theta = sample_theta(group_shape(seq), random.Random(4))
    return seq, theta, yu.assemble(seq, theta, rng=random.Random(4))


@pytest.fixture(scope="module")
def q5_case_b():
    seq = _seq(5, [("totally_tame", 2, 1)], 1, lambda E: E.pi**-3)
    theta = sample_theta(group_shape(seq), random.Random(2))
    return seq, theta, yu.assemble(seq, theta, rng=random.Random(2))


@pytest.mark.parametrize("name", ["two_level", "q5_case_b"])
def test_validate(name, request):
    _, _, D = request.getfixturevalue(name)
    v = yu.validate(D)
    assert v["ok"], v
    assert all(v["GE1_levels"])


def test_case_b_tail_is_trivial(q5_case_b):
    _, _, D = q5_case_b
    assert D.phis[-1] is None and D.d == 1
    assert D.rvec == [Fraction(3, 2), Fraction(3, 2)]


@pytest.mark.parametrize("name", ["two_level", "q5_case_b"])
def test_hat_product_equals_theta(name, request):
    _, theta, D = request.getfixturevalue(name)
    rep = yu.hat_product_equals_theta(D, theta, samples=40, rng=random.Random(7))
    assert rep["ok"], rep
    assert rep["sample_mismatches"] == 0


def test_perturbed_c_is_detected_at_level_zero(two_level):
    seq, theta, D = two_level
    E = seq.order.E
    bad = yu.YuDatum(D.tower, D.rvec, D.rho_label, D.phis, [D.cs[0] + E.pi**-3] + D.cs[1:])
    rep = yu.hat_product_equals_theta(bad, theta, samples=20, rng=random.Random(1))
    assert not rep["ok"]
    assert rep["congruence"][0] is False
    assert 0 in rep["level_mismatches"]


def test_reordered_depths_fail_validation(two_level):
    _, _, D = two_level
    bad = yu.YuDatum(D.tower, list(reversed(D.rvec)), D.rho_label, D.phis, D.cs)
    v = yu.validate(bad)
    assert not v["depths"] and not v["ok"]


def test_non_maximal_order_is_rejected():
    seq = _seq(3, [("unramified", 2), ("totally_tame", 2, 1)], 1, lambda E: E.monomial(1, -2))
    assert seq.fields[0].eL < seq.order.e
    theta = sample_theta(group_shape(seq), random.Random(0))
    with pytest.raises(NotMaximal):
        yu.assemble(seq, theta)


def test_kappa_dimensions_are_square_roots(two_level):
    _, _, D = two_level
    assert all(x >= 1 for x in D.kappa_dims)
    assert D.to_dict()["r"] == [str(x) for x in D.rvec]
