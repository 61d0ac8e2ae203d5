import pytest

from oracles import multiplicative_order
from strata_lab.residue import _primitive_modulus, residue_field


@pytest.mark.parametrize("p,f,expected", [
    (3, 2, (2, 1, 1)),
    (5, 3, (2, 0, 1, 1)),
    (7, 6, (3, 0, 0, 0, 1, 1, 1)),
    (3, 8, (2, 0, 0, 0, 0, 1, 0, 0, 1)),
])
def test_primitive_moduli(p, f, expected):
    assert _primitive_modulus(p, f) == expected


@pytest.mark.parametrize("p,f", [(3, 2), (5, 2), (3, 4), (7, 2)])
def test_generator_has_full_order(p, f):
    k = residue_field(p, f)
    order = multiplicative_order(k.generator, k.mul, k.one())
    assert order == k.q - 1
    assert all(k.exp(k.log(x)) == x for x in k.exp_table[:50])


def test_subfield_degrees():
    k = residue_field(3, 4)
    assert k.degree(k.one()) == 1
    assert k.degree(k.exp(10)) == 2     # 10 divides 80 = 81 - 1, order 8 lies in F_9
    assert k.degree(k.generator) == 4
