from fractions import Fraction
from math import inf

import pytest

from oracles import brute_k0, mat_mul, ramified_quadratic
from strata_lab.errors import ConstructionFailed
from strata_lab.orders import StandardOrder
from strata_lab.padic import make_tower
from strata_lab.strata import (Stratum, approx_sequence, equivalent, frak_N_k, is_minimal,
                               is_pure, is_simple, k0, purity_report, verify_sequence)


@pytest.fixture(scope="module")
def q3_sqrt3():
    return make_tower(3, [("totally_tame", 2, 1)])


def _matrix_of(exps, p):
    """Rational matrix of sum pi^e over exps in the (1, pi) basis."""
    pi, one = ramified_quadratic(p)
    pinv = [[Fraction(0), Fraction(1)], [Fraction(1, p), Fraction(0)]]
    total = [[Fraction(0)] * 2 for _ in range(2)]
    for e in exps:
        m, base = one, (pi if e > 0 else pinv)
        for _ in range(abs(e)):
            m = mat_mul(m, base)
        total = [[total[i][j] + m[i][j] for j in range(2)] for i in range(2)]
    return total


# frozen from the enumeration oracle in tests/oracles.py
K0_TABLE = [((-1,), 1, -1), ((-3,), 3, -3), ((-2, -1), 2, -1), ((-4, -1), 4, -1),
            ((-3, -1), 3, -3), ((-4, -3), 4, -3)]


@pytest.mark.parametrize("exps,n,expected", K0_TABLE)
def test_k0_against_frozen_enumeration(q3_sqrt3, exps, n, expected):
    E = q3_sqrt3
    o = StandardOrder(E, 1)
    beta = sum((E.monomial(0, e) for e in exps[1:]), E.monomial(0, exps[0]))
    assert -o.nu(o.mat(beta)) == n
    assert k0(beta, o) == expected


@pytest.mark.slow
@pytest.mark.parametrize("exps,n,expected", K0_TABLE[:3])
def test_enumeration_oracle_reproduces_table(exps, n, expected):
    assert brute_k0(_matrix_of(exps, 3), n, 3) == expected


def test_k0_trivial_cases(q5_sqrt5):
    o = StandardOrder(q5_sqrt5, 1)
    assert k0(q5_sqrt5.from_rational(Fraction(1, 5)), o) == -inf
    assert k0(q5_sqrt5.pi.inverse(), o) == -1


def test_nk_is_whole_order_below_minus_n(q5_sqrt5):
    o = StandardOrder(q5_sqrt5, 2)
    beta = q5_sqrt5.pi**-3
    A = o.radical_power(0)
    assert frak_N_k(beta, -3, o).equals(A)
    assert not A.equals(frak_N_k(beta, -2, o))
    assert frak_N_k(q5_sqrt5.from_int(7), 5, o).equals(A)


def test_purity_and_simplicity(q5_sqrt5):
    o = StandardOrder(q5_sqrt5, 1)
    beta = q5_sqrt5.pi.inverse()
    S = Stratum(o, 1, 0, beta)
    assert purity_report(S) == {"field": True, "normalizer": True, "valuation": True}
    assert is_pure(S) and is_simple(S)
    o2 = StandardOrder(q5_sqrt5, 2)
    T = Stratum(o2, 3, 1, q5_sqrt5.pi**-3 + q5_sqrt5.pi**-1)
    assert is_simple(T)
    boundary = Stratum(o2, 4, 3, q5_sqrt5.pi**-3)
    assert not is_pure(boundary)     # valuation -3 is not -4


def test_simplicity_boundary(q3_sqrt3):
    o = StandardOrder(q3_sqrt3, 1)
    beta = q3_sqrt3.monomial(0, -2) + q3_sqrt3.monomial(0, -1)
    assert k0(beta, o) == -1
    assert is_simple(Stratum(o, 2, 0, beta))
    assert not is_simple(Stratum(o, 2, 1, beta))     # r = -k0


def test_minimality(q3_f2e4, q5_sqrt5):
    assert is_minimal(q3_f2e4.pi)
    assert is_minimal(q3_f2e4.monomial(1, -3))
    assert is_minimal(q3_f2e4.pi**4)                   # 3 zeta^-1, minimal in the unramified subfield
    assert not is_minimal(q3_f2e4.pi**-2 + q3_f2e4.pi**-1)   # gcd(2, 4) != 1
    assert not is_minimal(q5_sqrt5.pi**-2 + q5_sqrt5.pi**-1)


def test_equivalence(q5_sqrt5):
    o = StandardOrder(q5_sqrt5, 1)
    b = q5_sqrt5.pi**-3
    S1 = Stratum(o, 3, 1, b)
    S2 = Stratum(o, 3, 1, b + q5_sqrt5.pi**-1)
    S3 = Stratum(o, 3, 1, b + q5_sqrt5.pi**-2)
    assert equivalent(S1, S1) and equivalent(S1, S2) and not equivalent(S1, S3)


def test_approximation_of_minimal_element(q3_f2e4):
    # pi^-3 generates the whole tower, so zeta pi^-1 does not lower k0: a single level
    E = q3_f2e4
    o = StandardOrder(E, 1)
    beta = E.monomial(0, -3) + E.monomial(1, -1)
    assert k0(beta, o) == -3
    seq = approx_sequence(beta, o)
    assert (seq.s, seq.case, seq.rs) == (0, "B", [0])


def test_two_level_chain():
    E = make_tower(3, [("unramified", 2), ("totally_tame", 2, "zeta")], abs_prec=20)
    o = StandardOrder(E, 1)
    beta = E.from_rational(Fraction(1, 9)) + E.monomial(0, -2) + E.monomial(1, -1)
    seq = approx_sequence(beta, o)
    assert (seq.s, seq.case, seq.rs) == (2, "A", [0, 1, 2])
    assert [L.degree for L in seq.fields] == [4, 2, 1]
    assert all(verify_sequence(seq).values())
    assert seq.d == 2


def test_approximation_rejects_integral(q5_sqrt5):
    with pytest.raises(ConstructionFailed):
        approx_sequence(q5_sqrt5.one() + q5_sqrt5.pi, StandardOrder(q5_sqrt5, 1))
