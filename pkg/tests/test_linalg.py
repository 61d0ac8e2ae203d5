import random

import pytest

from oracles import bareiss_det, vp
from strata_lab import _snf_py, linalg
from strata_lab.linalg import Lattice, diagonal_lattice, smith


def _rand(rng, n, p):
    return [[rng.randrange(-50, 50) * p ** rng.choice((0, 0, 1)) for _ in range(n)] for _ in range(n)]


def test_smith_valuations_match_determinant():
    rng = random.Random(4)
    for p in (3, 5, 7):
        for _ in range(20):
            a = _rand(rng, 4, p)
            d = bareiss_det(a)
            if d == 0:
                continue
            res = smith(a, p, 30)
            assert sum(res.vals) == vp(d, p)


def test_fixed_smith_form():
    a = [[3, 0, 9], [6, 1, 0], [0, 0, 27]]
    assert sorted(smith(a, 3, 10).vals) == [0, 1, 3]


@pytest.mark.skipif(linalg._snf_c is None, reason="compiled kernel not built")
def test_kernels_agree():
    rng = random.Random(9)
    for _ in range(30):
        a = [[rng.randrange(3**8) for _ in range(5)] for _ in range(6)]
        v1, L1, Li1, R1 = _snf_py.smith_mod(a, 3, 8, True, True, True)
        v2, L2, Li2, R2 = linalg._snf_c.smith_mod(a, 3, 8, True, True, True)
        assert v1 == v2


def test_transforms_diagonalise():
    rng = random.Random(2)
    p, c = 5, 6
    M = p**c
    a = [[rng.randrange(M) for _ in range(4)] for _ in range(5)]
    res = smith(a, p, c, left=True, right=True)
    d = linalg.matmul(linalg.matmul(res.L, a, M), res.R, M)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            want = p ** res.vals[i] % M if i == j and res.vals[i] < c else 0
            assert x % M == want


def test_lattice_index():
    big = diagonal_lattice(3, [0, 0, 0], 20)
    small = diagonal_lattice(3, [1, 2, 0], 20)
    assert big.contains(small) and not small.contains(big)
    assert small.index_in(big) == 3
    s = Lattice.from_generators(3, 3, [[3, 0, 0], [0, 9, 0], [0, 0, 1], [3, 9, 1]], 0, 20)
    assert s.equals(small)
