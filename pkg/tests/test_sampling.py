import random

import pytest

from strata_lab.errors import ConfigError
from strata_lab.padic import field_of_monomials
from strata_lab.sampling import (PRECISION_ENV, PrecisionPolicy, TowerSpec, build, sample_chains,
                                 sample_from_descriptor, sample_modification_pairs, sample_pure,
                                 tower_grid)
from strata_lab.strata import approx_sequence


def test_policy_defaults_and_doubling():
    pol = PrecisionPolicy(1)
    assert pol.abs_prec(5, 2) == 22
    assert pol.doubled().abs_prec(5, 2) == 44
    pinned = PrecisionPolicy(1, 30)
    assert pinned.abs_prec(99, 99) == 30 and pinned.doubled().pinned == 60


def test_policy_from_env(monkeypatch):
    monkeypatch.delenv(PRECISION_ENV, raising=False)
    assert PrecisionPolicy.from_env(3).pinned is None
    monkeypatch.setenv(PRECISION_ENV, "40")
    assert PrecisionPolicy.from_env().abs_prec(1, 1) == 40
    monkeypatch.setenv(PRECISION_ENV, "x")
    with pytest.raises(ConfigError):
        PrecisionPolicy.from_env()
    monkeypatch.setenv(PRECISION_ENV, "3")
    with pytest.raises(ConfigError):
        PrecisionPolicy.from_env()


def test_tower_grid_is_tame_and_bounded():
    grid = tower_grid([3, 5, 7], 4, 2, 6)
    assert grid
    assert all(s.e % s.p and 1 < s.e * s.f <= 6 for s in grid)
    assert TowerSpec(3, 2, 2, "zeta") in grid
    assert all(s.e != 3 for s in grid if s.p == 3)


def test_descriptor_roundtrip():
    rng = random.Random(0)
    specs = tower_grid([5], 2, 2, 4)
    pol = PrecisionPolicy()
    for smp in sample_pure(specs, pol, 4, 6, rng):
        again = sample_from_descriptor(smp.descriptor(), pol)
        assert again.digits == smp.digits and again.m == smp.m
        assert (again.beta - smp.beta).is_zero()


def test_pure_samples_avoid_base_field():
    specs = tower_grid([3], 2, 2, 4)
    for smp in sample_pure(specs, PrecisionPolicy(), 4, 10, random.Random(1)):
        assert field_of_monomials(smp.E, smp.digits).degree > 1


@pytest.mark.parametrize("pattern", [(0, "A"), (0, "B"), (1, "A"), (1, "B"), (2, "A")])
def test_chain_shapes_are_met(pattern):
    specs = tower_grid([3, 5], 4, 2, 4)
    out = sample_chains(specs, PrecisionPolicy(), 4, [pattern], 3, random.Random(5))
    assert len(out) == 3
    for smp in out:
        seq = approx_sequence(smp.beta, smp.order())
        assert (seq.s, seq.case) == pattern


def test_modification_pairs_alternate():
    specs = tower_grid([3, 5], 4, 2, 4)
    out = sample_modification_pairs(specs, PrecisionPolicy(), 4, 6, random.Random(2))
    assert len(out) == 6
    assert [s.extra["b_in_field"] for s in out] == [True, False] * 3


def test_build_respects_spec():
    E = build(TowerSpec(5, 2, 2, "zeta"), PrecisionPolicy())
    assert (E.p, E.f, E.e) == (5, 2, 2)
