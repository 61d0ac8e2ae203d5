"""Acceptance criteria 1-10 on an enlarged sample grid, one PASS/FAIL line each.

All comparisons are exact (tolerance 0): rationals, integers and p-adic elements
at the working precision.
"""

import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from strata_lab import checks
from strata_lab.errors import ConstructionFailed
from strata_lab.report import DEFAULT_PATTERNS, MAXIMAL_PATTERNS, RunConfig, run
from strata_lab.sampling import (PrecisionPolicy, build, sample_chains, sample_modification_pairs,
                                 sample_pure, tower_grid)

PS, MAX_E, MAX_F, MAX_N = (3, 5, 7), 4, 2, 6
SEED = 20240601


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def rng(tag, idx=0):
    return random.Random(f"{SEED}/{tag}/{idx}")


@pytest.fixture(scope="module")
def policy():
    return PrecisionPolicy()


@pytest.fixture(scope="module")
def specs():
    return tower_grid(PS, MAX_E, MAX_F, MAX_N)


@pytest.fixture(scope="module")
def pure(specs, policy):
    t = time.perf_counter()
    out = sample_pure(specs, policy, MAX_N, 220, rng("pure"))
    return out, time.perf_counter() - t


@pytest.fixture(scope="module")
def chains(specs, policy):
    return sample_chains(specs, policy, MAX_N, DEFAULT_PATTERNS, 40, rng("chains"))


@pytest.fixture(scope="module")
def maximal(specs, policy):
    return sample_chains(specs, policy, MAX_N, MAXIMAL_PATTERNS, 12, rng("maximal"), maximal_only=True)


def test_criterion_1_minimal_k0_simple(pure, policy):
    samples, t_sample = pure
    t = time.perf_counter()
    bad = [i for i, s in enumerate(samples) if not checks.minimal_k0_simple(s, None, policy)[0]]
    elapsed = t_sample + time.perf_counter() - t
    ps = sorted({s.spec.p for s in samples})
    ok = len(samples) >= 200 and not bad and elapsed < 120 and ps == list(PS)
    record(1, ok, f"{len(samples)} pure strata over p={ps}, {len(bad)} disagreements, {elapsed:.1f}s < 120s")


def test_criterion_2_minimality_via_sr(pure, policy):
    samples, _ = pure
    counts = {(True, True): 0, (False, False): 0, "disagree": 0}
    for s in samples:
        ok, w = checks.sr_minimality(s, None, policy)
        if ok:
            counts[(w["direct"], w["via_sr"])] += 1
        else:
            counts["disagree"] += 1
    ok = counts["disagree"] == 0 and counts[(True, True)] > 0 and counts[(False, False)] > 0
    record(2, ok, f"minimal both ways {counts[(True, True)]}, non-minimal both ways "
                  f"{counts[(False, False)]}, disagreements {counts['disagree']}")


def test_criterion_3_sr_axioms(specs, policy):
    bad, elements = [], 0
    for idx, spec in enumerate(specs):
        E = build(spec, policy)
        ok1, w1 = checks.sr_axioms(E, rng("sr", idx), count=1000)
        ok2, w2 = checks.monomial_group(E, rng("ce", idx))
        elements += w1["elements"]
        if not (ok1 and ok2 and w1["elements"] >= 1000):
            bad.append(spec)
    record(3, not bad, f"{len(specs)} towers, {elements} elements, inclusion/Galois/difference "
                       f"checks, failing towers {bad}")


def test_criterion_4_modification(specs, policy):
    pairs = sample_modification_pairs(specs, policy, MAX_N, 56, rng("modification"))
    bad = []
    branches = {True: 0, False: 0}
    for i, s in enumerate(pairs):
        ok, w = checks.modification(s, None, policy)
        branches[w["b_in_field"]] += 1
        if not ok:
            bad.append((i, w))
    ok = len(pairs) >= 50 and not bad and all(branches.values())
    record(4, ok, f"{len(pairs)} pairs (b inside {branches[True]}, outside {branches[False]}), "
                  f"simple + field + k0 failures {len(bad)}")


def test_criterion_5_approximation(chains, policy):
    bad, failed_constructions = [], 0
    shapes = set()
    for i, s in enumerate(chains):
        try:
            ok, w = checks.approximation(s, rng("approx", i), policy)
        except ConstructionFailed:
            failed_constructions += 1
            continue
        shapes.add((w["s"], w["case"]))
        if not ok:
            bad.append(i)
    ok = not bad and failed_constructions == 0 and shapes == set(DEFAULT_PATTERNS)
    record(5, ok, f"{len(chains)} chains, shapes {sorted(shapes)}, recheck/doubling failures "
                  f"{len(bad)}, ConstructionFailed {failed_constructions}")


def test_criterion_6_character_roundtrip(chains, policy):
    bad, evals = [], 0
    for i, s in enumerate(chains[:20]):
        ok, w = checks.character_factorization(s, rng("char", i), policy, evaluations=100)
        evals += w["evaluations"]
        if not ok:
            bad.append(i)
    record(6, not bad, f"{min(len(chains), 20)} characters, 100 elements each ({evals} total), "
                       f"roundtrip or level-sum failures {len(bad)}")


def test_criterion_7_filtration_dictionary(chains, policy):
    bad, rows, mutations = [], 0, 0
    seen_b = seen_8 = False
    for i, s in enumerate(chains):
        ok, w = checks.filtration_dictionary(s, rng("filt", i), policy)
        if w["d"] > 2:
            continue
        rows += w["rows"]
        mutations += w["mutations_tried"]
        seen_b |= w["case"] == "B" and w["rows"] >= 1
        seen_8 |= w["rows"] >= 8
        if not ok:
            bad.append((i, w["failed"], w["mutation_anomalies"]))
    ok = not bad and seen_b and seen_8
    record(7, ok, f"{rows} rows checked both ways, {mutations} single-row mutations each failing "
                  f"exactly its row, Cas B tail seen {seen_b}, failures {bad}")


def test_criterion_8_genericity(chains, policy):
    bad, levels = [], 0
    for i, s in enumerate(chains):
        ok, w = checks.genericity(s, None, policy)
        levels += len(w["levels"])
        if not ok:
            bad.append(i)
    record(8, not bad and levels > 0, f"{levels} levels c_i checked, failures {len(bad)}")


def test_criterion_9_index_ladder(chains, policy):
    bad = []
    nontrivial = 0
    for i, s in enumerate(chains):
        ok, w = checks.index_ladder(s, None, policy)
        nontrivial += int(w["J1_H1"]) > 1
        if not ok:
            bad.append(i)
    record(9, not bad and nontrivial > 0,
           f"{len(chains)} ladders, {nontrivial} with [J1:H1] > 1, product or parity failures {len(bad)}")


def test_criterion_10_groups_and_hat_product(maximal, policy):
    bad, evals = [], 0
    for i, s in enumerate(maximal):
        ok1, _ = checks.group_equalities(s, rng("groups", i), policy)
        ok2, w = checks.hat_product(s, rng("hat", i), policy, samples=100)
        evals += w["samples"]
        if not (ok1 and ok2):
            bad.append(i)
    t = time.perf_counter()
    rep = run(RunConfig())
    elapsed = time.perf_counter() - t
    ok = not bad and evals >= 100 and rep["summary"]["failed"] == 0 and elapsed < 600
    record(10, ok, f"{len(maximal)} maximal strata, {evals} hat-product evaluations, failures "
                   f"{len(bad)}; default run {rep['summary']['passed']}/{rep['summary']['instances']} "
                   f"in {elapsed:.1f}s < 600s")
