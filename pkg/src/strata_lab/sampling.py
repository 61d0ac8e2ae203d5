"""Sample grids: towers, pure strata, approximation chains with a prescribed jump pattern,
modification pairs (beta, b) and maximal strata.

Every sampled element is a finite sum of Teichmuller monomials with strictly increasing
negative valuations; the digit list is kept so an element can be rebuilt at any precision.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field

from .errors import ConfigError
from .orders import StandardOrder
from .padic import Elem, Tower, field_of_monomials, make_tower

PRECISION_ENV = "STRATA_LAB_PRECISION"


@dataclass(frozen=True)
class TowerSpec:
    p: int
    f: int
    e: int
    twist: object = 1

    def steps(self):
        out = []
        if self.f > 1:
            out.append(("unramified", self.f))
        if self.e > 1:
            out.append(("totally_tame", self.e, self.twist))
        return out

    def to_dict(self):
        return {"p": self.p, "f": self.f, "e": self.e, "twist": self.twist}

    @staticmethod
    def from_dict(d):
        return TowerSpec(int(d["p"]), int(d.get("f", 1)), int(d.get("e", 1)), d.get("twist", 1))


@dataclass
class PrecisionPolicy:
    """abs_prec = factor * (2 * (n_max + e) + 8), unless pinned by the environment."""

    factor: int = 1
    pinned: int | None = None

    def abs_prec(self, n_max: int, e: int) -> int:
        if self.pinned is not None:
            return self.pinned
        return self.factor * (2 * (n_max + e) + 8)

    def doubled(self) -> "PrecisionPolicy":
        return PrecisionPolicy(self.factor * 2, None if self.pinned is None else 2 * self.pinned)

    @staticmethod
    def from_env(factor: int = 1) -> "PrecisionPolicy":
        raw = os.environ.get(PRECISION_ENV)
        if raw is None or raw == "":
            return PrecisionPolicy(factor)
        try:
            val = int(raw)
        except ValueError as exc:
            raise ConfigError(f"{PRECISION_ENV} must be an integer") from exc
        if val < 8:
            raise ConfigError(f"{PRECISION_ENV} must be at least 8")
        return PrecisionPolicy(factor, val)


def tower_grid(ps, max_e, max_f, max_N, twists=(1, "zeta")):
    """Tame towers with e*f <= max_N, excluding Q_p itself."""
    out = []
    for p in ps:
        for f in range(1, max_f + 1):
            for e in range(1, max_e + 1):
                if e % p == 0 or e * f > max_N or e * f == 1:
                    continue
                tws = twists if (e > 1 and (f > 1 or p > 3)) else (1,)
                for tw in tws:
                    out.append(TowerSpec(p, f, e, tw))
    return out


def n_max_for(spec: TowerSpec) -> int:
    return 2 * spec.e + 1


def build(spec: TowerSpec, policy: PrecisionPolicy) -> Tower:
    return make_tower(spec.p, spec.steps(), abs_prec=policy.abs_prec(n_max_for(spec), spec.e))


def from_digits(E: Tower, digits) -> Elem:
    x = E.zero()
    for k, v in digits:
        x = x + E.monomial(k, v)
    return x


@dataclass
class Sample:
    spec: TowerSpec
    m: int
    digits: tuple
    E: Tower = field(repr=False)
    kind: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def beta(self) -> Elem:
        return from_digits(self.E, self.digits)

    def order(self) -> StandardOrder:
        return StandardOrder(self.E, self.m)

    @property
    def n(self) -> int:
        return -self.digits[0][1]

    def descriptor(self) -> dict:
        d = {"tower": self.spec.to_dict(), "m": self.m,
             "digits": [list(x) for x in self.digits], "kind": self.kind}
        if self.extra:
            d["extra"] = self.extra
        return d

    def at_precision(self, policy: PrecisionPolicy) -> "Sample":
        return Sample(self.spec, self.m, self.digits, build(self.spec, policy), self.kind, dict(self.extra))


def sample_from_descriptor(d: dict, policy: PrecisionPolicy | None = None) -> Sample:
    spec = TowerSpec.from_dict(d["tower"])
    policy = policy or PrecisionPolicy.from_env()
    E = build(spec, policy)
    digits = tuple((int(k) % (E.q - 1), int(v)) for k, v in d["digits"])
    return Sample(spec, int(d.get("m", 1)), digits, E, d.get("kind", "file"), dict(d.get("extra", {})))


def _multiplicities(spec: TowerSpec, max_N: int):
    return [m for m in range(1, max_N + 1) if m * spec.e * spec.f <= max_N]


# ------------------------------------------------------------------ pure strata [A, n, n-1, beta]

def random_digits(E: Tower, n: int, rng: random.Random, density: float = 0.5):
    digs = [(rng.randrange(E.q - 1), -n)]
    for v in range(n - 1, 0, -1):
        if rng.random() < density:
            digs.append((rng.randrange(E.q - 1), -v))
    return tuple(digs)


def sample_pure(specs, policy, max_N, count, rng, exclude_base=True):
    """Strata [A, n, n-1, beta] with beta a random negative-valuation digit string."""
    towers = {s: build(s, policy) for s in specs}
    out = []
    guard = 0
    while len(out) < count and guard < 50 * count:
        guard += 1
        spec = specs[len(out) % len(specs)] if guard <= count else rng.choice(specs)
        E = towers[spec]
        m = rng.choice(_multiplicities(spec, max_N))
        n = rng.randint(1, n_max_for(spec))
        digs = random_digits(E, n, rng)
        if exclude_base and field_of_monomials(E, digs).degree == 1:
            continue
        out.append(Sample(spec, m, digs, E, "pure"))
    return out


# ------------------------------------------------------------------ controlled jump pattern

def _monomials_at(E: Tower, v: int):
    return [(k, v) for k in range(E.q - 1)]


def chain_digits(E: Tower, jumps: int, case: str, rng: random.Random, n_max: int, tries: int = 60):
    """Digits whose prefix fields grow exactly ``jumps`` times (Cas A: after a base-field head).

    The approximation chain then has s = jumps (Cas A) or jumps - 1 (Cas B).
    Returns None when no pattern fits inside the valuation budget.
    """
    for _ in range(tries):
        n = rng.randint(1, n_max)
        vals = list(range(-n, 0))
        digs = []
        cur = E.prime
        grown = 0
        ok = True
        for idx, v in enumerate(vals):
            need_head = case == "A" and not digs
            remaining_vals = len(vals) - idx
            remaining_jumps = jumps - grown
            if need_head:
                cands = [mv for mv in _monomials_at(E, v) if cur.contains_monomial(*mv)]
                if not cands:
                    ok = False
                    break
                digs.append(rng.choice(cands))
                continue
            if idx == 0 and case == "B":
                want_grow = True
            elif remaining_jumps >= remaining_vals:
                want_grow = True
            elif remaining_jumps == 0:
                want_grow = False
            else:
                want_grow = rng.random() < 0.5
            mons = _monomials_at(E, v)
            rng.shuffle(mons)
            chosen = None
            for mv in mons:
                L = field_of_monomials(E, [d for d in digs] + [mv])
                grows = L != cur
                if grows == want_grow:
                    chosen, newL = mv, L
                    break
            if chosen is None:
                if want_grow and idx == 0:
                    ok = False
                    break
                if want_grow:
                    continue
                # skipping a position keeps the field
                continue
            if want_grow or rng.random() < 0.7:
                digs.append(chosen)
                if want_grow:
                    cur = newL
                    grown += 1
        if ok and grown == jumps and digs and (case == "A") == (field_of_monomials(E, digs[:1]).degree == 1):
            return tuple(digs)
    return None


def sample_chains(specs, policy, max_N, pattern, count, rng, maximal_only=False):
    """Samples with approximation chains of the shape given by ``pattern`` = [(s, case), ..]."""
    towers = {s: build(s, policy) for s in specs}
    out = []
    misses = {pt: 0 for pt in pattern}
    guard = 0
    while len(out) < count and guard < 40 * count:
        guard += 1
        live = [pt for pt in pattern if misses[pt] < 30]
        if not live:
            break
        s, case = live[guard % len(live)]
        jumps = s if case == "A" else s + 1
        spec = rng.choice(specs)
        E = towers[spec]
        digs = chain_digits(E, jumps, case, rng, n_max_for(spec))
        if digs is None:
            misses[(s, case)] += 1
            continue
        misses[(s, case)] = 0
        if maximal_only and field_of_monomials(E, digs).eL != E.e:
            continue
        if jumps == 0 and field_of_monomials(E, digs).degree != 1:
            continue
        m = rng.choice(_multiplicities(spec, max_N))
        out.append(Sample(spec, m, digs, E, "chain", {"s": s, "case": case}))
    return out


# ------------------------------------------------------------------ modification pairs

def sample_modification_pairs(specs, policy, max_N, count, rng):
    """(beta, r, b): [A, n, r, beta] simple and [B_beta, r, r-1, b] simple.

    Both branches (b inside F[beta] or not) are requested in alternation.
    """
    from .strata import Stratum, field_over, is_simple, k0
    towers = {s: build(s, policy) for s in specs}
    out = []
    guard = 0
    while len(out) < count and guard < 60 * count:
        guard += 1
        want_inside = len(out) % 2 == 0
        spec = rng.choice(specs)
        E = towers[spec]
        m = rng.choice(_multiplicities(spec, max_N))
        o = StandardOrder(E, m)
        n = rng.randint(2, n_max_for(spec) + 1)
        digs = random_digits(E, n, rng)
        beta = from_digits(E, digs)
        Eb = field_over(E.prime, [beta])
        if Eb.degree == 1:
            continue
        kb = k0(beta, o)
        top = -kb
        if top < 2:
            continue
        r = rng.randint(1, top - 1)
        mons = _monomials_at(E, -r)
        rng.shuffle(mons)
        for mv in mons:
            inside = Eb.contains_monomial(*mv)
            if inside != want_inside:
                continue
            b = E.monomial(*mv)
            T = Stratum(o, r, r - 1, b, o.algebra(Eb))
            if not is_simple(T):
                continue
            out.append(Sample(spec, m, digs, E, "modification",
                              {"r": r, "b": list(mv), "b_in_field": inside}))
            break
    return out
