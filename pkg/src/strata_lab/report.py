"""Run configuration, sample-grid orchestration and the deterministic JSON report."""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__, checks
from .errors import ConfigError, StrataLabError
from .sampling import (PrecisionPolicy, TowerSpec, build, sample_chains, sample_from_descriptor,
                       sample_modification_pairs, sample_pure, tower_grid)

SUITES = ("strata", "sr", "characters", "filtration", "yu")

# chain shapes (s, case) reachable inside the default grid
DEFAULT_PATTERNS = ((0, "A"), (0, "B"), (1, "A"), (1, "B"), (2, "A"))
MAXIMAL_PATTERNS = ((0, "B"), (1, "A"), (1, "B"), (2, "A"))

DEFAULT_COUNTS = {
    "pure": 40,            # pure strata [A, n, n-1, beta]
    "chains": 15,          # approximation chains with prescribed jump pattern
    "maximal": 6,          # chains whose order is maximal for F[beta]
    "modification": 20,    # (beta, b) pairs
    "sr_elements": 1000,   # random elements per tower for the sr axioms
    "evaluations": 100,    # random group elements per character or Yu datum
}


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass
class RunConfig:
    p: list = field(default_factory=lambda: [3, 5])
    max_e: int = 4
    max_f: int = 2
    max_N: int = 4
    seed: int = 0
    suites: list = field(default_factory=lambda: list(SUITES))
    precision_factor: int = 1
    counts: dict = field(default_factory=lambda: dict(DEFAULT_COUNTS))
    output: str | None = None
    jobs: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.p or not all(isinstance(x, int) and _is_prime(x) and x > 2 for x in self.p):
            raise ConfigError("p must be a non-empty list of odd primes")
        for name in ("max_e", "max_f", "max_N", "precision_factor", "jobs"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be an integer >= 1")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suites {bad}; choose from {list(SUITES)}")
        unknown = set(self.counts) - set(DEFAULT_COUNTS)
        if unknown:
            raise ConfigError(f"unknown count keys {sorted(unknown)}")
        merged = dict(DEFAULT_COUNTS)
        merged.update(self.counts)
        if any(not isinstance(v, int) or v < 0 for v in merged.values()):
            raise ConfigError("counts must be non-negative integers")
        self.counts = merged

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in RunConfig.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        try:
            return RunConfig(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @staticmethod
    def load(path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                return RunConfig.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("output")
        d.pop("jobs")
        return d


# ------------------------------------------------------------------ tasks

# tag -> (suite, check function, input kind)
CHECKS = {
    "minimal-iff-k0-iff-simple": ("strata", checks.minimal_k0_simple, "pure"),
    "approximation": ("strata", checks.approximation, "chains"),
    "modification": ("strata", checks.modification, "modification"),
    "sr-axioms": ("sr", checks.sr_axioms, "tower"),
    "monomial-group": ("sr", checks.monomial_group, "tower"),
    "sr-minimality": ("sr", checks.sr_minimality, "pure"),
    "character-factorization": ("characters", checks.character_factorization, "chains"),
    "filtration-dictionary": ("filtration", checks.filtration_dictionary, "chains"),
    "index-ladder": ("filtration", checks.index_ladder, "chains"),
    "group-equalities": ("filtration", checks.group_equalities, "maximal"),
    "genericity": ("yu", checks.genericity, "chains"),
    "yu-datum": ("yu", checks.yu_datum, "maximal"),
    "hat-product": ("yu", checks.hat_product, "maximal"),
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return str(x) if not x.is_integer() else int(x)
    return x


def _kwargs(tag: str, counts: dict) -> dict:
    if tag == "sr-axioms":
        return {"count": counts["sr_elements"]}
    if tag == "character-factorization":
        return {"evaluations": counts["evaluations"]}
    if tag == "hat-product":
        return {"samples": counts["evaluations"]}
    return {}


def run_task(task) -> dict:
    """Evaluate one (tag, index, payload) task; errors become fail verdicts."""
    tag, idx, payload, seed, policy_t, counts = task
    policy = PrecisionPolicy(*policy_t)
    _, fn, kind = CHECKS[tag]
    rng = random.Random(f"{seed}/{tag}/{idx}")
    entry = {"tag": tag, "id": f"{tag}/{idx:04d}", "instance": payload}
    try:
        if kind == "tower":
            arg = build(TowerSpec.from_dict(payload), policy)
            ok, witness = fn(arg, rng, **_kwargs(tag, counts))
        else:
            smp = sample_from_descriptor(payload, policy)
            ok, witness = fn(smp, rng, policy, **_kwargs(tag, counts))
        entry["verdict"] = "pass" if ok else "fail"
        entry["witness"] = _jsonable(witness)
    except (StrataLabError, ArithmeticError, ValueError) as exc:
        entry["verdict"] = "fail"
        entry["error"] = {"type": type(exc).__name__, "code": getattr(exc, "code", "error"),
                          "message": str(exc)}
    return entry


def sample_inputs(cfg: RunConfig, policy: PrecisionPolicy, kinds) -> dict:
    """Descriptors per input kind, each drawn from its own seeded stream."""
    specs = tower_grid(cfg.p, cfg.max_e, cfg.max_f, cfg.max_N)
    if not specs:
        raise ConfigError("the tower grid is empty")
    c = cfg.counts
    out = {}
    for kind in sorted(kinds):
        rng = random.Random(f"{cfg.seed}/sample/{kind}")
        if kind == "tower":
            out[kind] = [s.to_dict() for s in specs]
        elif kind == "pure":
            out[kind] = [s.descriptor() for s in sample_pure(specs, policy, cfg.max_N, c["pure"], rng)]
        elif kind == "chains":
            out[kind] = [s.descriptor() for s in
                         sample_chains(specs, policy, cfg.max_N, DEFAULT_PATTERNS, c["chains"], rng)]
        elif kind == "maximal":
            out[kind] = [s.descriptor() for s in
                         sample_chains(specs, policy, cfg.max_N, MAXIMAL_PATTERNS, c["maximal"], rng,
                                       maximal_only=True)]
        elif kind == "modification":
            out[kind] = [s.descriptor() for s in
                         sample_modification_pairs(specs, policy, cfg.max_N, c["modification"], rng)]
    return out


def run(cfg: RunConfig) -> dict:
    """Sample the grid, run every selected suite and assemble the report."""
    policy = PrecisionPolicy.from_env(cfg.precision_factor)
    tags = [t for t, (suite, _, _) in CHECKS.items() if suite in cfg.suites]
    inputs = sample_inputs(cfg, policy, {CHECKS[t][2] for t in tags})
    tasks = []
    for tag in tags:
        for idx, payload in enumerate(inputs[CHECKS[tag][2]]):
            tasks.append((tag, idx, payload, cfg.seed, (policy.factor, policy.pinned), cfg.counts))
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            entries = list(ex.map(run_task, tasks, chunksize=1))
    else:
        entries = [run_task(t) for t in tasks]
    suites = {s: [] for s in cfg.suites}
    for e in entries:
        suites[CHECKS[e["tag"]][0]].append(e)
    for s in suites:
        suites[s].sort(key=lambda e: e["id"])
    per_suite = {}
    for s, es in suites.items():
        shortfall = {}
        for tag in (t for t in tags if CHECKS[t][0] == s):
            kind = CHECKS[tag][2]
            if kind in cfg.counts and len(inputs[kind]) < cfg.counts[kind]:
                shortfall[kind] = [len(inputs[kind]), cfg.counts[kind]]
        per_suite[s] = {"passed": sum(e["verdict"] == "pass" for e in es),
                        "failed": sum(e["verdict"] == "fail" for e in es),
                        "sampling_shortfall": shortfall}
    failed = sum(v["failed"] for v in per_suite.values())
    return {
        "tool": "strata-lab",
        "version": __version__,
        "config": cfg.echo(),
        "precision": {"factor": policy.factor, "pinned_abs_prec": policy.pinned},
        "suites": suites,
        "summary": {"instances": len(entries), "passed": len(entries) - failed, "failed": failed,
                    "per_suite": per_suite},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def text_lines(report: dict):
    """One line per instance: verdict, suite, id and a compact witness hint."""
    for suite, entries in report["suites"].items():
        for e in entries:
            hint = e.get("error", {}).get("message", "")
            yield f"{e['verdict'].upper():4s} {suite:10s} {e['id']}" + (f"  ({hint})" if hint else "")
    s = report["summary"]
    yield f"{s['passed']}/{s['instances']} passed, {s['failed']} failed"
