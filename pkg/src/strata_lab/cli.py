"""Command line entry point: ``strata-lab run`` plus per-module inspection commands."""

from __future__ import annotations

import json
import random
import sys

import click

from . import checks, yu
from .characters import (build_theta, factor_theta, group_shape, random_lattice_element,
                         sample_theta, theta_from_dict)
from .errors import ConfigError, StrataLabError
from .generic import check_GE1, minimal_via_sr
from .report import RunConfig, _jsonable, dumps, run as run_suites, text_lines
from .sampling import PrecisionPolicy, Sample, sample_from_descriptor
from .strata import (Stratum, approx_sequence, field_over, is_minimal, is_simple, k0,
                     purity_report)


def _emit(obj: dict, ok: bool):
    click.echo(json.dumps(_jsonable(obj), sort_keys=True, indent=2))
    sys.exit(0 if ok else 1)


def _load_sample(path: str, factor: int = 1) -> Sample:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.BadParameter(f"cannot read {path}: {exc}") from exc
    try:
        return sample_from_descriptor(d, PrecisionPolicy.from_env(factor))
    except (KeyError, TypeError, ValueError) as exc:
        raise click.BadParameter(f"malformed stratum descriptor: {exc}") from exc


def _elem(x) -> dict:
    return {"field_id": list(x.F.key[:4]), "val": x.val() if not x.is_zero() else None,
            "digits": [list(d) for d in x.digits(upto=0)]}


stratum_opt = click.option("--stratum", "stratum", required=True, type=click.Path(exists=True),
                           help="JSON descriptor {tower:{p,f,e,twist}, m, digits:[[k, v], ..]}.")
seed_opt = click.option("--seed", default=0, show_default=True, type=int)


@click.group()
@click.version_option(package_name="strata-lab")
def main():
    """Exact verification of strata, simple characters and tame Yu data."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), help="Run configuration JSON.")
@click.option("--out", "out", type=click.Path(), help="Write the JSON report here.")
@click.option("--suite", "suites", multiple=True, help="Restrict to these suites (repeatable).")
@click.option("--seed", type=int, help="Override the configured seed.")
@click.option("--precision-factor", type=int, help="Multiply the default absolute precision.")
@click.option("--jobs", type=int, help="Worker processes.")
@click.option("--text", is_flag=True, help="Print one line per instance instead of the JSON report.")
def run(config_path, out, suites, seed, precision_factor, jobs, text):
    """Sample the grid, run the selected suites, exit 0 iff nothing failed."""
    try:
        cfg = RunConfig.load(config_path) if config_path else RunConfig()
        if suites:
            cfg.suites = list(suites)
        if seed is not None:
            cfg.seed = seed
        if precision_factor is not None:
            cfg.precision_factor = precision_factor
        if jobs is not None:
            cfg.jobs = jobs
        if out:
            cfg.output = out
        cfg.validate()
        report = run_suites(cfg)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    body = dumps(report)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(body)
    if text:
        for line in text_lines(report):
            click.echo(line)
    elif not cfg.output:
        click.echo(body, nl=False)
    else:
        s = report["summary"]
        click.echo(f"{s['passed']}/{s['instances']} passed, {s['failed']} failed")
    sys.exit(0 if report["summary"]["failed"] == 0 else 1)


# ------------------------------------------------------------------ strata

@main.group()
def strata():
    """Purity, simplicity, k0 and approximation chains."""


@strata.command("check")
@stratum_opt
@click.option("--r", "r", type=int, help="Stratum depth r (defaults to n - 1).")
def strata_check(stratum, r):
    smp = _load_sample(stratum)
    o = smp.order()
    n = -o.nu(o.mat(smp.beta))
    r = n - 1 if r is None else r
    S = Stratum(o, n, r, smp.beta)
    rep = {"n": n, "r": r, "purity": purity_report(S), "simple": is_simple(S), "k0": str(S.k0())}
    if r == n - 1:
        ok, w = checks.minimal_k0_simple(smp, None, None)
        rep["minimal"] = w["minimal"]
        rep["minimal_iff_k0_iff_simple"] = ok
    _emit(rep, True)


@strata.command("k0")
@stratum_opt
def strata_k0(stratum):
    smp = _load_sample(stratum)
    _emit({"k0": str(k0(smp.beta, smp.order()))}, True)


@strata.command("approx")
@stratum_opt
def strata_approx(stratum):
    smp = _load_sample(stratum)
    try:
        seq = approx_sequence(smp.beta, smp.order())
    except StrataLabError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, False)
    _emit({"n": seq.n, "case": seq.case, "r": seq.rs,
           "beta": [_elem(b) for b in seq.betas], "c": [_elem(c) for c in seq.cs],
           "fields": [list(L.key) for L in seq.fields]}, True)


# ------------------------------------------------------------------ generic

@main.group()
def generic():
    """Standard representatives and genericity."""


def _field(E, spec: str):
    """Subfield from "fL,eL,b" or a JSON list [fL, eL, b]."""
    try:
        key = tuple(json.loads(spec)) if spec.strip().startswith("[") else \
            tuple(int(x) for x in spec.split(","))
    except (ValueError, json.JSONDecodeError) as exc:
        raise click.BadParameter(f"field id {spec!r}: {exc}") from exc
    for L in E.subfields():
        if tuple(L.key) == key:
            return L
    raise click.BadParameter(f"no subfield {list(key)}; have {[list(L.key) for L in E.subfields()]}")


@generic.command("check")
@click.option("--stratum", type=click.Path(exists=True), help="Check every c_i of this stratum's chain.")
@click.option("--element", type=click.Path(exists=True), help="Element descriptor {tower, digits}.")
@click.option("--over", "over", help="Field id fL,eL,b to test over (default: Q_p).")
def generic_check(stratum, element, over):
    """Genericity of every c_i of a chain, or of one element over a subfield."""
    if bool(stratum) == bool(element):
        raise click.UsageError("give exactly one of --stratum and --element")
    if stratum:
        smp = _load_sample(stratum)
        ok, w = checks.genericity(smp, None, None)
        w["minimal"] = is_minimal(smp.beta)
        w["minimal_via_sr"] = minimal_via_sr(smp.beta)
        _emit(w, ok)
    smp = _load_sample(element)
    c = smp.beta
    L = _field(smp.E, over) if over else smp.E.prime
    big = field_over(L, [c])
    minimal = is_minimal(c, L)
    rep = check_GE1(c, big, L, require_minimal=False).to_dict()
    rep.update({"over": list(L.key), "generated": list(big.key), "minimal": minimal})
    _emit(rep, minimal and rep["ge1"])


# ------------------------------------------------------------------ characters

@main.group()
def char():
    """Simple characters: build, factor, check."""


def _theta(stratum, seed):
    smp = _load_sample(stratum)
    seq = approx_sequence(smp.beta, smp.order())
    shape = group_shape(seq)
    return smp, shape, sample_theta(shape, random.Random(seed))


@char.command("build")
@stratum_opt
@seed_opt
def char_build(stratum, seed):
    _, _, theta = _theta(stratum, seed)
    _emit(theta.to_dict(), True)


@char.command("factor")
@stratum_opt
@seed_opt
def char_factor(stratum, seed):
    smp, shape, theta = _theta(stratum, seed)
    phis = factor_theta(theta, shape)
    rebuilt = build_theta(shape, phis)
    rng = random.Random(seed)
    o, H = shape.order, shape.h_lattice()
    same = True
    for _ in range(50):
        g = o.one() + random_lattice_element(o, H, rng)
        same &= rebuilt.on_matrix(g) == theta.on_matrix(g)
    _emit({"phi": [ph.to_dict() for ph in phis], "rebuild_matches_theta": same}, same)


@char.command("check")
@stratum_opt
@seed_opt
@click.option("--evaluations", default=100, show_default=True, type=int)
def char_check(stratum, seed, evaluations):
    smp = _load_sample(stratum)
    ok, w = checks.character_factorization(smp, random.Random(seed), PrecisionPolicy.from_env(),
                                           evaluations=evaluations)
    _emit(w, ok)


# ------------------------------------------------------------------ bridge

@main.group("bridge")
def bridge_cmd():
    """Lattice-chain against Moy-Prasad descriptions."""


@bridge_cmd.command("verify")
@stratum_opt
@click.option("--filtration", is_flag=True)
@click.option("--groups", is_flag=True)
@click.option("--indices", is_flag=True)
def bridge_verify(stratum, filtration, groups, indices):
    smp = _load_sample(stratum)
    everything = not (filtration or groups or indices)
    rep, ok = {}, True
    rng = random.Random(0)
    if filtration or everything:
        good, rep["filtration"] = checks.filtration_dictionary(smp, rng, None)
        ok &= good
    if groups or everything:
        good, rep["groups"] = checks.group_equalities(smp, rng, None)
        ok &= good
    if indices or everything:
        good, rep["indices"] = checks.index_ladder(smp, rng, None)
        ok &= good
    _emit(rep, ok)


# ------------------------------------------------------------------ yu

@main.group("yu")
def yu_cmd():
    """Generic Yu data from maximal simple strata."""


def _datum(stratum, seed, sigma, theta_path=None):
    smp, shape, theta = _theta(stratum, seed)
    if theta_path:
        try:
            with open(theta_path) as fh:
                theta = theta_from_dict(shape, json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise click.BadParameter(f"cannot read character {theta_path}: {exc}") from exc
    return theta, yu.assemble(shape.seq, theta, sigma=sigma, rng=random.Random(seed))


theta_opt = click.option("--theta", "theta_path", type=click.Path(exists=True),
                         help="Character JSON from `char build`; sampled from --seed when absent.")


@yu_cmd.command("assemble")
@stratum_opt
@seed_opt
@theta_opt
@click.option("--sigma", default="sigma", show_default=True, help="Label of the cuspidal datum.")
def yu_assemble(stratum, seed, theta_path, sigma):
    try:
        _, D = _datum(stratum, seed, sigma, theta_path)
    except StrataLabError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, False)
    _emit(D.to_dict(), True)


@yu_cmd.command("validate")
@stratum_opt
@seed_opt
@theta_opt
def yu_validate(stratum, seed, theta_path):
    _, D = _datum(stratum, seed, "sigma", theta_path)
    v = yu.validate(D)
    _emit(v, v["ok"])


@yu_cmd.command("compare-theta")
@stratum_opt
@seed_opt
@theta_opt
@click.option("--samples", default=100, show_default=True, type=int)
def yu_compare(stratum, seed, theta_path, samples):
    theta, D = _datum(stratum, seed, "sigma", theta_path)
    rep = yu.hat_product_equals_theta(D, theta, samples=samples, rng=random.Random(seed))
    _emit(rep, rep["ok"])


if __name__ == "__main__":
    main()
