"""Command-line entry point: ``rauzy <command> ...``.

Exit codes: 0 success or all verdicts pass, 1 a verdict failed, 2 usage error.
"""

from __future__ import annotations

import json
import random
import sys

import click

from . import _kernels
from .arf_prover import (ProverError, brute_force_identity, check_identity, enumerate_identities,
                         load_fixtures, load_identity, solve_coefficients)
from .constructions import ConstructionError, build_i2x_traced, validate_request
from .dynamics import MonodromyLimitError, monodromy_group
from .explorer import ExplorerError, enumerate_classes, verify_classification
from .invariants import ArfMismatch, arf, cycle_data, expected_abar, sign
from .perm import Permutation, ReducibleError, apply_word, as_perm, is_irreducible


def _perm(text: str) -> Permutation:
    try:
        return as_perm(text)
    except ValueError as e:
        raise click.BadParameter(str(e)) from None


def _emit(obj) -> None:
    click.echo(json.dumps(obj, indent=2, ensure_ascii=False))


def _signed(text: str) -> int:
    table = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1, "0": 0}
    if text not in table:
        raise click.BadParameter(f"sign must be one of + - 0, got {text!r}")
    return table[text]


@click.group()
def main():
    """Rauzy classes of permutations: invariants, dynamics, Arf identities."""


@main.command()
@click.argument("perm")
def invariant(perm):
    """Cycle invariant, type and sign of PERM (one-line notation)."""
    p = _perm(perm)
    if not is_irreducible(p):
        raise click.BadParameter(f"{p} is reducible")
    cd = cycle_data(p)
    out = {"perm": p.to_text(), "lambda": list(cd.lam), "rank": cd.rank,
           "type": cd.perm_type.to_json()}
    if p.n <= _kernels.ARF_CAP:
        try:
            out["sign"] = sign(p)
        except ArfMismatch as e:
            click.echo(str(e), err=True)
            _emit(out)
            sys.exit(1)
    _emit(out)


@main.command("arf")
@click.argument("perm")
def arf_cmd(perm):
    """Exact A and Abar of PERM over all edge subsets."""
    p = _perm(perm)
    try:
        a, ab = arf(p)
    except ValueError as e:
        raise click.BadParameter(str(e)) from None
    out = {"perm": p.to_text(), "A": a, "Abar": ab}
    if is_irreducible(p):
        lam, r = cycle_data(p).lam, cycle_data(p).rank
        exp = expected_abar(lam, r, p.n)
        out["expected_magnitude"] = exp.magnitude
        out["consistent"] = exp.admits(ab)
        _emit(out)
        sys.exit(0 if out["consistent"] else 1)
    _emit(out)


@main.command()
@click.option("--word", "-w", required=True, help="letters L, R and inverses (l, r, L', R^-1)")
@click.argument("perm")
def dynamics(word, perm):
    """Apply an L/R word to PERM, left to right."""
    p = _perm(perm)
    try:
        q = apply_word(p, word)
    except ReducibleError as e:
        raise click.BadParameter(str(e)) from None
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--word") from None
    cd0, cd1 = cycle_data(p), cycle_data(q)
    _emit({"start": p.to_text(), "word": word, "end": q.to_text(),
           "invariant_start": [list(cd0.lam), cd0.rank], "invariant_end": [list(cd1.lam), cd1.rank]})


@main.command()
@click.option("--size", "-n", type=int, required=True)
@click.option("--verify", is_flag=True, help="also check same invariant <=> same class")
@click.option("--json", "json_out", type=click.Path(dir_okay=False, allow_dash=True),
              help="write the JSON report here ('-' for stdout)")
def classes(size, verify, json_out):
    """Every L/R class of irreducible permutations of the given size."""
    try:
        report = enumerate_classes(size)
    except ExplorerError as e:
        raise click.BadParameter(str(e), param_hint="--size") from None
    verdicts = verify_classification(size) if verify else report.verdicts
    if json_out:
        data = report.to_json()
        data["verdicts"] = {v.name: {"ok": v.ok, "details": v.details} for v in verdicts}
        text = json.dumps(data, indent=2, ensure_ascii=False)
        if json_out == "-":
            click.echo(text)
        else:
            with open(json_out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    if json_out != "-":
        lines = report.text().splitlines()
        click.echo("\n".join(x for x in lines if not x.startswith(("PASS", "FAIL"))))
        for v in verdicts:
            click.echo(v.line())
            if not v.ok:
                for d in v.details:
                    click.echo(f"    {d}")
    sys.exit(0 if all(v.ok for v in verdicts) else 1)


def _bounds(text: str) -> tuple[int, int, int, int]:
    try:
        parts = tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        parts = ()
    if len(parts) != 4:
        raise click.BadParameter("expected max_terms,max_edges,k,l", param_hint="--enumerate")
    return parts


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
              help="identity JSON file")
@click.option("--fixture", help="name of a shipped identity (see --list)")
@click.option("--list", "list_fixtures", is_flag=True, help="list the shipped identities")
@click.option("--solve", is_flag=True, help="solve for every coefficient vector over the identity's terms")
@click.option("--enumerate", "enum", metavar="T,E,K,L",
              help="enumerate minimal identities: terms, edges, bottom marks, top marks")
@click.option("--brute", type=int, default=0, help="also test on this many random hosts")
@click.option("--seed", type=int, default=0)
def prove(spec_path, fixture, list_fixtures, solve, enum, brute, seed):
    """Check, solve or enumerate Arf identities on marked permutations."""
    if list_fixtures:
        for name, spec in load_fixtures().items():
            click.echo(f"{name}  (k={spec.k}, l={spec.l}, {len(spec.terms)} terms)")
        return
    if enum:
        t, e, k, l = _bounds(enum)
        try:
            found = enumerate_identities(t, e, k, l)
        except ProverError as err:
            raise click.BadParameter(str(err), param_hint="--enumerate") from None
        click.echo(json.dumps([s.to_json() for s in found], indent=1))
        click.echo(f"{len(found)} identities", err=True)
        return
    if bool(spec_path) == bool(fixture):
        raise click.UsageError("give exactly one of --spec or --fixture")
    try:
        if fixture:
            fixtures = load_fixtures()
            if fixture not in fixtures:
                raise click.BadParameter(f"unknown fixture {fixture!r}", param_hint="--fixture")
            spec = fixtures[fixture]
        else:
            with open(spec_path, encoding="utf-8") as fh:
                spec = load_identity(fh.read())
    except (ProverError, KeyError, json.JSONDecodeError) as err:
        raise click.BadParameter(f"bad identity spec: {err}", param_hint="--spec") from None
    if solve:
        basis = solve_coefficients([t.marked for t in spec.terms], spec.flavors())
        if not basis:
            click.echo("NO IDENTITY")
            sys.exit(1)
        for vec in basis:
            click.echo(" ".join(str(x) for x in vec))
        return
    res = check_identity(spec)
    if not res.holds:
        click.echo(f"IDENTITY FAILS at v={''.join(map(str, res.witness))} (residual {res.residual})")
        sys.exit(1)
    click.echo("IDENTITY HOLDS")
    if brute:
        rng = random.Random(seed)
        for _ in range(brute):
            n = rng.randint(max(spec.k, spec.l) + 1, 7)
            host = Permutation(tuple(rng.sample(range(1, n + 1), n)))
            bs = sorted(rng.sample(range(1, n), spec.k))
            ts = sorted(rng.sample(range(1, n), spec.l))
            r = brute_force_identity(spec, host, bs, ts)
            if r != 0:
                click.echo(f"BRUTE FORCE FAILS on {host} slots {bs} {ts}: {r}")
                sys.exit(1)
        click.echo(f"brute force agrees on {brute} hosts")


@main.command()
@click.argument("perm")
@click.option("--limit", type=int, default=5 * 10 ** 6, show_default=True,
              help="maximum number of labelled states")
def monodromy(perm, limit):
    """Labelling monodromy of PERM's class against the generated group."""
    p = _perm(perm)
    try:
        rep = monodromy_group(p, limit=limit)
    except ReducibleError as e:
        raise click.BadParameter(str(e)) from None
    except MonodromyLimitError as e:
        click.echo(str(e), err=True)
        sys.exit(1)
    click.echo(rep.dumps())
    sys.exit(0 if rep.group_matches and rep.two_point_matches else 1)


@main.command("build-i2x")
@click.option("--lambda", "lam", default="", help="cycle lengths, comma separated (empty for none)")
@click.option("--rank", type=int, required=True)
@click.option("--sign", "sgn", default="0", help="+, - or 0")
def build_i2x_cmd(lam, rank, sgn):
    """Build a shift-irreducible standard permutation with the given invariant."""
    try:
        parts = tuple(int(x) for x in lam.replace(" ", "").split(",") if x)
    except ValueError:
        raise click.BadParameter(f"bad lambda {lam!r}", param_hint="--lambda") from None
    s = _signed(sgn)
    try:
        validate_request(parts, rank, s)
    except ConstructionError as e:
        raise click.BadParameter(str(e)) from None
    try:
        trace = build_i2x_traced(parts, rank, s)
    except ConstructionError as e:  # includes NoI2XError
        click.echo(str(e), err=True)
        sys.exit(1)
    _emit({"perm": trace.perm.to_text(), "lambda": list(parts), "rank": rank, "sign": s,
           "route": trace.route})


@main.command("verify-all")
@click.option("--max-n", type=int, default=8, show_default=True,
              help="largest size for the exhaustive census and Arf sweeps")
def verify_all(max_n):
    """Run the twelve acceptance checks."""
    from .acceptance import run_all
    if not 4 <= max_n <= 9:
        raise click.BadParameter("choose 4..9", param_hint="--max-n")
    verdicts = run_all(max_n, echo=click.echo)
    sys.exit(0 if all(v.ok for v in verdicts) else 1)


if __name__ == "__main__":
    main()
