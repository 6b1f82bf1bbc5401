"""Command-line front end.

Exit codes: 0 all relations satisfied, 1 at least one violation,
2 input/config error, 3 solver failed certification on any row.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .discrimination import Ensemble, certificate_gap, min_error_solve, pairwise_bound
from .duality import Relation, TwoParticleScenario
from .harness import (
    ScenarioParseError,
    SweepConfig,
    applicable_relations,
    DEFAULT_RELATIONS,
    default_out_dir,
    emit,
    parse_scenario,
    run_relation,
    run_sweep,
    summarize,
    witness_report,
)
from .interferometer import ScenarioSpec


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _exit_code(reports) -> int:
    if any(not r.solver_certified for r in reports):
        return 3
    if any(not r.satisfied for r in reports):
        return 1
    return 0


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise click.BadParameter(f"expected a comma-separated integer list: {exc}")


@click.group()
def main():
    """Coherence / path-information duality laboratory."""


@main.command()
@click.argument("scenario_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--relation", "relations", multiple=True,
              type=click.Choice([r.value for r in Relation]),
              help="Relation to check (repeatable; default: all applicable).")
@click.option("--tol", type=float, default=None,
              help="Override the pass tolerance for every relation.")
def check(scenario_file, relations, tol):
    """Evaluate duality relations on a scenario file."""
    try:
        obj = parse_scenario(scenario_file)
    except ScenarioParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    if isinstance(obj, TwoParticleScenario):
        wanted = [Relation(r) for r in relations] or [Relation.TWO_PARTICLE_SUM]
        if wanted != [Relation.TWO_PARTICLE_SUM]:
            click.echo("error: two-particle files support only TWO_PARTICLE_SUM", err=True)
            sys.exit(2)
    elif isinstance(obj, ScenarioSpec):
        if relations:
            wanted = [Relation(r) for r in relations]
        else:
            wanted = applicable_relations(DEFAULT_RELATIONS, obj.n, obj.d_b)
    else:
        click.echo("error: ensemble files go with the `discriminate` command", err=True)
        sys.exit(2)

    reports = []
    for rel in wanted:
        try:
            rep = run_relation(rel, obj)
        except ValueError as exc:
            click.echo(f"error: {rel.value}: {exc}", err=True)
            sys.exit(2)
        if tol is not None:
            ok = abs(rep.slack) <= tol if rep.equality else rep.slack >= -tol
            rep = type(rep)(**{**rep.__dict__, "satisfied": ok, "tol": tol})
        reports.append(rep)
        status = "PASS" if rep.satisfied else "FAIL"
        click.echo(f"{rep.relation_id.value}: {status}  lhs={_fmt(rep.lhs)} "
                   f"rhs={_fmt(rep.rhs)} slack={_fmt(rep.slack)}"
                   + ("" if rep.solver_certified else "  [UNCERTIFIED]"))
        for k, v in rep.components.items():
            click.echo(f"    {k} = {_fmt(v)}")
    sys.exit(_exit_code(reports))


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--count", type=int, required=True, help="Scenarios per cell.")
@click.option("--n", "n_list", required=True, help="Comma-separated path counts.")
@click.option("--db", "db_list", required=True, help="Comma-separated memory dims.")
@click.option("--dd", type=int, default=None, help="Detector dim (default: N).")
@click.option("--relation", "relations", multiple=True,
              type=click.Choice([r.value for r in Relation]))
@click.option("--jobs", type=int, default=1, help="Parallel worker processes.")
@click.option("--serial", is_flag=True, help="Force single-threaded execution.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv")
def sweep(seed, count, n_list, db_list, dd, relations, jobs, serial, out_path, fmt):
    """Run a randomized verification sweep and write a report file."""
    try:
        config = SweepConfig(
            seed=seed, count=count,
            n_values=_parse_ints(n_list), d_b_values=_parse_ints(db_list),
            d_d=dd,
            relations=tuple(Relation(r) for r in relations) or None,
        )
    except (ValueError, click.BadParameter) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    rows = run_sweep(config, jobs=1 if serial else max(1, jobs))
    if out_path is None:
        out_path = default_out_dir() / f"sweep-{seed}.{fmt}"
    emit(rows, fmt, out_path)
    s = summarize(rows)
    click.echo(f"{s['rows']} rows -> {out_path}  violations={s['violations']} "
               f"uncertified={s['uncertified']} worst_slack={_fmt(s['worst_slack'])}")
    if s["uncertified"]:
        sys.exit(3)
    sys.exit(1 if s["violations"] else 0)


@main.command()
@click.argument("ensemble_file", type=click.Path(exists=True, dir_okay=False))
def discriminate(ensemble_file):
    """Minimum-error discrimination of an ensemble file."""
    try:
        ens = parse_scenario(ensemble_file)
    except ScenarioParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if not isinstance(ens, Ensemble):
        click.echo("error: expected an ensemble file (type = 'ensemble')", err=True)
        sys.exit(2)
    res = min_error_solve(ens)
    click.echo(f"p_success = {_fmt(res.p_success)}")
    click.echo(f"pairwise_bound = {_fmt(pairwise_bound(ens))}")
    click.echo(f"certificate_gap = {_fmt(res.certificate_gap)}")
    click.echo(f"iterations = {res.iterations}")
    sys.exit(0 if res.certified else 3)


@main.command()
@click.argument("scenario_file", type=click.Path(exists=True, dir_okay=False))
def witness(scenario_file):
    """Entanglement witnesses of the particle-memory state."""
    try:
        spec = parse_scenario(scenario_file)
    except ScenarioParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if not isinstance(spec, ScenarioSpec):
        click.echo("error: expected a single-particle scenario file", err=True)
        sys.exit(2)
    rep = witness_report(spec)
    click.echo(f"purity_witness = {_fmt(rep['purity_witness'])}")
    click.echo(f"cond_ent_witness = {_fmt(rep['cond_ent_witness'])}")
    click.echo("negative values certify particle-memory entanglement")
    sys.exit(0)


if __name__ == "__main__":
    main()
