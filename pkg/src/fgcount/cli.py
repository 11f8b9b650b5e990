"""Command-line surface.

Exit codes: 0 on success, 2 when no estimate was produced, 3 when the
estimator exceeded its iteration budget, 1 on usage or I/O errors.  The
environment variable FGCOUNT_SEED, when set, overrides any --seed flag.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from .edgecount import IterationBudgetExceeded
from .exact import exact_count
from .experiments import (
    ExperimentConfig,
    probe_to_csv,
    records_to_csv,
    run_experiment,
    scaling_probe,
    summary_line,
)
from .generators import GeneratorSpec, InfeasiblePlant, generate
from .instances import Problem, load_instance, save_instance
from .reductions import count_3sum, count_nwt, count_ov
from .rng import RngStream, derive_stream
from .satcount import CnfFormula, approx_count_cnf

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_ESTIMATE = 2
EXIT_BUDGET = 3


def _resolve_seed(seed: int) -> int:
    env = os.environ.get("FGCOUNT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise click.UsageError(f"FGCOUNT_SEED must be an integer, got {env!r}") from exc
    return seed


@click.group()
def main() -> None:
    """Approximate counting via decision oracles."""


@main.command()
@click.option("--problem", type=click.Choice([p.value for p in Problem]), required=True)
@click.option("--n", type=int, required=True, help="total instance size")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--planted", type=int, default=None, help="exact witness count to plant")
@click.option("--d", type=int, default=64, show_default=True, help="OV dimension")
@click.option("--density", type=float, default=0.25, show_default=True)
@click.option("--value-bound", type=int, default=10**9, show_default=True)
@click.option("--weight-bound", type=int, default=100, show_default=True)
@click.option("--clauses", type=int, default=0, help="CNF clause count (default 4n)")
@click.option("--width", type=int, default=3, show_default=True, help="CNF clause width")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def gen(problem, n, seed, planted, d, density, value_bound, weight_bound, clauses, width, out):
    """Generate an instance file (JSON, or DIMACS for CNF)."""
    spec = GeneratorSpec(
        problem=Problem(problem),
        n=n,
        seed=_resolve_seed(seed),
        planted_count=planted,
        d=d,
        density=density,
        value_bound=value_bound,
        weight_bound=weight_bound,
        clause_count=clauses,
        width_k=width,
    )
    try:
        inst = generate(spec)
    except InfeasiblePlant as exc:
        raise click.ClickException(str(exc))
    if out:
        save_instance(inst, out)
    else:
        from .instances import dumps_instance

        click.echo(dumps_instance(inst), nl=False)


def _count_command(counter, instance_file, eps, seed, exact_flag, expected_kind):
    try:
        inst = load_instance(instance_file)
    except (OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    from .instances import problem_kind

    if problem_kind(inst) is not expected_kind:
        click.echo(f"error: expected a {expected_kind.value} instance", err=True)
        sys.exit(EXIT_USAGE)
    rng = derive_stream(RngStream(_resolve_seed(seed)), "cli-count")
    try:
        value = counter(inst, rng)
    except IterationBudgetExceeded:
        click.echo("BUDGET_EXCEEDED")
        sys.exit(EXIT_BUDGET)
    if value is None:
        click.echo("NO_ESTIMATE")
        sys.exit(EXIT_NO_ESTIMATE)
    click.echo(str(value))
    if exact_flag:
        click.echo(f"exact {exact_count(inst)}")
    sys.exit(EXIT_OK)


@main.command(name="count-3sum")
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--eps", type=float, default=0.25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--exact", "exact_flag", is_flag=True, help="also print the exact count")
def count_3sum_cmd(instance_file, eps, seed, exact_flag):
    """Approximate the number of 3SUM tuples in a JSON instance."""
    _count_command(
        lambda inst, rng: count_3sum(inst, eps, rng),
        instance_file, eps, seed, exact_flag, Problem.THREESUM,
    )


@main.command(name="count-ov")
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--eps", type=float, default=0.25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--exact", "exact_flag", is_flag=True)
def count_ov_cmd(instance_file, eps, seed, exact_flag):
    """Approximate the number of orthogonal pairs in a JSON instance."""
    _count_command(
        lambda inst, rng: count_ov(inst, eps, rng),
        instance_file, eps, seed, exact_flag, Problem.OV,
    )


@main.command(name="count-nwt")
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--eps", type=float, default=0.25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--exact", "exact_flag", is_flag=True)
def count_nwt_cmd(instance_file, eps, seed, exact_flag):
    """Approximate the number of negative triangles in a JSON instance."""
    _count_command(
        lambda inst, rng: count_nwt(inst, eps, rng),
        instance_file, eps, seed, exact_flag, Problem.NWT,
    )


@main.command(name="count-cnf")
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--eps", type=float, default=0.25, show_default=True)
@click.option("--delta", type=float, default=0.3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--exact", "exact_flag", is_flag=True)
def count_cnf_cmd(instance_file, eps, delta, seed, exact_flag):
    """Approximately count satisfying assignments of a DIMACS CNF."""

    def counter(inst, rng):
        if not isinstance(inst, CnfFormula):
            click.echo(
                "error: approximate counting takes a plain CNF; files with "
                "x-lines encode decision-oracle instances", err=True,
            )
            sys.exit(EXIT_USAGE)
        return approx_count_cnf(inst, eps, delta, rng)

    _count_command(counter, instance_file, eps, seed, exact_flag, Problem.CNF)


@main.command()
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def bench(config_file, out):
    """Run an experiment config (JSON) and emit trial records as CSV."""
    try:
        cfg = ExperimentConfig.from_json(Path(config_file).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    records = run_experiment(cfg)
    text = records_to_csv(records) + summary_line(records, cfg.eps) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_OK)


@main.command()
@click.option("--problem", type=click.Choice([p.value for p in Problem]), required=True)
@click.option("--sizes", required=True, help="comma-separated instance sizes")
@click.option("--eps", type=float, default=0.25, show_default=True)
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--d", type=int, default=64, show_default=True)
@click.option("--density", type=float, default=0.25, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def probe(problem, sizes, eps, trials, seed, d, density, out):
    """Median independence-query counts across instance sizes."""
    try:
        size_list = [int(s) for s in sizes.split(",") if s]
    except ValueError:
        click.echo("error: --sizes must be comma-separated integers", err=True)
        sys.exit(EXIT_USAGE)
    seed = _resolve_seed(seed)
    template = GeneratorSpec(
        problem=Problem(problem), n=max(size_list), seed=seed, d=d, density=density
    )
    results = scaling_probe(template, size_list, eps, trials, RngStream(seed))
    text = probe_to_csv(results)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
