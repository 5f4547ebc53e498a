"""Command-line front end.

Exit codes: 0 on success, 2 when a node budget truncated a search, 1 on
any error (including usage errors). The default numeric backend can be
set with the BRAIDSYNTH_BACKEND environment variable ("native64" or
"bigfloat:<bits>"); the scan kernel with BRAIDSYNTH_KERNEL ("numba" or
"numpy").
"""

from __future__ import annotations

import csv
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

import click

from . import __version__
from .anyons import enumerate_models, model_to_dict
from .backends import Backend
from .ebm import FIBONACCI, ONE_QUBIT, TWO_QUBIT, ebm_set
from .ga import GAConfig, ga_search
from .manifest import RunManifest
from .search import (
    DEFAULT_NODE_BUDGET,
    CSV_COLUMNS,
    Objective,
    SearchConfig,
    exhaustive_search,
    rescore_result,
    write_records_csv,
)
from .ska import (
    SKAConfig,
    approximation_to_json,
    cache_key,
    compile_levels,
    load_cache,
    save_cache,
)
from .tables import run_figure, run_table
from .verify import verify_word

BACKEND_ENV = "BRAIDSYNTH_BACKEND"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TRUNCATED = 2

ARITIES = {"1": ONE_QUBIT, "2": TWO_QUBIT}


def _backend(label: str | None) -> Backend:
    return Backend.parse(label or os.environ.get(BACKEND_ENV) or "native64")


def _echo_json(payload) -> None:
    click.echo(json.dumps(payload, indent=1, sort_keys=True))


@click.group()
@click.version_option(version=__version__)
def cli():
    """Braidword synthesis for metaplectic-anyon quantum gates."""


@cli.group()
def models():
    """Inspect the three-anyon encoding models."""


@models.command("list")
def models_list():
    """All orderings of {X, Y, X'} pairs with a Z total charge option."""
    for m in enumerate_models():
        flags = []
        if m.braidable:
            flags.append("braidable")
        d = model_to_dict(m)
        if d["gate_model"]:
            flags.append("gate-model")
        click.echo(f"{m.name:8s} initial={m.initial} "
                   f"charge={m.total_charge} {' '.join(flags)}")


@models.command("dump")
@click.option("--model", "name", required=True)
def models_dump(name):
    """One model's labels, charges, and flags as JSON."""
    from .anyons import model as model_lookup

    _echo_json(model_to_dict(model_lookup(name)))


@cli.group()
def ebm():
    """Inspect elementary braid matrices."""


@ebm.command("dump")
@click.option("--model", "name", required=True)
@click.option("--arity", type=click.Choice(sorted(ARITIES)), default="1")
@click.option("--backend", "backend_label", default=None,
              help="native64 or bigfloat:<bits>")
def ebm_dump(name, arity, backend_label):
    """Generator matrices as JSON with decimal-string entries."""
    backend = _backend(backend_label)
    ebms = ebm_set(name, ARITIES[arity], backend)
    _echo_json({
        "model": ebms.model_name,
        "arity": ebms.arity,
        "backend": backend.label(),
        "basis": list(ebms.basis),
        "generators": [g.to_json() for g in ebms.generators],
    })


@cli.command()
@click.option("--gate", type=click.Choice(["H", "T"]), required=True)
@click.option("--model", "name", required=True)
@click.option("--basic-length", default=30, show_default=True)
@click.option("--level", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--population", default=200, show_default=True)
@click.option("--generations", default=500, show_default=True)
@click.option("--restarts", default=3, show_default=True)
@click.option("--cache", "cache_path", type=click.Path(), default=None,
              help="JSON cache reused across invocations")
@click.option("--out-csv", type=click.Path(), default=None,
              help="plot-ready (level, distance) CSV")
def compile(gate, name, basic_length, level, seed, population, generations,
            restarts, cache_path, out_csv):
    """One-qubit gate synthesis by recursive commutator refinement."""
    key = cache_key(name, gate, basic_length, seed)
    cache = load_cache(cache_path) if cache_path else {}
    entry = cache.get(key, {})
    if all(str(lvl) in entry for lvl in range(level + 1)):
        payload = {str(lvl): entry[str(lvl)] for lvl in range(level + 1)}
    else:
        cfg = SKAConfig(model=name, basic_length=basic_length,
                        max_level=level,
                        ga=GAConfig(word_length=basic_length,
                                    population=population,
                                    generations=generations,
                                    restarts=restarts, seed=seed))
        levels = compile_levels(gate, cfg)
        payload = {str(lvl): approximation_to_json(ap, name)
                   for lvl, ap in sorted(levels.items())}
        if cache_path:
            cache.setdefault(key, {}).update(payload)
            save_cache(cache_path, cache)
    _echo_json(payload)
    if out_csv:
        with open(out_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("level", "distance"))
            for lvl in sorted(payload, key=int):
                writer.writerow((lvl, repr(payload[lvl]["distance"])))


@cli.command("ga-search")
@click.option("--model", "name", required=True)
@click.option("--arity", type=click.Choice(sorted(ARITIES)), default="2")
@click.option("--length", required=True, type=int)
@click.option("--objective", "objective_name",
              type=click.Choice(["cnot", "H", "T"]), default="cnot")
@click.option("--seed", default=0, show_default=True)
@click.option("--population", default=200, show_default=True)
@click.option("--generations", default=500, show_default=True)
@click.option("--restarts", default=3, show_default=True)
@click.option("--no-inverses", is_flag=True, default=False,
              help="restrict the alphabet to plain generators")
@click.option("--trace-csv", type=click.Path(), default=None,
              help="per-generation (generation, best, mean) CSV")
def ga_search_cmd(name, arity, length, objective_name, seed, population,
                  generations, restarts, no_inverses, trace_csv):
    """Genetic search for the best fixed-length word against a target."""
    arity_key = ARITIES[arity]
    if objective_name == "cnot":
        if arity_key != TWO_QUBIT:
            raise click.ClickException("cnot objective needs --arity 2")
        obj = Objective.cnot_class()
    else:
        if arity_key != ONE_QUBIT:
            raise click.ClickException(
                f"{objective_name} objective needs --arity 1")
        obj = Objective.gate(objective_name)
    cfg = GAConfig(word_length=length, population=population,
                   generations=generations, restarts=restarts, seed=seed)
    outcome = ga_search(cfg, name, arity_key, obj,
                        use_inverses=not no_inverses)
    _echo_json({"record": asdict(outcome.record),
                "seed": outcome.seed,
                "restart": outcome.restart,
                "generation": outcome.generation,
                "objective_value": outcome.objective_value})
    if trace_csv:
        with open(trace_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("generation", "best", "mean"))
            for row_index, (_, _, best, mean) in enumerate(outcome.trace):
                writer.writerow((row_index, repr(best), repr(mean)))


@cli.command("search-cnot")
@click.option("--model", "name", required=True)
@click.option("--min-len", default=1, show_default=True)
@click.option("--max-len", required=True, type=int)
@click.option("--inverses", is_flag=True, default=False)
@click.option("--top-k", default=3, show_default=True)
@click.option("--threads", default=1, show_default=True)
@click.option("--budget", default=DEFAULT_NODE_BUDGET, show_default=True)
@click.option("--kernel", type=click.Choice(["numba", "numpy"]), default=None)
@click.option("--rescore-bits", default=256, show_default=True,
              help="bigfloat precision for re-scoring survivors")
@click.option("--out", "out_path", type=click.Path(), default=None)
def search_cnot(name, min_len, max_len, inverses, top_k, threads, budget,
                kernel, rescore_bits, out_path):
    """Exhaustive minimum CNOT-class distance per word length."""
    cfg = SearchConfig(model=name, arity=TWO_QUBIT, use_inverses=inverses,
                       min_len=min_len, max_len=max_len, keep_top_k=top_k,
                       threads=threads, node_budget=budget, kernel=kernel)
    result = exhaustive_search(cfg, Objective.cnot_class())
    rescored = rescore_result(result, Backend.bigfloat(rescore_bits))
    records = []
    for length in sorted(result.per_length):
        records.extend(result.per_length[length])
        records.extend(rescored.per_length[length])
    if out_path:
        write_records_csv(out_path, records)
        manifest = RunManifest.for_run(
            {"model": name, "min_len": min_len, "max_len": max_len,
             "inverses": inverses, "top_k": top_k, "threads": threads,
             "budget": budget, "kernel": kernel,
             "rescore_bits": rescore_bits},
            backend=f"native64+bigfloat{rescore_bits}")
        manifest.add_output(out_path)
        manifest.write(Path(out_path).with_suffix(".manifest.json"))
    else:
        click.echo(",".join(CSV_COLUMNS))
        for r in records:
            click.echo(",".join((r.model, str(r.length), r.word,
                                 repr(r.distance),
                                 "" if r.m11_abs is None else repr(r.m11_abs),
                                 repr(r.unitarity_defect), r.backend)))
    if result.truncated:
        click.echo("search truncated by node budget", err=True)
        sys.exit(EXIT_TRUNCATED)


@cli.command()
@click.option("--model", "name", required=True)
@click.option("--word", required=True)
@click.option("--backend", "backend_label", default=None)
def verify(name, word, backend_label):
    """Re-evaluate one word under both multiplication orders."""
    _echo_json(verify_word(name, word, _backend(backend_label)))


@cli.command("run-table")
@click.argument("table_id",
                type=click.Choice(["table1", "table2", "table3", "table4"]))
@click.option("--out-dir", type=click.Path(), default="results",
              show_default=True)
@click.option("--budget", default=DEFAULT_NODE_BUDGET, show_default=True)
@click.option("--max-length", type=int, default=None)
@click.option("--threads", default=1, show_default=True)
@click.option("--kernel", type=click.Choice(["numba", "numpy"]), default=None)
def run_table_cmd(table_id, out_dir, budget, max_length, threads, kernel):
    """Recompute a published table with a diff column."""
    run = run_table(table_id, out_dir=out_dir, budget=budget,
                    max_length=max_length, threads=threads, kernel=kernel)
    click.echo(f"{table_id}: {len(run.rows)} rows -> {run.csv_path}")
    for note in run.notes:
        click.echo(f"note: {note}")
    mismatches = [r for r in run.rows if r.get("diff") == "differs"]
    if mismatches:
        click.echo(f"{len(mismatches)} cells differ from the published "
                   "values (see diff column)")
    if run.truncated:
        click.echo("truncated by node budget", err=True)
        sys.exit(EXIT_TRUNCATED)


@cli.command("run-figure")
@click.argument("fig_id", type=click.Choice(["fig2", "fig45"]))
@click.option("--out-dir", type=click.Path(), default="results",
              show_default=True)
@click.option("--seeds", default="0,1,2", show_default=True)
@click.option("--budget", default=DEFAULT_NODE_BUDGET, show_default=True)
@click.option("--max-length", default=20, show_default=True,
              help="fig45: longest word length")
@click.option("--max-level", default=3, show_default=True,
              help="fig2: deepest refinement level")
@click.option("--basic-length", default=30, show_default=True,
              help="fig2: level-0 word length")
def run_figure_cmd(fig_id, out_dir, seeds, budget, max_length, max_level,
                   basic_length):
    """Recompute a figure's plot data as CSV."""
    seed_tuple = tuple(int(s) for s in seeds.split(",") if s != "")
    kwargs = {}
    if fig_id == "fig2":
        kwargs.update(max_level=max_level, basic_length=basic_length)
    else:
        kwargs.update(max_length=max_length)
    run = run_figure(fig_id, out_dir=out_dir, seeds=seed_tuple,
                     budget=budget, **kwargs)
    click.echo(f"{fig_id}: {len(run.rows)} rows -> {run.csv_path}")
    if run.truncated:
        click.echo("truncated by node budget", err=True)
        sys.exit(EXIT_TRUNCATED)


def main():
    try:
        return cli.main(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_ERROR)
    except click.Abort:
        sys.exit(EXIT_ERROR)
    except SystemExit:
        raise
    except Exception as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        click.echo(f"error: {message}", err=True)
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    main()
