"""Command-line front end: align, heat, eval, synth.

Exit codes: 0 success, 1 usage error, 2 data/config error, 3 internal failure.
"""
from __future__ import annotations

import json
import sys

import click

from .engine import eat
from .errors import HeatAlignError, ParseError
from .evaluation import (
    default_thresholds,
    precision_recall_pairs,
    matrix_predictions,
)
from .ingest import (
    load_fact_graph,
    load_ground_truth,
    load_pipeline_config,
    save_fact_graph,
    save_ground_truth,
)
from .pipeline import heat as run_heat
from .pipeline import merge_log_tsv
from .synth import SynthSpec, generate_synthetic


@click.group()
def cli():
    """Bayesian entity alignment for event-driven fact graphs."""


@cli.command("align")
@click.option("--graph-a", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--graph-b", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--stage", "stage_name", required=True,
              help="Name of the stage in the config to run.")
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
def cmd_align(graph_a, graph_b, config_path, stage_name, out):
    """Run a single scoring pass and write the alignment matrix TSV."""
    stages = load_pipeline_config(config_path)
    by_name = {s.name: s for s in stages}
    if stage_name not in by_name:
        raise ParseError(
            f"unknown stage {stage_name!r}; available: {sorted(by_name)}"
        )
    g = load_fact_graph(graph_a)
    g_prime = load_fact_graph(graph_b)
    matrix = eat(g, g_prime, by_name[stage_name])
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(matrix.to_tsv())
    n_rows = len(matrix.rows)
    n_mergeable = sum(
        1 for row in matrix.rows.values() if row.best_real() is not None
    )
    click.echo(f"rows: {n_rows}  mergeable: {n_mergeable}  wrote {out}")


@cli.command("heat")
@click.option("--graph-a", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--graph-b", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out-graph", required=True, type=click.Path(dir_okay=False))
@click.option("--out-log", required=True, type=click.Path(dir_okay=False))
def cmd_heat(graph_a, graph_b, config_path, out_graph, out_log):
    """Run every pipeline stage and write the unified graph plus merge log."""
    stages = load_pipeline_config(config_path)
    g = load_fact_graph(graph_a)
    g_prime = load_fact_graph(graph_b)
    unified = run_heat(g, g_prime, stages)
    save_fact_graph(unified.graph, out_graph)
    with open(out_log, "w", encoding="utf-8") as handle:
        handle.write(merge_log_tsv(unified.merge_log))
    click.echo(
        f"stages: {len(stages)}  merges: {len(unified.merge_log)}  "
        f"entities: {len(unified.graph.entities)}  wrote {out_graph}, {out_log}"
    )


def _parse_thresholds(raw):
    if raw is None:
        return default_thresholds()
    try:
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ParseError(f"bad threshold list {raw!r}") from None
    if not values:
        raise ParseError("threshold list is empty")
    return values


@cli.command("eval")
@click.option("--matrix", "matrix_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--log", "log_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--truth", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--thresholds", default=None,
              help="Comma-separated ascending list; default 0.05..0.95 step 0.05.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def cmd_eval(matrix_path, log_path, truth, thresholds, out):
    """Score an alignment matrix or merge log against ground-truth pairs."""
    if bool(matrix_path) == bool(log_path):
        raise click.UsageError("exactly one of --matrix or --log is required")
    ground_truth = load_ground_truth(truth)
    if matrix_path:
        from .engine import AlignmentMatrix

        with open(matrix_path, encoding="utf-8") as handle:
            matrix = AlignmentMatrix.from_tsv(handle.read())
        predictions = matrix_predictions(matrix)
    else:
        predictions = []
        with open(log_path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 4:
                    raise ParseError(f"{log_path}:{lineno}: expected 4 columns")
                predictions.append((parts[0], parts[1], float(parts[2])))
    report = precision_recall_pairs(
        predictions, ground_truth, _parse_thresholds(thresholds)
    )
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(report.to_csv())
    click.echo(f"points: {len(report.points)}  wrote {out}")


@cli.command("synth")
@click.option("--spec", "spec_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON file with SynthSpec fields.")
@click.option("--seed", type=int, default=None, help="Overrides the spec's seed.")
@click.option("--out-prefix", required=True)
def cmd_synth(spec_path, seed, out_prefix):
    """Generate a synthetic post/pre graph pair with planted ground truth."""
    with open(spec_path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{spec_path}: malformed JSON ({exc.msg})") from exc
    if seed is not None:
        raw["seed"] = seed
    spec = SynthSpec.from_dict(raw)
    post, pre, truth = generate_synthetic(spec)
    save_fact_graph(post, f"{out_prefix}_post.jsonl")
    save_fact_graph(pre, f"{out_prefix}_pre.jsonl")
    save_ground_truth(truth, f"{out_prefix}_truth.tsv")
    click.echo(
        f"post entities: {len(post.entities)}  pre entities: {len(pre.entities)}  "
        f"truth pairs: {len(truth)}  wrote {out_prefix}_*.{{jsonl,tsv}}"
    )


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except HeatAlignError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 2
    except Exception as exc:  # internal invariant failure
        click.echo(f"internal error: {exc!r}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
