"""polynorm command-line interface."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import baseline as baseline_mod
from .config import load_config, provider_config
from .core import ValidationError, parse_category, parse_locale
from .dataset import curate_candidates, load_dataset, save_dataset, validate_coverage
from .llm_client import LlmClient
from .metrics import bleu, canonicalize, error_rate
from .prompting import load_icl_store
from .reporting import RunReport, render_report
from .runner import run_eval_from_paths


def _fail(message: str, code: int = 1):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.option("--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING)


def _mode_and_cassette(replay, record):
    if replay and record:
        _fail("--replay and --record are mutually exclusive")
    if replay:
        return "replay", replay
    if record:
        return "record", record
    return "live", None


@main.command()
@click.option("--dataset", "dataset_path", required=True, type=click.Path())
@click.option("--icl", "icl_path", required=True, type=click.Path())
@click.option("--provider", default="openai")
@click.option("--replay", type=click.Path(), default=None, help="Replay cassette path.")
@click.option("--record", type=click.Path(), default=None, help="Record cassette path.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Runs directory.")
@click.option("--locale", "locale_tag", required=True)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--parallelism", default=4, type=int)
@click.option("--iteration", default=0, type=int)
@click.option("--parent", "parent_run_id", default=None)
@click.option("--deterministic", is_flag=True, help="Fixed timestamps for reproducible output.")
def eval(dataset_path, icl_path, provider, replay, record, out_dir, locale_tag,
         config_path, parallelism, iteration, parent_run_id, deterministic):
    """Run a full evaluation: prompts, completions, scoring, report, iteration record."""
    mode, cassette = _mode_and_cassette(replay, record)
    try:
        locale = parse_locale(locale_tag)
        cfg = provider_config(provider, load_config(config_path))
        result = run_eval_from_paths(
            dataset_path, icl_path, locale, cfg, out_dir,
            mode=mode, cassette_path=cassette, parallelism=parallelism,
            iteration=iteration, parent_run_id=parent_run_id,
            deterministic=deterministic,
        )
    except (ValidationError, OSError, KeyError, ValueError) as e:
        _fail(str(e))
    click.echo(f"run {result.record.run_id} written to {result.run_dir}")
    click.echo(render_report(result.record.report, "markdown"))
    if result.item_errors:
        click.echo(f"{result.item_errors} item-level failure(s); see samples.jsonl", err=True)
        sys.exit(2)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
def baseline(in_path, out_path):
    """Normalize a file line-by-line with the rule-based English baseline."""
    try:
        lines = Path(in_path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        _fail(str(e))
    normalized = [baseline_mod.normalize_sentence(line) for line in lines]
    Path(out_path).write_text("\n".join(normalized) + ("\n" if normalized else ""), encoding="utf-8")
    click.echo(f"normalized {len(normalized)} line(s) -> {out_path}")


@main.command()
@click.option("--ref", "ref_path", required=True, type=click.Path())
@click.option("--hyp", "hyp_path", required=True, type=click.Path())
@click.option("--locale", "locale_tag", required=True)
def score(ref_path, hyp_path, locale_tag):
    """Score line-aligned reference and hypothesis files."""
    try:
        locale = parse_locale(locale_tag)
        refs = Path(ref_path).read_text(encoding="utf-8").splitlines()
        hyps = Path(hyp_path).read_text(encoding="utf-8").splitlines()
    except (ValidationError, OSError) as e:
        _fail(str(e))
    if len(refs) != len(hyps):
        _fail(f"line count mismatch: {len(refs)} references vs {len(hyps)} hypotheses")
    edits = ref_len = 0
    pairs = []
    for r, h in zip(refs, hyps):
        rc, hc = canonicalize(r, locale), canonicalize(h, locale)
        m = error_rate(rc, hc)
        edits += m.substitutions + m.deletions + m.insertions
        ref_len += m.ref_len
        pairs.append((rc, hc))
    rate = edits / ref_len if ref_len else 0.0
    label = "WER" if locale.whitespace_delimited else "CER"
    click.echo(f"{label}: {100 * rate:.2f}%  BLEU: {100 * bleu(pairs):.2f}%")


@main.command()
@click.option("--locale", "locale_tag", required=True)
@click.option("--category", "category_name", required=True)
@click.option("--n", default=5, type=int)
@click.option("--provider", default="openai")
@click.option("--replay", type=click.Path(), default=None)
@click.option("--record", type=click.Path(), default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
def curate(locale_tag, category_name, n, provider, replay, record, out_path, config_path):
    """Generate unreviewed candidate benchmark pairs for one category."""
    mode, cassette = _mode_and_cassette(replay, record)
    try:
        locale = parse_locale(locale_tag)
        category = parse_category(category_name)
        cfg = provider_config(provider, load_config(config_path))
        client = LlmClient(cfg, mode=mode, cassette_path=cassette)
        samples = curate_candidates(locale, category, n, client)
    except (ValidationError, OSError, KeyError, RuntimeError) as e:
        _fail(str(e))
    from .dataset import Dataset

    save_dataset(Dataset(locale=locale, samples=tuple(samples)), out_path)
    click.echo(f"wrote {len(samples)} candidate(s) to {out_path}")


@main.command()
@click.option("--run", "run_dir", required=True, type=click.Path())
@click.option("--format", "fmt", default="markdown", type=click.Choice(["markdown", "json", "tsv"]))
def report(run_dir, fmt):
    """Re-render a stored run report."""
    path = Path(run_dir) / "report.json"
    try:
        rep = RunReport.from_dict(json.loads(path.read_text(encoding="utf-8")))
    except (OSError, ValueError, KeyError) as e:
        _fail(str(e))
    click.echo(render_report(rep, fmt), nl=False)


@main.command()
@click.option("--run", "run_dir", required=True, type=click.Path())
@click.option("--sample", "sample_id", default=None)
@click.option("--only-errors", is_flag=True)
def diff(run_dir, sample_id, only_errors):
    """Print side-by-side diff records from a stored run."""
    path = Path(run_dir) / "samples.jsonl"
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        _fail(str(e))
    shown = 0
    for line in lines:
        rec = json.loads(line)
        if sample_id and rec["sample_id"] != sample_id:
            continue
        if only_errors and not rec["highlights"]:
            continue
        click.echo(f"--- {rec['sample_id']} ({rec['category']}, rate {100 * rec['rate']:.2f}%)")
        click.echo(f"original:   {rec['original']}")
        click.echo(f"reference:  {rec['reference']}")
        click.echo(f"hypothesis: {rec['hypothesis']}")
        if rec["highlights"]:
            ops = ", ".join(
                f"{h['op']}@ref{h['ref_index']}/hyp{h['hyp_index']}" for h in rec["highlights"]
            )
            click.echo(f"errors:     {ops}")
        shown += 1
    if sample_id and shown == 0:
        _fail(f"sample {sample_id!r} not found in {path}")


@main.command()
@click.option("--runs", "runs_dir", required=True, type=click.Path())
@click.option("--port", default=8321, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--icl", "icl_path", type=click.Path(), default=None)
@click.option("--static", "static_dir", type=click.Path(), default=None,
              help="Directory with the built review UI.")
@click.option("--config", "config_path", type=click.Path(), default=None)
def serve(runs_dir, port, host, icl_path, static_dir, config_path):
    """Serve the review console API (and UI, if built) over HTTP."""
    if not Path(runs_dir).is_dir():
        _fail(f"runs directory not found: {runs_dir}")
    import errno

    import uvicorn

    from .review_service import create_app

    app = create_app(runs_dir, icl_path=icl_path, static_dir=static_dir,
                     config_path=config_path)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as e:
        if e.errno == errno.EADDRINUSE:
            _fail(f"port {port} is already in use")
        raise


@main.command()
@click.option("--dataset", "dataset_path", required=True, type=click.Path())
@click.option("--locale", "locale_tag", required=True)
@click.option("--expected", default=20, type=int)
def validate(dataset_path, locale_tag, expected):
    """Check per-category coverage of a benchmark file."""
    try:
        locale = parse_locale(locale_tag)
        ds = load_dataset(dataset_path, locale)
    except (ValidationError, ValueError, OSError) as e:
        _fail(str(e))
    rep = validate_coverage(ds, expected)
    click.echo(f"total: {rep.total}")
    if rep.missing_categories:
        for c in rep.missing_categories:
            click.echo(f"off-count category: {c.value} ({rep.per_category_counts[c]}/{expected})")
        sys.exit(2)
    click.echo("coverage OK")


if __name__ == "__main__":
    main()
