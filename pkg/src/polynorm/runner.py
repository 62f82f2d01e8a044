"""End-to-end evaluation pipeline shared by the CLI and the review service."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .core import Decoding, Locale, RunConfig
from .dataset import load_dataset
from .hillclimb import IterationRecord, RunStore, make_run_id, record_iteration
from .llm_client import LlmClient, ProviderConfig
from .prompting import ALL, IclStore, build_prompt, check_no_leakage, load_icl_store
from .reporting import ScoredSample, aggregate, score_run, write_run_dir

DETERMINISTIC_TIMESTAMP = "1970-01-01T00:00:00+00:00"


@dataclass
class EvalResult:
    record: IterationRecord
    scored: list[ScoredSample]
    run_dir: Path
    item_errors: int


def run_eval(
    dataset_path: str | Path,
    locale: Locale,
    icl_store: IclStore,
    provider_cfg: ProviderConfig,
    runs_root: str | Path,
    mode: str = "live",
    cassette_path: Optional[str | Path] = None,
    parallelism: int = 4,
    iteration: int = 0,
    parent_run_id: Optional[str] = None,
    deterministic: bool = False,
) -> EvalResult:
    """Build prompts, execute the batch, score, aggregate, and persist a run."""
    dataset = load_dataset(dataset_path, locale)
    check_no_leakage(icl_store, dataset)
    client = LlmClient(provider_cfg, mode=mode, cassette_path=cassette_path)
    prompts = [
        (s.id, build_prompt(locale, icl_store, s.original, k=ALL)) for s in dataset.samples
    ]
    outputs = client.complete_batch(prompts, parallelism=parallelism)
    scored = score_run(dataset, outputs)
    config = RunConfig(
        locale=locale,
        system_id=provider_cfg.model_id,
        iteration=iteration,
        icl_set_hash=icl_store.version,
        decoding=Decoding(
            temperature=provider_cfg.temperature, max_tokens=provider_cfg.max_tokens
        ),
    )
    created_at = DETERMINISTIC_TIMESTAMP if deterministic else None
    report = aggregate(scored, config, created_at=created_at)
    store = RunStore(runs_root)
    run_id = make_run_id(report)
    run_dir = store.root / run_id
    write_run_dir(run_dir, report, scored)
    record = record_iteration(report, parent_run_id, store)
    item_errors = sum(1 for s in scored if s.client_error)
    return EvalResult(record=record, scored=scored, run_dir=run_dir, item_errors=item_errors)


def run_eval_from_paths(
    dataset_path: str | Path,
    icl_path: str | Path,
    locale: Locale,
    provider_cfg: ProviderConfig,
    runs_root: str | Path,
    **kwargs,
) -> EvalResult:
    return run_eval(
        dataset_path, locale, load_icl_store(icl_path), provider_cfg, runs_root, **kwargs
    )
