"""Run scoring, per-category aggregation, report rendering, and sample diffs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .core import ALL_CATEGORIES, Category, RunConfig, Sample, parse_category
from .dataset import Dataset
from .llm_client import ModelOutput
from .metrics import (
    Alignment,
    CanonicalText,
    MetricValue,
    align,
    bleu,
    canonicalize,
    error_rate,
)


@dataclass(frozen=True)
class ScoredSample:
    sample: Sample
    hypothesis: str
    metric: MetricValue
    alignment: Alignment
    ref_canonical: CanonicalText
    hyp_canonical: CanonicalText
    client_error: Optional[str] = None

    @property
    def flagged_errors(self) -> tuple:
        return tuple(op for op in self.alignment.ops if op.op != "match")


@dataclass(frozen=True)
class CategoryStats:
    rate: float
    bleu: float
    n: int
    edits: int
    ref_len: int


@dataclass(frozen=True)
class RunReport:
    config: RunConfig
    per_category: dict  # Category -> CategoryStats
    overall_rate: float
    overall_bleu: float
    created_at: str

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "per_category": {
                c.value: {
                    "rate": s.rate,
                    "bleu": s.bleu,
                    "n": s.n,
                    "edits": s.edits,
                    "ref_len": s.ref_len,
                }
                for c, s in self.per_category.items()
            },
            "overall_rate": self.overall_rate,
            "overall_bleu": self.overall_bleu,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(
            config=RunConfig.from_dict(d["config"]),
            per_category={
                parse_category(name): CategoryStats(
                    rate=s["rate"],
                    bleu=s["bleu"],
                    n=s["n"],
                    edits=s["edits"],
                    ref_len=s["ref_len"],
                )
                for name, s in d["per_category"].items()
            },
            overall_rate=d["overall_rate"],
            overall_bleu=d["overall_bleu"],
            created_at=d["created_at"],
        )


class DuplicateOutputError(ValueError):
    pass


def score_sample(sample: Sample, hypothesis: str, client_error: Optional[str] = None) -> ScoredSample:
    ref_ct = canonicalize(sample.reference, sample.locale)
    hyp_ct = canonicalize(hypothesis, sample.locale)
    metric = error_rate(ref_ct, hyp_ct)
    alignment = align(ref_ct, hyp_ct)
    return ScoredSample(
        sample=sample,
        hypothesis=hypothesis,
        metric=metric,
        alignment=alignment,
        ref_canonical=ref_ct,
        hyp_canonical=hyp_ct,
        client_error=client_error,
    )


def score_run(dataset: Dataset, outputs: list[ModelOutput]) -> list[ScoredSample]:
    """Score every dataset sample; missing or failed outputs count as empty hypotheses."""
    by_id: dict[str, ModelOutput] = {}
    for out in outputs:
        if out.sample_id in by_id:
            raise DuplicateOutputError(f"duplicate output for sample {out.sample_id!r}")
        by_id[out.sample_id] = out
    scored = []
    for sample in dataset.samples:
        out = by_id.get(sample.id)
        if out is None:
            scored.append(score_sample(sample, "", client_error="missing output"))
        elif out.error:
            scored.append(score_sample(sample, "", client_error=out.error))
        else:
            scored.append(score_sample(sample, out.hypothesis))
    return scored


def aggregate(scored: list[ScoredSample], config: RunConfig, created_at: Optional[str] = None) -> RunReport:
    """Micro-average rates within category; overall rate is the macro mean over
    populated categories; BLEU is corpus-level within category and overall."""
    if not scored:
        raise ValueError("cannot aggregate an empty run")
    scored = sorted(scored, key=lambda s: s.sample.id)
    by_cat: dict[Category, list[ScoredSample]] = {}
    for s in scored:
        by_cat.setdefault(s.sample.category, []).append(s)
    per_category = {}
    for cat in ALL_CATEGORIES:
        if cat not in by_cat:
            continue
        group = by_cat[cat]
        edits = sum(s.metric.substitutions + s.metric.deletions + s.metric.insertions for s in group)
        ref_len = sum(s.metric.ref_len for s in group)
        per_category[cat] = CategoryStats(
            rate=edits / ref_len if ref_len else 0.0,
            bleu=bleu([(s.ref_canonical, s.hyp_canonical) for s in group]),
            n=len(group),
            edits=edits,
            ref_len=ref_len,
        )
    rates = [s.rate for s in per_category.values() if s.n > 0]
    overall_rate = sum(rates) / len(rates)
    overall_bleu = bleu([(s.ref_canonical, s.hyp_canonical) for s in scored])
    return RunReport(
        config=config,
        per_category=per_category,
        overall_rate=overall_rate,
        overall_bleu=overall_bleu,
        created_at=created_at or datetime.now(timezone.utc).isoformat(),
    )


def _pct(x: float) -> str:
    return f"{100.0 * x:.2f}"


def render_report(report: RunReport, format: str = "markdown") -> str:
    if format == "json":
        return json.dumps(report.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    if format == "tsv":
        lines = ["category\trate\tbleu\tn\tedits\tref_len"]
        for c, s in report.per_category.items():
            lines.append(f"{c.value}\t{s.rate!r}\t{s.bleu!r}\t{s.n}\t{s.edits}\t{s.ref_len}")
        lines.append(f"overall\t{report.overall_rate!r}\t{report.overall_bleu!r}\t\t\t")
        return "\n".join(lines) + "\n"
    if format == "markdown":
        cfg = report.config
        rate_label = "WER (%)" if cfg.locale.whitespace_delimited else "CER (%)"
        lines = [
            f"# Run report: {cfg.system_id} / {cfg.locale.tag} / iteration {cfg.iteration}",
            "",
            f"| Language | System | {rate_label} | BLEU (%) |",
            "| --- | --- | --- | --- |",
            f"| {cfg.locale.display_name()} | {cfg.system_id} | {_pct(report.overall_rate)} | {_pct(report.overall_bleu)} |",
            "",
        ]
        if report.per_category:
            lines += [
                f"| Category | {rate_label} | BLEU (%) | N |",
                "| --- | --- | --- | --- |",
            ]
            for c, s in report.per_category.items():
                lines.append(f"| {c.display_name} | {_pct(s.rate)} | {_pct(s.bleu)} | {s.n} |")
            lines.append("")
        return "\n".join(lines)
    raise ValueError(f"unknown report format {format!r}")


def diff_sample(s: ScoredSample) -> dict:
    """Side-by-side diff: original / ground truth / hypothesis with highlighted ops."""
    return {
        "sample_id": s.sample.id,
        "category": s.sample.category.value,
        "original": s.sample.original,
        "reference": s.sample.reference,
        "hypothesis": s.hypothesis,
        "ref_tokens": list(s.ref_canonical.tokens),
        "hyp_tokens": list(s.hyp_canonical.tokens),
        "rate": s.metric.wer_or_cer,
        "client_error": s.client_error,
        "highlights": [
            {"op": op.op, "ref_index": op.ref_index, "hyp_index": op.hyp_index}
            for op in s.alignment.ops
            if op.op != "match"
        ],
    }


def scored_sample_to_dict(s: ScoredSample) -> dict:
    d = diff_sample(s)
    d["locale"] = s.sample.locale.tag
    d["edit_counts"] = {
        "S": s.metric.substitutions,
        "D": s.metric.deletions,
        "I": s.metric.insertions,
    }
    d["ref_len"] = s.metric.ref_len
    d["bleu"] = s.metric.bleu
    return d


def write_run_dir(run_dir: str | Path, report: RunReport, scored: list[ScoredSample]) -> None:
    p = Path(run_dir)
    p.mkdir(parents=True, exist_ok=True)
    (p / "report.md").write_text(render_report(report, "markdown"), encoding="utf-8")
    (p / "report.json").write_text(render_report(report, "json"), encoding="utf-8")
    (p / "report.tsv").write_text(render_report(report, "tsv"), encoding="utf-8")
    with (p / "samples.jsonl").open("w", encoding="utf-8") as f:
        for s in scored:
            f.write(json.dumps(scored_sample_to_dict(s), ensure_ascii=False) + "\n")
