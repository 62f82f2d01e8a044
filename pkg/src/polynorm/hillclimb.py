"""Iteration tracking and per-category comparison for the ICL hillclimb loop."""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .core import ALL_CATEGORIES, Category
from .reporting import RunReport, ScoredSample


class UnknownParentError(KeyError):
    pass


@dataclass(frozen=True)
class IterationRecord:
    run_id: str
    report: RunReport
    parent_run_id: Optional[str] = None

    @property
    def config(self):
        return self.report.config

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "parent_run_id": self.parent_run_id,
            "report": self.report.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IterationRecord":
        return cls(
            run_id=d["run_id"],
            report=RunReport.from_dict(d["report"]),
            parent_run_id=d.get("parent_run_id"),
        )


@dataclass(frozen=True)
class CategoryDelta:
    category: Category
    before: float
    after: float

    @property
    def delta(self) -> float:
        return self.after - self.before


def compare_runs(a: IterationRecord, b: IterationRecord) -> tuple[list[CategoryDelta], float]:
    """Per-category rate deltas (b minus a), worst regressions first, plus overall delta."""
    ca, cb = a.report.config, b.report.config
    if ca.locale.tag != cb.locale.tag or ca.system_id != cb.system_id:
        raise ValueError(
            f"runs are not comparable: {ca.locale.tag}/{ca.system_id} vs {cb.locale.tag}/{cb.system_id}"
        )
    deltas = []
    for cat in ALL_CATEGORIES:
        in_a, in_b = cat in a.report.per_category, cat in b.report.per_category
        if not in_a and not in_b:
            continue
        before = a.report.per_category[cat].rate if in_a else 0.0
        after = b.report.per_category[cat].rate if in_b else 0.0
        deltas.append(CategoryDelta(category=cat, before=before, after=after))
    deltas.sort(key=lambda d: -d.delta)
    overall_delta = b.report.overall_rate - a.report.overall_rate
    return deltas, overall_delta


def cluster_errors(scored: list[ScoredSample], top_k: int) -> list[dict]:
    """Categories ranked by total edit count, with up to 3 worst sample ids each."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    by_cat: dict[Category, list[ScoredSample]] = {}
    for s in scored:
        by_cat.setdefault(s.sample.category, []).append(s)
    clusters = []
    for cat, group in by_cat.items():
        edits = sum(
            s.metric.substitutions + s.metric.deletions + s.metric.insertions for s in group
        )
        if edits == 0:
            continue
        worst = sorted(group, key=lambda s: -s.metric.wer_or_cer)[:3]
        clusters.append(
            {
                "category": cat,
                "error_count": edits,
                "example_sample_ids": [s.sample.id for s in worst],
            }
        )
    clusters.sort(key=lambda c: -c["error_count"])
    return clusters[:top_k]


class RunStore:
    """Append-only JSON-lines ledger of iteration records at <root>/index.jsonl."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.index_path = self.root / "index.jsonl"
        self._lock = threading.Lock()

    def records(self) -> list[IterationRecord]:
        if not self.index_path.exists():
            return []
        out = []
        for line in self.index_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                out.append(IterationRecord.from_dict(json.loads(line)))
        return out

    def get(self, run_id: str) -> Optional[IterationRecord]:
        for rec in self.records():
            if rec.run_id == run_id:
                return rec
        return None

    def lineage(self, run_id: str) -> list[IterationRecord]:
        """Ancestry chain of a run, oldest first."""
        by_id = {r.run_id: r for r in self.records()}
        chain = []
        cur = by_id.get(run_id)
        while cur is not None:
            chain.append(cur)
            cur = by_id.get(cur.parent_run_id) if cur.parent_run_id else None
        chain.reverse()
        return chain

    def append(self, record: IterationRecord) -> None:
        with self._lock:
            with self.index_path.open("a", encoding="utf-8") as f:
                f.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def make_run_id(report: RunReport) -> str:
    payload = json.dumps(
        {"config": report.config.to_dict(), "created_at": report.created_at},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def record_iteration(
    report: RunReport, parent: Optional[str], store: RunStore
) -> IterationRecord:
    """Append an immutable iteration record; parent must already exist if given."""
    if parent is not None and store.get(parent) is None:
        raise UnknownParentError(f"unknown parent run id {parent!r}")
    record = IterationRecord(run_id=make_run_id(report), report=report, parent_run_id=parent)
    store.append(record)
    return record
