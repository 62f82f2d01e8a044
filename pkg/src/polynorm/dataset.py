"""Benchmark dataset loading, validation, and candidate curation."""

from __future__ import annotations

import json
import logging
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Optional

from .core import (
    ALL_CATEGORIES,
    Category,
    Locale,
    Sample,
    ValidationError,
    parse_category,
    parse_locale,
)

if TYPE_CHECKING:
    from .llm_client import LlmClient

log = logging.getLogger(__name__)

TSV_FIELDS = ("id", "locale", "category", "original", "reference")

# Sentinel separating original from normalized in curation replies; never
# occurs in benchmark text.
PAIR_SENTINEL = "|||"


class DatasetError(ValueError):
    """Malformed dataset file or row."""


@dataclass(frozen=True)
class Dataset:
    locale: Locale
    samples: tuple[Sample, ...]
    source_path: str = ""

    def __post_init__(self):
        ids = set()
        for s in self.samples:
            if s.locale.tag != self.locale.tag:
                raise DatasetError(
                    f"sample {s.id!r} locale {s.locale.tag} != dataset locale {self.locale.tag}"
                )
            if s.id in ids:
                raise DatasetError(f"duplicate sample id {s.id!r}")
            ids.add(s.id)

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class CoverageReport:
    per_category_counts: dict
    missing_categories: tuple[Category, ...]
    total: int


def _sample_from_fields(fields: dict, lineno: int, locale: Locale, path: str) -> Sample:
    try:
        row_locale = parse_locale(fields["locale"])
        category = parse_category(fields["category"])
        if row_locale.tag != locale.tag:
            raise ValidationError(
                f"row locale {row_locale.tag} does not match dataset locale {locale.tag}"
            )
        return Sample(
            id=fields["id"],
            locale=row_locale,
            category=category,
            original=fields["original"],
            reference=fields["reference"],
        )
    except (ValidationError, KeyError) as e:
        raise DatasetError(f"{path}:{lineno}: malformed row: {e}") from e


def load_dataset(path: str | Path, locale: Locale) -> Dataset:
    """Load a TSV or JSONL benchmark file, preserving file order."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    samples = []
    jsonl = p.suffix == ".jsonl"
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if jsonl:
            try:
                fields = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetError(f"{p}:{lineno}: invalid JSON: {e}") from e
        else:
            cols = line.split("\t")
            if len(cols) != len(TSV_FIELDS):
                raise DatasetError(
                    f"{p}:{lineno}: expected {len(TSV_FIELDS)} tab-separated fields, got {len(cols)}"
                )
            fields = dict(zip(TSV_FIELDS, cols))
        samples.append(_sample_from_fields(fields, lineno, locale, str(p)))
    return Dataset(locale=locale, samples=tuple(samples), source_path=str(p))


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a Dataset back out in the format implied by the extension."""
    p = Path(path)
    lines = []
    for s in dataset.samples:
        if p.suffix == ".jsonl":
            lines.append(
                json.dumps(
                    {
                        "id": s.id,
                        "locale": s.locale.tag,
                        "category": s.category.value,
                        "original": s.original,
                        "reference": s.reference,
                    },
                    ensure_ascii=False,
                )
            )
        else:
            lines.append(
                "\t".join([s.id, s.locale.tag, s.category.value, s.original, s.reference])
            )
    p.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def validate_coverage(dataset: Dataset, expected_per_category: int) -> CoverageReport:
    counts = {c: 0 for c in ALL_CATEGORIES}
    for s in dataset.samples:
        counts[s.category] += 1
    missing = tuple(c for c in ALL_CATEGORIES if counts[c] != expected_per_category)
    return CoverageReport(
        per_category_counts=counts,
        missing_categories=missing,
        total=sum(counts.values()),
    )


CURATION_PROMPT = """Generate {n} examples of unnormalized text and its spoken-form normalization for the category "{category}" in {locale_name}. Each example must be a full sentence containing the written form, followed by the same sentence with the written form expanded into words as it would be read aloud. Output one example per line in the exact format:

original text ||| normalized text

Output only the example lines, nothing else."""


def parse_candidate_reply(
    reply: str, locale: Locale, category: Category
) -> list[Sample]:
    """Parse `original ||| normalized` lines; malformed lines are dropped with a warning."""
    samples = []
    for line in reply.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split(PAIR_SENTINEL)
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            log.warning("dropping unparseable candidate line: %r", line)
            continue
        samples.append(
            Sample(
                id=f"candidate-{uuid.uuid4().hex[:12]}",
                locale=locale,
                category=category,
                original=parts[0].strip(),
                reference=parts[1].strip(),
            )
        )
    return samples


class EmptyResultError(RuntimeError):
    """The model reply contained no parseable candidate pairs."""


def curate_candidates(
    locale: Locale, category: Category, n: int, client: "LlmClient"
) -> list[Sample]:
    """Ask the LLM for n candidate (original, normalized) pairs for review.

    Candidates are flagged as unreviewed via the "candidate-" id prefix and
    must go through the review queue before entering any benchmark.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    prompt = CURATION_PROMPT.format(
        n=n, category=category.display_name, locale_name=locale.display_name()
    )
    messages = [{"role": "user", "content": prompt}]
    output = client.complete_messages(messages, sample_id=f"curate-{locale.tag}-{category.value}")
    samples = parse_candidate_reply(output.hypothesis, locale, category)
    if not samples:
        raise EmptyResultError(
            f"no parseable candidate pairs in reply for {locale.tag}/{category.value}"
        )
    return samples
