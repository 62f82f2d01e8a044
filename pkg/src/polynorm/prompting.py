"""Three-part normalization prompt assembly: instruction, ICL examples, target."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .core import (
    ALL_CATEGORIES,
    IclExample,
    Locale,
    Provenance,
    ValidationError,
    icl_set_hash,
    parse_category,
    parse_locale,
)

PLACEHOLDER = "{locale}"

# Per-locale instruction supplements. The Japanese line is a documented
# stand-in requesting katakana readings.
SUPPLEMENTS = {
    "ja-JP": "Write the normalized output entirely in katakana, giving the katakana reading of every word.",
}


class ConfigurationError(RuntimeError):
    """Missing or malformed prompt asset."""


class EmptyStoreError(LookupError):
    """The ICL store has no examples for the requested locale."""


def _instruction_template() -> str:
    try:
        return (
            resources.files("polynorm.assets").joinpath("instruction.txt").read_text("utf-8")
        )
    except FileNotFoundError as e:
        raise ConfigurationError("instruction template asset is missing") from e


def load_instruction(locale: Locale, template: Optional[str] = None) -> str:
    """Resolve the instruction template for a locale, appending any supplement."""
    body = template if template is not None else _instruction_template()
    if body.count(PLACEHOLDER) != 1:
        raise ConfigurationError(
            f"instruction template must contain {PLACEHOLDER!r} exactly once"
        )
    text = body.replace(PLACEHOLDER, locale.display_name())
    supplement = SUPPLEMENTS.get(locale.tag)
    if supplement:
        text = text.rstrip("\n") + "\n" + supplement + "\n"
    return text


@dataclass(frozen=True)
class IclStore:
    """Read-only ICL example collection; edits produce a new store."""

    examples: dict  # Locale tag -> tuple of IclExample, deduplicated
    version: str = ""

    @classmethod
    def from_examples(cls, examples) -> "IclStore":
        by_locale: dict[str, list[IclExample]] = {}
        seen: set[tuple[str, str, str]] = set()
        for e in examples:
            key = (e.locale.tag, e.original, e.normalized)
            if key in seen:
                continue
            seen.add(key)
            by_locale.setdefault(e.locale.tag, []).append(e)
        frozen = {tag: tuple(lst) for tag, lst in by_locale.items()}
        all_examples = [e for lst in frozen.values() for e in lst]
        return cls(examples=frozen, version=icl_set_hash(all_examples))

    def all_examples(self) -> list[IclExample]:
        return [e for lst in self.examples.values() for e in lst]

    def for_locale(self, locale: Locale) -> tuple[IclExample, ...]:
        return self.examples.get(locale.tag, ())

    def with_added(self, example: IclExample) -> "IclStore":
        return IclStore.from_examples(self.all_examples() + [example])

    def with_removed(self, example: IclExample) -> "IclStore":
        key = (example.locale.tag, example.original, example.normalized)
        kept = [
            e
            for e in self.all_examples()
            if (e.locale.tag, e.original, e.normalized) != key
        ]
        if len(kept) == len(self.all_examples()):
            raise LookupError("example not found in store")
        return IclStore.from_examples(kept)


ICL_TSV_FIELDS = ("id", "locale", "category", "original", "normalized", "provenance")


def load_icl_store(path: Union[str, Path]) -> IclStore:
    """Load an ICL store from TSV/JSONL (dataset schema plus provenance column)."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    examples = []
    jsonl = p.suffix == ".jsonl"
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if jsonl:
            fields = json.loads(line)
        else:
            cols = line.split("\t")
            if len(cols) != len(ICL_TSV_FIELDS):
                raise ValidationError(
                    f"{p}:{lineno}: expected {len(ICL_TSV_FIELDS)} fields, got {len(cols)}"
                )
            fields = dict(zip(ICL_TSV_FIELDS, cols))
        examples.append(
            IclExample(
                locale=parse_locale(fields["locale"]),
                category=parse_category(fields["category"]),
                original=fields["original"],
                normalized=fields["normalized"],
                provenance=Provenance(fields.get("provenance", "expert_authored")),
            )
        )
    return IclStore.from_examples(examples)


def save_icl_store(store: IclStore, path: Union[str, Path]) -> None:
    p = Path(path)
    lines = []
    for i, e in enumerate(store.all_examples()):
        if p.suffix == ".jsonl":
            lines.append(
                json.dumps(
                    {
                        "id": f"icl-{i:04d}",
                        "locale": e.locale.tag,
                        "category": e.category.value,
                        "original": e.original,
                        "normalized": e.normalized,
                        "provenance": e.provenance.value,
                    },
                    ensure_ascii=False,
                )
            )
        else:
            lines.append(
                "\t".join(
                    [
                        f"icl-{i:04d}",
                        e.locale.tag,
                        e.category.value,
                        e.original,
                        e.normalized,
                        e.provenance.value,
                    ]
                )
            )
    p.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


ALL = "all"


def select_icl(store: IclStore, locale: Locale, k) -> list[IclExample]:
    """Deterministic ICL selection: category-grouped, round-robin across categories.

    Examples are bucketed by category in table order; selection takes one
    example per populated category per round until k is reached. k="all"
    returns the full per-locale list in that order.
    """
    pool = store.for_locale(locale)
    if not pool:
        raise EmptyStoreError(f"no ICL examples for locale {locale.tag}")
    buckets = {c: [] for c in ALL_CATEGORIES}
    for e in pool:
        buckets[e.category].append(e)
    rounds = max(len(b) for b in buckets.values())
    ordered = []
    for r in range(rounds):
        for c in ALL_CATEGORIES:
            if r < len(buckets[c]):
                ordered.append(buckets[c][r])
    if k == ALL:
        return ordered
    if not isinstance(k, int) or k < 1:
        raise ValidationError(f"k must be a positive integer or 'all', got {k!r}")
    return ordered[:k]


@dataclass(frozen=True)
class PromptBundle:
    instruction: str
    icl: tuple
    target: str
    locale: Locale

    def messages(self) -> list[dict]:
        """Chat rendering: system instruction, ICL pairs as user/assistant turns, target last."""
        msgs = [{"role": "system", "content": self.instruction}]
        for e in self.icl:
            msgs.append({"role": "user", "content": e.original})
            msgs.append({"role": "assistant", "content": e.normalized})
        msgs.append({"role": "user", "content": self.target})
        return msgs

    def rendered_bytes(self) -> bytes:
        return json.dumps(self.messages(), ensure_ascii=False, sort_keys=True).encode("utf-8")


def build_prompt(
    locale: Locale, store: IclStore, target: str, k=ALL, template: Optional[str] = None
) -> PromptBundle:
    if not target or not target.strip():
        raise ValidationError("target text must be non-empty")
    instruction = load_instruction(locale, template=template)
    icl = select_icl(store, locale, k)
    return PromptBundle(
        instruction=instruction, icl=tuple(icl), target=target, locale=locale
    )


def check_no_leakage(store: IclStore, dataset) -> None:
    """Fail run setup if any ICL pair also appears in the benchmark being evaluated."""
    icl_pairs = {(e.original, e.normalized) for e in store.for_locale(dataset.locale)}
    bench_pairs = {(s.original, s.reference) for s in dataset.samples}
    overlap = icl_pairs & bench_pairs
    if overlap:
        example = next(iter(overlap))
        raise ValidationError(
            f"{len(overlap)} ICL example(s) leak into the benchmark, e.g. {example[0]!r}"
        )
