import sys
from pathlib import Path

import pytest

from polynorm.core import (
    ALL_CATEGORIES,
    IclExample,
    Provenance,
    Sample,
    parse_category,
    parse_locale,
)
from polynorm.dataset import Dataset
from polynorm.prompting import IclStore

FIXTURES = Path(__file__).parent / "fixtures"

EN_US = parse_locale("en-US")
DE_DE = parse_locale("de-DE")
JA_JP = parse_locale("ja-JP")


@pytest.fixture
def en_us():
    return EN_US


def make_full_dataset_lines(locale_tag="en-US", per_category=20):
    """Synthetic 27 x per_category benchmark rows in TSV format."""
    lines = []
    i = 0
    for cat in ALL_CATEGORIES:
        for j in range(per_category):
            lines.append(
                "\t".join(
                    [
                        f"s{i:04d}",
                        locale_tag,
                        cat.value,
                        f"input {cat.value} {j}",
                        f"reference {cat.value} {j}",
                    ]
                )
            )
            i += 1
    return lines


@pytest.fixture
def full_dataset_file(tmp_path):
    p = tmp_path / "bench.tsv"
    p.write_text("\n".join(make_full_dataset_lines()) + "\n", encoding="utf-8")
    return p


def make_icl_store(locale=EN_US):
    examples = [
        IclExample(locale, parse_category("cardinal"), "I own 3 cats.", "I own three cats.",
                   Provenance.KESTREL_TRANSLATED),
        IclExample(locale, parse_category("cardinal"), "We saw 12 birds.", "We saw twelve birds.",
                   Provenance.SYNTHETIC),
        IclExample(locale, parse_category("date"), "Born on 4/18.", "Born on april eighteenth.",
                   Provenance.EXPERT_AUTHORED),
        IclExample(locale, parse_category("ordinal"), "The 3rd door.", "The third door.",
                   Provenance.EXPERT_AUTHORED),
        IclExample(locale, parse_category("time"), "At 9:15 sharp.", "At nine fifteen sharp.",
                   Provenance.EXPERT_AUTHORED),
        IclExample(locale, parse_category("currency"), "It costs $5.", "It costs five dollars.",
                   Provenance.EXPERT_AUTHORED),
    ]
    return IclStore.from_examples(examples)


@pytest.fixture
def icl_store():
    return make_icl_store()


@pytest.fixture
def small_dataset():
    samples = (
        Sample("d001", EN_US, parse_category("cardinal"), "I have 7 apples.", "I have seven apples."),
        Sample("d002", EN_US, parse_category("date"), "It was 2020.", "It was twenty twenty."),
        Sample("d003", EN_US, parse_category("sports_score"), "We won 3-2.", "We won three to two."),
    )
    return Dataset(locale=EN_US, samples=samples)
