#!/usr/bin/env python3
"""Regenerate the shipped replay fixtures under tests/fixtures/.

Deterministic: rebuilding produces the same dataset/ICL files and a cassette
keyed by the current prompt rendering. Run after changing the instruction
asset, prompt rendering, or the fixture data below.
"""

from __future__ import annotations

import json
from pathlib import Path

from polynorm.core import parse_locale
from polynorm.dataset import CURATION_PROMPT, load_dataset
from polynorm.llm_client import Cassette, ProviderConfig, make_payload, request_digest
from polynorm.prompting import build_prompt, load_icl_store

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"

EN = parse_locale("en-US")
CFG = ProviderConfig(model_id="gpt-4o")  # matches the CLI's default provider

# (category, original, reference); 30 rows over 10 categories
DATASET_ROWS = [
    ("cardinal", "She bought 3 apples.", "She bought three apples."),
    ("cardinal", "There are 120 seats.", "There are one hundred twenty seats."),
    ("cardinal", "He counted 45 sheep.", "He counted forty five sheep."),
    ("date", "The meeting is on 4/18.", "The meeting is on april eighteenth."),
    ("date", "It happened in 2020.", "It happened in twenty twenty."),
    ("date", "Signed on 05/20/2023.", "Signed on may twentieth twenty twenty three."),
    ("ordinal", "It's the 17th century.", "It's the seventeenth century."),
    ("ordinal", "She finished in 2nd place.", "She finished in second place."),
    ("ordinal", "The 31st floor is closed.", "The thirty first floor is closed."),
    ("time", "The train leaves at 12:30.", "The train leaves at twelve thirty."),
    ("time", "Lunch is at 1:05.", "Lunch is at one oh five."),
    ("time", "We open at 9:00.", "We open at nine o'clock."),
    ("currency", "The book costs $20.", "The book costs twenty dollars."),
    ("currency", "I paid $1.", "I paid one dollar."),
    ("currency", "Dinner was $12.50.", "Dinner was twelve dollars and fifty cents."),
    ("sports_score", "The game ended 3-2.", "The game ended three to two."),
    ("sports_score", "They lost 0-4 at home.", "They lost zero to four at home."),
    ("sports_score", "Final score was 11-9.", "Final score was eleven to nine."),
    ("telephone", "Call 442-789-0123 now.", "Call four four two seven eight nine zero one two three now."),
    ("telephone", "Fax us at 555-867-5309.", "Fax us at five five five eight six seven five three zero nine."),
    ("telephone", "Dial 800-555-0199 toll free.", "Dial eight zero zero five five five zero one nine nine toll free."),
    ("decimal", "Pi is about 3.14.", "Pi is about three point one four."),
    ("decimal", "It weighs 0.5 grams.", "It weighs zero point five grams."),
    ("decimal", "Inflation hit 2.75 percent.", "Inflation hit two point seven five percent."),
    ("legal_reference", "The regulation is 15 CFR Part 12.", "The regulation is fifteen c f r part twelve."),
    ("legal_reference", "See 42 USC Section 1983.", "See forty two u s c section nineteen eighty three."),
    ("legal_reference", "Cited under 18 USC 241.", "Cited under eighteen u s c two forty one."),
    ("electronic", "Visit https://www.mediacityuk.co.uk today.", "Visit h t t p s colon slash slash media city u k dot co dot u k today."),
    ("electronic", "Email me at bob@example.com.", "Email me at bob at example dot com."),
    ("electronic", "Open the file notes.txt first.", "Open the file notes dot t x t first."),
]

# hypotheses for the cassette; three deliberate errors for diff/review testing
HYPOTHESIS_ERRORS = {
    "fx0024": "The regulation is fifteen cfr part twelve.",  # cfr not spelled out
    "fx0015": "The game ended three two.",  # missing "to"
    "fx0005": "Signed on the twentieth of may two thousand and twenty three.",  # rejected date form
}

ICL_ROWS = [
    ("cardinal", "I own 7 cats.", "I own seven cats.", "kestrel_translated"),
    ("cardinal", "We need 2019 votes.", "We need two thousand nineteen votes.", "synthetic"),
    ("date", "Born on 7/4.", "Born on july fourth.", "kestrel_translated"),
    ("date", "Back in 2019.", "Back in twenty nineteen.", "synthetic"),
    ("ordinal", "The 3rd door on the left.", "The third door on the left.", "expert_authored"),
    ("time", "It starts at 6:45.", "It starts at six forty five.", "expert_authored"),
    ("currency", "That costs $5.", "That costs five dollars.", "expert_authored"),
    ("sports_score", "We won 2-1.", "We won two to one.", "expert_authored"),
    ("telephone", "Reach me at 415-555-0000.", "Reach me at four one five five five five zero zero zero zero.", "expert_authored"),
    ("decimal", "Add 1.5 cups.", "Add one point five cups.", "expert_authored"),
    ("legal_reference", "Refer to 10 CFR Part 50.", "Refer to ten c f r part fifty.", "expert_authored"),
    ("electronic", "Go to example.org now.", "Go to example dot org now.", "expert_authored"),
]

CURATE_REPLY = "\n".join(
    [
        "The recipe needs 8 eggs. ||| The recipe needs eight eggs.",
        "He ran 26 miles. ||| He ran twenty six miles.",
        "She read 14 books. ||| She read fourteen books.",
    ]
)


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)

    dataset_path = FIXTURES / "dataset_en_us_30.tsv"
    lines = [
        "\t".join([f"fx{i:04d}", "en-US", cat, orig, ref])
        for i, (cat, orig, ref) in enumerate(DATASET_ROWS)
    ]
    dataset_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    icl_path = FIXTURES / "icl_en_us.tsv"
    icl_lines = [
        "\t".join([f"icl{i:03d}", "en-US", cat, orig, norm, prov])
        for i, (cat, orig, norm, prov) in enumerate(ICL_ROWS)
    ]
    icl_path.write_text("\n".join(icl_lines) + "\n", encoding="utf-8")

    store = load_icl_store(icl_path)
    dataset = load_dataset(dataset_path, EN)

    cassette_path = FIXTURES / "cassette_en_us.jsonl"
    cassette_path.unlink(missing_ok=True)
    cassette = Cassette(cassette_path)
    for sample in dataset.samples:
        bundle = build_prompt(EN, store, sample.original)
        digest = request_digest(
            CFG.model_id, bundle.rendered_bytes(), CFG.temperature, CFG.max_tokens
        )
        hypothesis = HYPOTHESIS_ERRORS.get(sample.id, sample.reference)
        cassette.put(digest, make_payload(hypothesis, CFG.model_id))

    curate_path = FIXTURES / "cassette_curate.jsonl"
    curate_path.unlink(missing_ok=True)
    curate_cassette = Cassette(curate_path)
    prompt = CURATION_PROMPT.format(n=3, category="Cardinal", locale_name="American English")
    messages = [{"role": "user", "content": prompt}]
    digest = request_digest(
        CFG.model_id,
        json.dumps(messages, ensure_ascii=False, sort_keys=True).encode("utf-8"),
        CFG.temperature,
        CFG.max_tokens,
    )
    curate_cassette.put(digest, make_payload(CURATE_REPLY, CFG.model_id))

    print(f"wrote {dataset_path.name}, {icl_path.name}, "
          f"{cassette_path.name} ({len(cassette)} entries), {curate_path.name}")


if __name__ == "__main__":
    main()
