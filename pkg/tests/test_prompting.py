import pytest

from polynorm.core import Category, IclExample, Provenance, Sample, ValidationError, parse_locale
from polynorm.dataset import Dataset
from polynorm.prompting import (
    ALL,
    ConfigurationError,
    EmptyStoreError,
    IclStore,
    build_prompt,
    check_no_leakage,
    load_icl_store,
    load_instruction,
    save_icl_store,
    select_icl,
)
from tests.conftest import make_icl_store

EN = parse_locale("en-US")
JA = parse_locale("ja-JP")
DE = parse_locale("de-DE")


class TestLoadInstruction:
    def test_english(self):
        text = load_instruction(EN)
        assert text.startswith("You are an accurate text normalizer for American English")

    def test_japanese_supplement(self):
        en = load_instruction(EN)
        ja = load_instruction(JA)
        assert "katakana" in ja
        assert "katakana" not in en
        # supplement is the only delta besides the locale name
        assert ja.replace("Japanese", "American English").startswith(en.rstrip("\n"))

    def test_missing_placeholder(self):
        with pytest.raises(ConfigurationError):
            load_instruction(EN, template="no placeholder here")

    def test_lists_category_names(self):
        text = load_instruction(EN)
        for name in ["Sports Score", "Cardinal", "Stock Ticker", "Musical Notation"]:
            assert text.count(f"- {name}\n") == 1

    def test_all_27_category_lines_once(self):
        text = load_instruction(EN)
        category_block = text.split("Some important rules:")[0]
        lines = [l for l in category_block.splitlines() if l.startswith("- ")]
        # 27 categories plus the catch-all "Other unnormalized text" line
        assert len(lines) == 28
        assert len(set(lines)) == 28


class TestIclStore:
    def test_dedup(self):
        e = IclExample(EN, Category.CARDINAL, "3", "three")
        store = IclStore.from_examples([e, e])
        assert len(store.for_locale(EN)) == 1

    def test_version_is_content_digest(self):
        a = make_icl_store()
        b = make_icl_store()
        assert a.version == b.version

    def test_add_remove_restores_content_digest(self):
        store = make_icl_store()
        extra = IclExample(EN, Category.ISBN, "ISBN 0-306-40615-2", "i s b n zero three zero six four zero six one five two")
        edited = store.with_added(extra)
        assert edited.version != store.version
        restored = edited.with_removed(extra)
        assert restored.version == store.version

    def test_round_trip_files(self, tmp_path):
        store = make_icl_store()
        for ext in (".tsv", ".jsonl"):
            p = tmp_path / f"icl{ext}"
            save_icl_store(store, p)
            again = load_icl_store(p)
            assert again.version == store.version


class TestSelectIcl:
    def test_all_in_category_order(self, icl_store):
        selected = select_icl(icl_store, EN, ALL)
        assert len(selected) == 6
        # first round walks categories in table order
        first_round = [e.category for e in selected[:5]]
        assert first_round == [
            Category.CARDINAL,
            Category.DATE,
            Category.ORDINAL,
            Category.TIME,
            Category.CURRENCY,
        ]
        # second round picks the second cardinal example
        assert selected[5].category is Category.CARDINAL

    def test_k_one_is_first_cardinal(self, icl_store):
        [only] = select_icl(icl_store, EN, 1)
        assert only.category is Category.CARDINAL
        assert only.original == "I own 3 cats."

    def test_round_robin_oracle(self):
        # 27 populated categories, k=30 -> one per category plus 3 second-round picks
        examples = []
        for cat in Category:
            for j in range(2):
                examples.append(
                    IclExample(EN, cat, f"orig {cat.value} {j}", f"norm {cat.value} {j}")
                )
        store = IclStore.from_examples(examples)
        selected = select_icl(store, EN, 30)
        assert len(selected) == 30
        assert [e.category for e in selected[:27]] == list(Category)
        assert [e.category for e in selected[27:]] == [
            Category.CARDINAL, Category.DATE, Category.DECIMAL,
        ]

    def test_empty_store_error(self, icl_store):
        with pytest.raises(EmptyStoreError):
            select_icl(icl_store, DE, ALL)

    def test_bad_k(self, icl_store):
        with pytest.raises(ValidationError):
            select_icl(icl_store, EN, 0)


class TestBuildPrompt:
    def test_bundle_shape(self, icl_store):
        bundle = build_prompt(EN, icl_store, "It's the 17th century.")
        assert bundle.target == "It's the 17th century."
        assert "Sports Score" in bundle.instruction
        msgs = bundle.messages()
        assert msgs[0]["role"] == "system"
        assert msgs[-1] == {"role": "user", "content": "It's the 17th century."}
        # ICL pairs render as alternating user/assistant turns
        roles = [m["role"] for m in msgs[1:-1]]
        assert roles == ["user", "assistant"] * len(bundle.icl)

    def test_empty_target_rejected(self, icl_store):
        with pytest.raises(ValidationError):
            build_prompt(EN, icl_store, "   ")

    def test_deterministic_rendering(self, icl_store):
        a = build_prompt(EN, icl_store, "pay $5").rendered_bytes()
        b = build_prompt(EN, icl_store, "pay $5").rendered_bytes()
        assert a == b

    def test_target_appears_once_after_icl(self, icl_store):
        bundle = build_prompt(EN, icl_store, "unique-target-text")
        msgs = bundle.messages()
        hits = [i for i, m in enumerate(msgs) if "unique-target-text" in m["content"]]
        assert hits == [len(msgs) - 1]


class TestLeakageCheck:
    def test_disjoint_ok(self, icl_store, small_dataset):
        check_no_leakage(icl_store, small_dataset)

    def test_leak_detected(self, icl_store):
        leaked = Sample(
            "d9", EN, Category.CARDINAL, "I own 3 cats.", "I own three cats."
        )
        ds = Dataset(locale=EN, samples=(leaked,))
        with pytest.raises(ValidationError, match="leak"):
            check_no_leakage(icl_store, ds)
