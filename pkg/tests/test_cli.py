import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from polynorm.cli import main
from tests.conftest import FIXTURES

DATASET = FIXTURES / "dataset_en_us_30.tsv"
ICL = FIXTURES / "icl_en_us.tsv"
CASSETTE = FIXTURES / "cassette_en_us.jsonl"
CURATE_CASSETTE = FIXTURES / "cassette_curate.jsonl"


@pytest.fixture
def runner():
    return CliRunner()


def run_eval(runner, out_dir, **extra):
    args = [
        "eval",
        "--dataset", str(DATASET),
        "--icl", str(ICL),
        "--provider", "openai",
        "--replay", str(extra.pop("cassette", CASSETTE)),
        "--out", str(out_dir),
        "--locale", "en-US",
        "--deterministic",
    ]
    return runner.invoke(main, args)


class TestEval:
    def test_replay_eval_writes_run_dir(self, runner, tmp_path):
        res = run_eval(runner, tmp_path / "runs")
        assert res.exit_code == 0, res.output
        run_dirs = [p for p in (tmp_path / "runs").iterdir() if p.is_dir()]
        assert len(run_dirs) == 1
        assert (run_dirs[0] / "report.md").exists()
        assert (run_dirs[0] / "samples.jsonl").exists()
        assert (tmp_path / "runs" / "index.jsonl").exists()

    def test_deterministic_byte_identical(self, runner, tmp_path):
        res1 = run_eval(runner, tmp_path / "a")
        res2 = run_eval(runner, tmp_path / "b")
        assert res1.exit_code == 0 and res2.exit_code == 0
        [d1] = [p for p in (tmp_path / "a").iterdir() if p.is_dir()]
        [d2] = [p for p in (tmp_path / "b").iterdir() if p.is_dir()]
        assert d1.name == d2.name
        assert (d1 / "report.json").read_bytes() == (d2 / "report.json").read_bytes()

    def test_missing_dataset_exit_1(self, runner, tmp_path):
        res = runner.invoke(
            main,
            ["eval", "--dataset", str(tmp_path / "nope.tsv"), "--icl", str(ICL),
             "--replay", str(CASSETTE), "--out", str(tmp_path / "runs"),
             "--locale", "en-US"],
        )
        assert res.exit_code == 1

    def test_cassette_miss_exit_2(self, runner, tmp_path):
        # cassette with one entry removed -> one embedded item error
        partial = tmp_path / "partial.jsonl"
        lines = CASSETTE.read_text(encoding="utf-8").splitlines()
        partial.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
        res = run_eval(runner, tmp_path / "runs", cassette=partial)
        assert res.exit_code == 2
        run_dirs = [p for p in (tmp_path / "runs").iterdir() if p.is_dir()]
        samples = [
            json.loads(l)
            for l in (run_dirs[0] / "samples.jsonl").read_text().splitlines()
        ]
        assert sum(1 for s in samples if s["client_error"]) == 1

    def test_item_error_rates_reflected(self, runner, tmp_path):
        res = run_eval(runner, tmp_path / "runs")
        assert res.exit_code == 0
        run_dirs = [p for p in (tmp_path / "runs").iterdir() if p.is_dir()]
        report = json.loads((run_dirs[0] / "report.json").read_text())
        # three deliberate hypothesis errors in the fixture cassette
        assert report["overall_rate"] > 0.0
        assert report["per_category"]["cardinal"]["rate"] == 0.0
        assert report["per_category"]["legal_reference"]["rate"] > 0.0


class TestBaselineCommand:
    def test_file_normalization(self, runner, tmp_path):
        src = tmp_path / "in.txt"
        src.write_text("The score was 3-2.\nIt's the 17th century.\n", encoding="utf-8")
        out = tmp_path / "out.txt"
        res = runner.invoke(main, ["baseline", "--in", str(src), "--out", str(out)])
        assert res.exit_code == 0, res.output
        assert out.read_text(encoding="utf-8") == (
            "The score was three to two.\nIt's the seventeenth century.\n"
        )


class TestScoreCommand:
    def test_identical_files(self, runner, tmp_path):
        ref = tmp_path / "ref.txt"
        ref.write_text("hello world\nthree to two\n", encoding="utf-8")
        res = runner.invoke(
            main, ["score", "--ref", str(ref), "--hyp", str(ref), "--locale", "en-US"]
        )
        assert res.exit_code == 0
        assert "WER: 0.00%" in res.output
        assert "BLEU: 100.00%" in res.output

    def test_line_count_mismatch_exit_1(self, runner, tmp_path):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("a\nb\n", encoding="utf-8")
        hyp.write_text("a\n", encoding="utf-8")
        res = runner.invoke(
            main, ["score", "--ref", str(ref), "--hyp", str(hyp), "--locale", "en-US"]
        )
        assert res.exit_code == 1

    def test_known_fixture_values(self, runner, tmp_path):
        # 10 identical lines except one substitution in a 5-token line
        refs = ["w a b c d"] * 10
        hyps = list(refs)
        hyps[3] = "w a b c X"
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("\n".join(refs) + "\n", encoding="utf-8")
        hyp.write_text("\n".join(hyps) + "\n", encoding="utf-8")
        res = runner.invoke(
            main, ["score", "--ref", str(ref), "--hyp", str(hyp), "--locale", "en-US"]
        )
        assert res.exit_code == 0
        assert "WER: 2.00%" in res.output  # 1 edit / 50 reference tokens

    def test_cer_label_for_japanese(self, runner, tmp_path):
        ref = tmp_path / "ref.txt"
        ref.write_text("ゴヒャク\n", encoding="utf-8")
        res = runner.invoke(
            main, ["score", "--ref", str(ref), "--hyp", str(ref), "--locale", "ja-JP"]
        )
        assert res.exit_code == 0
        assert "CER: 0.00%" in res.output


class TestCurateCommand:
    def test_replay_curation(self, runner, tmp_path):
        out = tmp_path / "candidates.tsv"
        res = runner.invoke(
            main,
            ["curate", "--locale", "en-US", "--category", "cardinal", "--n", "3",
             "--replay", str(CURATE_CASSETTE), "--out", str(out)],
        )
        assert res.exit_code == 0, res.output
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 3
        assert all(l.startswith("candidate-") for l in lines)

    def test_n_zero_exit_1(self, runner, tmp_path):
        res = runner.invoke(
            main,
            ["curate", "--locale", "en-US", "--category", "cardinal", "--n", "0",
             "--replay", str(CURATE_CASSETTE), "--out", str(tmp_path / "x.tsv")],
        )
        assert res.exit_code == 1


class TestReportAndDiff:
    @pytest.fixture
    def run_dir(self, runner, tmp_path):
        run_eval(runner, tmp_path / "runs")
        [d] = [p for p in (tmp_path / "runs").iterdir() if p.is_dir()]
        return d

    def test_report_formats(self, runner, run_dir):
        for fmt, marker in [("markdown", "WER (%)"), ("json", '"overall_rate"'), ("tsv", "category\t")]:
            res = runner.invoke(main, ["report", "--run", str(run_dir), "--format", fmt])
            assert res.exit_code == 0
            assert marker in res.output

    def test_diff_only_errors(self, runner, run_dir):
        res = runner.invoke(main, ["diff", "--run", str(run_dir), "--only-errors"])
        assert res.exit_code == 0
        assert res.output.count("---") == 3  # the three planted errors

    def test_diff_unknown_sample(self, runner, run_dir):
        res = runner.invoke(main, ["diff", "--run", str(run_dir), "--sample", "nope"])
        assert res.exit_code == 1


class TestValidateCommand:
    def test_fixture_dataset_coverage(self, runner, full_dataset_file):
        res = runner.invoke(
            main, ["validate", "--dataset", str(full_dataset_file),
                   "--locale", "en-US", "--expected", "20"]
        )
        assert res.exit_code == 0
        assert "total: 540" in res.output

    def test_bad_category_line_number(self, runner, tmp_path, full_dataset_file):
        lines = full_dataset_file.read_text(encoding="utf-8").splitlines()
        lines[41] = lines[41].replace("\tdecimal\t", "\temoji\t")
        bad = tmp_path / "bad.tsv"
        bad.write_text("\n".join(lines) + "\n", encoding="utf-8")
        res = runner.invoke(
            main, ["validate", "--dataset", str(bad), "--locale", "en-US"]
        )
        assert res.exit_code == 1
        assert ":42" in res.output
