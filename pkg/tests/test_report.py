"""Report artifacts: JSON/TSV tables plus rendered figures."""

import json

import pytest

from petdetect.corpus import load_annotated
from petdetect.pipeline import evaluate
from petdetect.report import (
    FIG_CANDIDATES,
    FIG_FUNNEL,
    FIG_RANKS,
    PER_SENTENCE_TSV,
    REPORT_JSON,
    STAGE_TSV,
    _clean_field,
    write_report,
)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

ANNOTATED = """\
xq1 xq2 gentle exit xq3\tgentle exit
xq4 gentle exit zz1 blue kettle xq5\tblue kettle
xq1 blue kettle xq2\tblue kettle
xq1 zz9 xq2\tzz9
xq1 xq2 xq3\tghost phrase
xq1 gentle exit xq2\tgentle
"""


@pytest.fixture(scope="module")
def outcome(planted_world, tmp_path_factory):
    path = tmp_path_factory.mktemp("eval") / "annotated.tsv"
    path.write_text(ANNOTATED)
    rows = load_annotated(str(path))
    return evaluate(planted_world["pipeline"], rows)


@pytest.fixture(scope="module")
def fuzzy_outcome(planted_world, tmp_path_factory):
    path = tmp_path_factory.mktemp("eval_fuzzy") / "annotated.tsv"
    path.write_text(ANNOTATED)
    rows = load_annotated(str(path))
    return evaluate(planted_world["pipeline"], rows, fuzzy=True)


class TestWriteReport:
    def test_all_six_artifacts_written(self, outcome, tmp_path):
        written = write_report(outcome, str(tmp_path / "out"))
        assert len(written) == 6
        names = {p.rsplit("/", 1)[-1] for p in written}
        assert names == {
            REPORT_JSON,
            STAGE_TSV,
            PER_SENTENCE_TSV,
            FIG_FUNNEL,
            FIG_CANDIDATES,
            FIG_RANKS,
        }
        for path in written:
            assert (tmp_path / "out").joinpath(path.rsplit("/", 1)[-1]).exists()

    def test_artifacts_non_empty(self, outcome, tmp_path):
        for path in write_report(outcome, str(tmp_path)):
            with open(path, "rb") as fh:
                assert fh.read(1), path

    def test_figures_are_png(self, outcome, tmp_path):
        write_report(outcome, str(tmp_path))
        for name in (FIG_FUNNEL, FIG_CANDIDATES, FIG_RANKS):
            assert (tmp_path / name).read_bytes()[:8] == PNG_MAGIC

    def test_creates_missing_directory(self, outcome, tmp_path):
        nested = tmp_path / "a" / "b"
        write_report(outcome, str(nested))
        assert (nested / REPORT_JSON).exists()

    def test_rerun_overwrites_cleanly(self, outcome, tmp_path):
        first = write_report(outcome, str(tmp_path))
        second = write_report(outcome, str(tmp_path))
        assert first == second
        data = json.loads((tmp_path / REPORT_JSON).read_text())
        assert data["evaluation"]["n_sentences"] == 6


class TestReportJson:
    def test_keys_without_fuzzy(self, outcome, tmp_path):
        write_report(outcome, str(tmp_path))
        data = json.loads((tmp_path / REPORT_JSON).read_text())
        assert set(data) == {"stages", "evaluation"}
        assert data["stages"]["extraction"]["candidates"] == 21
        assert data["evaluation"]["hits_rank1"] == 2

    def test_fuzzy_blocks_present(self, fuzzy_outcome, tmp_path):
        write_report(fuzzy_outcome, str(tmp_path))
        data = json.loads((tmp_path / REPORT_JSON).read_text())
        assert set(data) == {
            "stages",
            "evaluation",
            "fuzzy_stages",
            "fuzzy_evaluation",
        }
        assert data["fuzzy_evaluation"]["hits_rank1"] == 3

    def test_trailing_newline(self, outcome, tmp_path):
        write_report(outcome, str(tmp_path))
        assert (tmp_path / REPORT_JSON).read_bytes().endswith(b"\n")


class TestStageTsv:
    def test_rows_match_stage_report(self, outcome, tmp_path):
        write_report(outcome, str(tmp_path))
        lines = (tmp_path / STAGE_TSV).read_text().splitlines()
        assert lines[0] == "stage\tcandidates\ttargets_retained"
        body = [line.split("\t") for line in lines[1:]]
        assert [row[0] for row in body] == [
            "extraction",
            "filtering",
            "paraphrasing",
            "ranking",
        ]
        expected = outcome.stage.rows()
        for row, (name, candidates, targets) in zip(body, expected):
            assert row == [name, str(candidates), str(targets)]


class TestPerSentenceTsv:
    def test_one_row_per_sentence(self, outcome, tmp_path):
        write_report(outcome, str(tmp_path))
        lines = (tmp_path / PER_SENTENCE_TSV).read_text().splitlines()
        assert len(lines) == 1 + 6
        assert lines[0].split("\t") == [
            "sentence",
            "target",
            "target_rank",
            "n_candidates",
            "predicted",
            "retained_extraction",
            "retained_filtering",
            "retained_ranking",
        ]
        for line in lines[1:]:
            assert line.count("\t") == 7

    def test_missed_target_has_blank_rank(self, outcome, tmp_path):
        write_report(outcome, str(tmp_path))
        lines = (tmp_path / PER_SENTENCE_TSV).read_text().splitlines()
        by_target = {line.split("\t")[1]: line.split("\t") for line in lines[1:]}
        assert by_target["ghost phrase"][2] == ""
        assert by_target["gentle exit"][2] == "1"

    def test_predicted_column_lists_pets(self, outcome, tmp_path):
        write_report(outcome, str(tmp_path))
        lines = (tmp_path / PER_SENTENCE_TSV).read_text().splitlines()
        first = lines[1].split("\t")
        assert first[4] == "gentle exit"

    def test_clean_field_strips_delimiters(self):
        assert _clean_field("a\tb\nc") == "a b c"


class TestEmptyCorpus:
    def test_report_over_zero_sentences(self, planted_world, tmp_path):
        outcome = evaluate(planted_world["pipeline"], [])
        written = write_report(outcome, str(tmp_path))
        assert len(written) == 6
        data = json.loads((tmp_path / REPORT_JSON).read_text())
        assert data["evaluation"]["n_sentences"] == 0
        assert data["evaluation"]["random_baseline"] == 0.0
