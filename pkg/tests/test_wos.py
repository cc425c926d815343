from __future__ import annotations

import pytest

from coword_atlas.wos import (
    Corpus,
    EncodingError,
    FilterCriteria,
    MalformedRecord,
    WosRecord,
    filter_corpus,
    load_corpus,
    parse_wos_export,
    parse_wos_tab_delimited,
    read_wos_file,
    save_corpus,
)

SAMPLE = """\
FN Clarivate Analytics Web of Science
VR 1.0
PT J
AU Doe, J
TI A paper about electrochemical
   biosensors for breast cancer
SO SOME JOURNAL
DT Article
DE Biosensor; Breast Cancer;  Detection
LA English
PY 2015
WE SCI-EXPANDED
UT WOS:000111222333
ER

PT J
DT Review
TI Another paper
DE Gas Sensor
LA English
PY 2020
ER
EF
"""


def test_parse_basic_fields():
    corpus, diagnostics = parse_wos_export(SAMPLE, label="demo")
    assert diagnostics == []
    assert corpus.label == "demo"
    assert len(corpus) == 2

    first = corpus.records[0]
    assert first.record_id == "WOS:000111222333"
    assert first.title == "A paper about electrochemical biosensors for breast cancer"
    assert first.doc_type == "Article"
    assert first.language == "English"
    assert first.pub_year == 2015
    assert first.source_index == "SCI-EXPANDED"
    assert first.author_keywords == ["Biosensor", "Breast Cancer", "Detection"]
    # unknown tags survive verbatim
    assert first.extras == {"AU": ["Doe, J"], "SO": ["SOME JOURNAL"]}

    second = corpus.records[1]
    assert second.record_id == "REC-2"  # no UT tag
    assert second.doc_type == "Review"
    assert second.author_keywords == ["Gas Sensor"]


def test_doc_type_falls_back_to_pt():
    corpus, _ = parse_wos_export("PT J\nTI x\nER\nEF\n")
    assert corpus.records[0].doc_type == "J"


@pytest.mark.parametrize("raw", ["199", "20x5", "1850", "2150"])
def test_unusable_year_dropped_with_diagnostic(raw):
    corpus, diagnostics = parse_wos_export(f"PT J\nTI x\nPY {raw}\nER\nEF\n")
    assert corpus.records[0].pub_year is None
    assert len(diagnostics) == 1
    assert "unusable PY" in diagnostics[0]


def test_duplicate_ut_keeps_first():
    text = (
        "PT J\nTI first\nPY 2001\nUT WOS:1\nER\n"
        "PT J\nTI second\nPY 2002\nUT WOS:1\nER\nEF\n"
    )
    corpus, diagnostics = parse_wos_export(text)
    assert [r.title for r in corpus.records] == ["first"]
    assert any("duplicate record" in d for d in diagnostics)


def test_dedup_without_ut_uses_title_and_year():
    text = (
        "PT J\nTI Same Title\nPY 2001\nER\n"
        "PT J\nTI same title\nPY 2001\nER\n"
        "PT J\nTI Same Title\nPY 2002\nER\nEF\n"
    )
    corpus, diagnostics = parse_wos_export(text)
    assert len(corpus) == 2  # year 2002 is a different record
    assert any("duplicate record" in d for d in diagnostics)


def test_stray_line_is_diagnostic_or_error():
    text = "PT J\nTI x\n!!! not a tag\nER\nEF\n"
    corpus, diagnostics = parse_wos_export(text)
    assert len(corpus) == 1
    assert any("unrecognized line" in d for d in diagnostics)
    with pytest.raises(MalformedRecord) as excinfo:
        parse_wos_export(text, strict=True)
    assert excinfo.value.line_number == 3


def test_truncated_record_is_skipped():
    text = "PT J\nTI done\nER\nPT J\nTI half finished\nDE Sensor\n"
    corpus, diagnostics = parse_wos_export(text)
    assert [r.title for r in corpus.records] == ["done"]
    assert any("end of input inside a record" in d for d in diagnostics)
    with pytest.raises(MalformedRecord):
        parse_wos_export(text, strict=True)


def test_ef_inside_record_skips_it():
    text = "PT J\nTI a\nER\nPT J\nTI b\nEF\n"
    corpus, diagnostics = parse_wos_export(text)
    assert [r.title for r in corpus.records] == ["a"]
    assert any("EF inside a record" in d for d in diagnostics)


def test_content_after_ef_is_flagged():
    corpus, diagnostics = parse_wos_export("PT J\nTI a\nER\nEF\nPT J\nTI b\nER\n")
    assert len(corpus) == 1
    assert any("after EF" in d for d in diagnostics)


def test_continuation_after_blank_line_is_orphaned():
    text = "PT J\nTI a\n\n   dangling continuation\nER\nEF\n"
    corpus, diagnostics = parse_wos_export(text)
    assert corpus.records[0].title == "a"
    assert any("continuation line without a preceding tag" in d for d in diagnostics)


def test_tag_before_record_start():
    corpus, diagnostics = parse_wos_export("DE orphan\nPT J\nTI a\nER\nEF\n")
    assert len(corpus) == 1
    assert any("before any record start" in d for d in diagnostics)


TAB_SAMPLE = (
    "PT\tDT\tTI\tDE\tLA\tPY\tUT\tWE\n"
    "J\tArticle\tTab one\tBiosensor; Detection\tEnglish\t2012\tWOS:9\tSCI-EXPANDED\n"
    "J\tArticle\tTab two\tGas Sensor\tEnglish\t2013\t\tSCI-EXPANDED\n"
)


def test_parse_tab_delimited():
    corpus, diagnostics = parse_wos_tab_delimited(TAB_SAMPLE, label="tabs")
    assert diagnostics == []
    assert len(corpus) == 2
    assert corpus.records[0].record_id == "WOS:9"
    assert corpus.records[0].author_keywords == ["Biosensor", "Detection"]
    assert corpus.records[1].record_id == "REC-2"
    assert corpus.records[1].pub_year == 2013


def test_tab_delimited_rejects_overlong_rows():
    text = "PT\tTI\nJ\ta\textra cell\n"
    corpus, diagnostics = parse_wos_tab_delimited(text)
    assert len(corpus) == 0
    assert any("more cells than header" in d for d in diagnostics)
    with pytest.raises(MalformedRecord):
        parse_wos_tab_delimited(text, strict=True)


def test_read_wos_file_sniffs_layout(tmp_path):
    tagged = tmp_path / "tagged.txt"
    tagged.write_text(SAMPLE, encoding="utf-8")
    tabbed = tmp_path / "tabbed.txt"
    tabbed.write_text("﻿" + TAB_SAMPLE, encoding="utf-8")  # BOM tolerated

    corpus, _ = read_wos_file(tagged, label="a")
    assert len(corpus) == 2
    corpus, _ = read_wos_file(tabbed, label="b")
    assert len(corpus) == 2
    assert corpus.records[0].record_id == "WOS:9"


def test_read_wos_file_rejects_non_utf8(tmp_path):
    bad = tmp_path / "latin1.txt"
    bad.write_bytes(b"PT J\nTI caf\xe9\nER\nEF\n")
    with pytest.raises(EncodingError):
        read_wos_file(bad)


def _record(**kwargs) -> WosRecord:
    defaults = dict(record_id="r", doc_type="Article", language="English", pub_year=2000)
    defaults.update(kwargs)
    return WosRecord(**defaults)


def test_filter_criteria_fields():
    criteria = FilterCriteria(
        doc_types=frozenset({"Article"}),
        languages=frozenset({"English"}),
        year_min=1991,
        year_max=2021,
        indices=frozenset({"SCI-EXPANDED"}),
        require_keywords=True,
    )
    ok = _record(
        source_index="SCI-EXPANDED; SSCI",
        author_keywords=["x"],
        doc_type="Article; Proceedings Paper",
    )
    assert criteria.matches(ok)
    assert not criteria.matches(_record(doc_type="Review", source_index="SCI-EXPANDED", author_keywords=["x"]))
    assert not criteria.matches(_record(language="German", source_index="SCI-EXPANDED", author_keywords=["x"]))
    assert not criteria.matches(_record(pub_year=1990, source_index="SCI-EXPANDED", author_keywords=["x"]))
    assert not criteria.matches(_record(pub_year=None, source_index="SCI-EXPANDED", author_keywords=["x"]))
    assert not criteria.matches(_record(source_index="ESCI", author_keywords=["x"]))
    assert not criteria.matches(_record(source_index="SCI-EXPANDED", author_keywords=[]))


def test_filter_matching_is_case_insensitive():
    criteria = FilterCriteria(doc_types=frozenset({"ARTICLE"}))
    assert criteria.matches(_record(doc_type="article"))


def test_unset_criteria_match_everything():
    assert FilterCriteria().matches(WosRecord(record_id="r"))


def test_year_bounds_must_be_ordered():
    with pytest.raises(ValueError):
        FilterCriteria(year_min=2020, year_max=2010)


def test_filter_corpus_preserves_order():
    corpus = Corpus(
        label="c",
        records=[_record(record_id="a"), _record(record_id="b", doc_type="Review")],
    )
    kept = filter_corpus(corpus, FilterCriteria(doc_types=frozenset({"Article"})))
    assert [r.record_id for r in kept.records] == ["a"]


def test_corpus_rejects_duplicate_ids():
    with pytest.raises(ValueError):
        Corpus(label="c", records=[_record(record_id="a"), _record(record_id="a")])
    with pytest.raises(ValueError):
        Corpus(label="")


def test_corpus_json_roundtrip(tmp_path):
    corpus, _ = parse_wos_export(SAMPLE, label="demo")
    path = tmp_path / "corpus.json"
    save_corpus(corpus, path)
    again = load_corpus(path)
    assert again.label == corpus.label
    assert [r.to_dict() for r in again.records] == [r.to_dict() for r in corpus.records]
