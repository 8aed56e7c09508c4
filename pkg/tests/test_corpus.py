from __future__ import annotations

import json

import pytest

from peyvand.corpus import (
    Document,
    MalformedDocument,
    Mention,
    NIL,
    OverlappingMentions,
    SpanMismatch,
    corpus_stats,
    count_sentences,
    load_corpus,
    save_corpus,
    stats_by_category,
)
from peyvand.kb import NerType, PosCategory


def _doc_line(doc_id="d1", category="sport", text="الف ب ج", mentions=None):
    return json.dumps(
        {"id": doc_id, "category": category, "text": text, "mentions": mentions or []},
        ensure_ascii=False,
    )


class TestLoadCorpus:
    def test_valid_three_document_file(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            "\n".join(_doc_line(doc_id=f"d{i}") for i in range(3)) + "\n", encoding="utf-8"
        )
        docs = load_corpus(path)
        assert [d.id for d in docs] == ["d0", "d1", "d2"]

    def test_mention_end_past_text_is_span_mismatch(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            _doc_line(mentions=[{"start": 0, "end": 99, "surface": "الف"}]), encoding="utf-8"
        )
        with pytest.raises(SpanMismatch):
            load_corpus(path)

    def test_surface_disagreeing_with_slice_is_span_mismatch(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            _doc_line(mentions=[{"start": 0, "end": 3, "surface": "چیز دیگر"}]), encoding="utf-8"
        )
        with pytest.raises(SpanMismatch):
            load_corpus(path)

    def test_inverted_span_is_span_mismatch(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            _doc_line(mentions=[{"start": 3, "end": 3, "surface": ""}]), encoding="utf-8"
        )
        with pytest.raises(SpanMismatch):
            load_corpus(path)

    def test_overlapping_mentions_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            _doc_line(
                text="الف ب ج",
                mentions=[
                    {"start": 0, "end": 5, "surface": "الف ب"},
                    {"start": 4, "end": 7, "surface": "ب ج"},
                ],
            ),
            encoding="utf-8",
        )
        with pytest.raises(OverlappingMentions):
            load_corpus(path)

    def test_duplicate_document_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(_doc_line() + "\n" + _doc_line() + "\n", encoding="utf-8")
        with pytest.raises(MalformedDocument):
            load_corpus(path)

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(_doc_line() + "\n{oops\n", encoding="utf-8")
        with pytest.raises(MalformedDocument) as err:
            load_corpus(path)
        assert err.value.line == 2

    def test_gold_states(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            _doc_line(
                text="الف ب ج",
                mentions=[
                    {"start": 0, "end": 3, "surface": "الف", "gold": "E1"},
                    {"start": 4, "end": 5, "surface": "ب", "gold": None},
                    {"start": 6, "end": 7, "surface": "ج"},
                ],
            ),
            encoding="utf-8",
        )
        (doc,) = load_corpus(path)
        assert doc.mentions[0].gold == "E1"
        assert doc.mentions[1].gold is NIL
        assert doc.mentions[2].gold is None


class TestRoundTrip:
    def test_save_then_load_is_identity(self, tmp_path, mini_corpus):
        path = tmp_path / "copy.jsonl"
        save_corpus(mini_corpus, path)
        assert load_corpus(path) == mini_corpus

    def test_round_trip_preserves_annotations(self, tmp_path):
        doc = Document(
            id="d1",
            category="health",
            text="الف ب",
            mentions=[
                Mention(0, 3, "الف", NerType.LOC, PosCategory.PROPER_NOUN, "E1"),
                Mention(4, 5, "ب", None, None, NIL),
            ],
        )
        path = tmp_path / "copy.jsonl"
        save_corpus([doc], path)
        assert load_corpus(path) == [doc]


class TestSentences:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("", 0),
            ("یک جمله", 1),
            ("اول. دوم!", 2),
            ("پرسش؟ پاسخ.", 2),
            ("خط اول\nخط دوم", 2),
            ("...", 0),
            ("پایان.", 1),
        ],
    )
    def test_counting(self, text, expected):
        assert count_sentences(text) == expected


class TestStats:
    def test_empty_corpus_all_zero(self, kb):
        stats = corpus_stats([], kb)
        assert stats.documents == stats.sentences == stats.words == 0
        assert stats.entities == stats.candidates == 0
        assert stats.words_per_article == 0.0
        assert stats.entities_per_article == 0.0
        assert stats.candidates_per_mention == 0.0

    def test_mini_corpus_matches_hand_tabulated_reference(self, kb, mini_corpus):
        stats = corpus_stats(mini_corpus, kb)
        assert stats.documents == 12
        assert stats.sentences == 14
        assert stats.words == 173
        assert stats.entities == 24
        assert stats.candidates == 33
        assert stats.words_per_article == pytest.approx(173 / 12)
        assert stats.entities_per_article == pytest.approx(2.0)
        assert stats.candidates_per_mention == pytest.approx(1.375)

    def test_totals_equal_sum_of_per_category_counts(self, kb, mini_corpus):
        total = corpus_stats(mini_corpus, kb)
        per_category = stats_by_category(mini_corpus, kb)
        assert total.documents == sum(s.documents for s in per_category.values())
        assert total.sentences == sum(s.sentences for s in per_category.values())
        assert total.words == sum(s.words for s in per_category.values())
        assert total.entities == sum(s.entities for s in per_category.values())
        assert total.candidates == sum(s.candidates for s in per_category.values())

    def test_candidates_counted_before_filters(self, kb, mini_corpus):
        # d02 surface "شهریار" has three alias matches even though the
        # pipeline later drops the rare city.
        d02 = next(d for d in mini_corpus if d.id == "d02")
        stats = corpus_stats([d02], kb)
        assert stats.candidates == 6
