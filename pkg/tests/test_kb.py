from __future__ import annotations

import json
import random

import pytest

from peyvand.kb import (
    DuplicateEntityId,
    MalformedRecord,
    NerType,
    PosCategory,
    UnknownEntity,
    link_exists,
    load_kb,
    load_reference_lists,
    lookup_alias,
)
from peyvand.textnorm import content_terms, normalize, tokenize

from oracles import brute_force_adjacency, brute_force_candidates


def _record(entity_id, label, variants=(), links=(), article="", **extra):
    rec = {
        "id": entity_id,
        "label": label,
        "variants": list(variants),
        "class": extra.pop("cls", "city"),
        "ner_type": extra.pop("ner_type", "LOC"),
        "pos": extra.pop("pos", "PROPER_NOUN"),
        "article": article,
        "links": list(links),
    }
    rec.update(extra)
    return json.dumps(rec, ensure_ascii=False)


@pytest.fixture
def lists_file(tmp_path):
    path = tmp_path / "lists.json"
    path.write_text(
        json.dumps({"rare_blocklist": [], "class_filters": {}, "type_mapping": {}, "stopwords": ["و"]}),
        encoding="utf-8",
    )
    return path


class TestLoadKb:
    def test_two_entities_one_variant_each_gives_four_alias_keys(self, tmp_path, lists_file):
        dump = tmp_path / "kb.jsonl"
        dump.write_text(
            _record("A", "آلفا", ["الف"]) + "\n" + _record("B", "بتا", ["ب"]) + "\n",
            encoding="utf-8",
        )
        kb, _ = load_kb(dump, lists_file)
        assert len(kb.alias_index) == 4

    def test_empty_dump(self, tmp_path, lists_file):
        dump = tmp_path / "kb.jsonl"
        dump.write_text("", encoding="utf-8")
        kb, _ = load_kb(dump, lists_file)
        assert kb.entities == {}
        assert lookup_alias(kb, "هرچیزی") == frozenset()
        assert kb.doc_count == 0

    def test_dangling_link_dropped_with_warning_count(self, tmp_path, lists_file):
        dump = tmp_path / "kb.jsonl"
        dump.write_text(
            _record("E1", "یک", links=["E_missing", "E2"]) + "\n" + _record("E2", "دو") + "\n",
            encoding="utf-8",
        )
        kb, _ = load_kb(dump, lists_file)
        assert kb.entities["E1"].out_links == frozenset({"E2"})
        assert kb.dropped_links == 1

    def test_self_link_dropped_and_counted(self, tmp_path, lists_file):
        dump = tmp_path / "kb.jsonl"
        dump.write_text(_record("E1", "یک", links=["E1"]) + "\n", encoding="utf-8")
        kb, _ = load_kb(dump, lists_file)
        assert kb.entities["E1"].out_links == frozenset()
        assert kb.dropped_links == 1

    def test_duplicate_id_rejected(self, tmp_path, lists_file):
        dump = tmp_path / "kb.jsonl"
        dump.write_text(_record("E1", "یک") + "\n" + _record("E1", "باز یک") + "\n", encoding="utf-8")
        with pytest.raises(DuplicateEntityId):
            load_kb(dump, lists_file)

    @pytest.mark.parametrize(
        "line",
        [
            "not json",
            json.dumps({"id": "E1"}),
            _record("", "خالی"),
            _record("E1", ""),
            _record("E1", "یک", ner_type="NOPE"),
            _record("E1", "یک", pos="NOPE"),
            json.dumps({"id": "E1", "label": "x", "variants": "nope", "class": "c",
                        "ner_type": "LOC", "pos": "OTHER", "article": "", "links": []}),
        ],
    )
    def test_malformed_record_reports_line(self, tmp_path, lists_file, line):
        dump = tmp_path / "kb.jsonl"
        dump.write_text(_record("E0", "صفر") + "\n" + line + "\n", encoding="utf-8")
        with pytest.raises(MalformedRecord) as err:
            load_kb(dump, lists_file)
        assert err.value.line == 2

    def test_rare_flag_defaults_false(self, tmp_path, lists_file):
        dump = tmp_path / "kb.jsonl"
        dump.write_text(_record("E1", "یک") + "\n" + _record("E2", "دو", rare=True) + "\n", encoding="utf-8")
        kb, _ = load_kb(dump, lists_file)
        assert not kb.entities["E1"].rare
        assert kb.entities["E2"].rare

    def test_doc_count_counts_nonempty_articles(self, tmp_path, lists_file):
        dump = tmp_path / "kb.jsonl"
        dump.write_text(
            _record("E1", "یک", article="متن کوتاه") + "\n" + _record("E2", "دو") + "\n",
            encoding="utf-8",
        )
        kb, _ = load_kb(dump, lists_file)
        assert kb.doc_count == 1


class TestReferenceLists:
    def test_penalty_must_be_strictly_between_zero_and_one(self, tmp_path):
        for bad in (0.0, 1.0, -0.3, 2):
            path = tmp_path / "lists.json"
            path.write_text(
                json.dumps({"class_filters": {"film": {"triggers": ["x"], "penalty": bad}}}),
                encoding="utf-8",
            )
            with pytest.raises(MalformedRecord):
                load_reference_lists(path)

    def test_triggers_and_stopwords_stored_normalized(self, tmp_path):
        path = tmp_path / "lists.json"
        path.write_text(
            json.dumps(
                {
                    "class_filters": {"film": {"triggers": ["سينما"], "penalty": 0.5}},
                    "stopwords": ["  VE  "],
                },
                ensure_ascii=False,
            ),
            encoding="utf-8",
        )
        lists = load_reference_lists(path)
        assert "سینما" in lists.class_filters["film"].triggers  # Arabic yeh folded
        assert "ve" in lists.stopwords

    def test_unknown_ner_type_key_rejected(self, tmp_path):
        path = tmp_path / "lists.json"
        path.write_text(json.dumps({"type_mapping": {"PLACE": ["city"]}}), encoding="utf-8")
        with pytest.raises(MalformedRecord):
            load_reference_lists(path)


class TestLookupAlias:
    def test_canonical_label_lookup(self, kb):
        assert "E01" in lookup_alias(kb, "تهران")

    def test_ambiguous_surface_matches_brute_force_scan(self, kb):
        assert lookup_alias(kb, "تهران") == {"E01", "E08"}
        for surface in ["تهران", "پرسپولیس", "شهریار", "مس", "پاریس", "ناشناخته"]:
            assert set(lookup_alias(kb, surface)) == brute_force_candidates(kb, surface)

    def test_arabic_yeh_query_equals_persian_yeh_query(self, kb):
        # "دایی" spelled with Arabic yeh codepoints
        arabic = "دايي"
        assert lookup_alias(kb, arabic) == lookup_alias(kb, "دایی")
        assert "E10" in lookup_alias(kb, arabic)

    def test_lookup_is_normalization_invariant(self, kb):
        for surface in ["  تهران ", "پرسپوليس", "دیجی‌کالا", "ورزشگاه   آزادی"]:
            assert lookup_alias(kb, surface) == lookup_alias(kb, normalize(surface))

    def test_unknown_surface_is_empty_not_error(self, kb):
        assert lookup_alias(kb, "زرافه بنفش") == frozenset()

    def test_alias_round_trip_over_full_kb(self, kb):
        for entity in kb.entities.values():
            for label in {entity.canonical_label, *entity.variant_labels}:
                assert entity.id in lookup_alias(kb, label)

    def test_every_indexed_id_exists(self, kb):
        for ids in kb.alias_index.values():
            assert ids <= set(kb.entities)

    def test_identity_profile_keeps_exact_keys(self, tmp_path, lists_file):
        dump = tmp_path / "kb.jsonl"
        dump.write_text(_record("E1", "Foo", ["Bar"]) + "\n", encoding="utf-8")
        kb, _ = load_kb(dump, lists_file, normalizer="identity")
        assert lookup_alias(kb, "Foo") == {"E1"}
        assert lookup_alias(kb, "foo") == frozenset()
        assert kb.normalizer == "identity"


class TestLinkExists:
    def test_direct_out_link(self, kb):
        assert link_exists(kb, "E01", "E02")

    def test_reverse_only_link_counts(self, kb):
        # E23 links E01; E01 does not link back
        assert "E23" not in kb.entities["E01"].out_links
        assert link_exists(kb, "E01", "E23")

    def test_unlinked_pair(self, kb):
        assert not link_exists(kb, "E24", "E25")

    def test_symmetry_over_all_pairs(self, kb):
        ids = sorted(kb.entities)
        for a in ids:
            for b in ids:
                assert link_exists(kb, a, b) == link_exists(kb, b, a)

    def test_matches_brute_force_adjacency(self, kb):
        adjacency = brute_force_adjacency(kb)
        ids = sorted(kb.entities)
        for a in ids:
            for b in ids:
                if a != b:
                    assert link_exists(kb, a, b) == (frozenset((a, b)) in adjacency)

    def test_unknown_entity_raises(self, kb):
        with pytest.raises(UnknownEntity):
            link_exists(kb, "E01", "E99")
        with pytest.raises(UnknownEntity):
            link_exists(kb, "E99", "E01")


class TestDocFreq:
    def test_doc_freq_never_exceeds_doc_count(self, kb):
        assert all(0 < df <= kb.doc_count for df in kb.doc_freq.values())

    def test_doc_freq_matches_brute_force_on_sample(self, kb, lists):
        rng = random.Random(1402)
        terms = rng.sample(sorted(kb.doc_freq), 20)
        for term in terms:
            count = 0
            for entity in kb.entities.values():
                if not entity.article_text:
                    continue
                tokens = tokenize(entity.article_text)
                if term in set(content_terms(tokens, lists.stopwords)):
                    count += 1
            assert kb.doc_freq[term] == count

    def test_stopwords_excluded_from_doc_freq(self, kb, lists):
        assert not (set(kb.doc_freq) & lists.stopwords)


def test_enums_round_trip():
    assert NerType("LOC") is NerType.LOC
    assert PosCategory("COMMON_NOUN") is PosCategory.COMMON_NOUN
