"""Knowledge-base dump loading, alias indexing and the entity link graph.

A dump is UTF-8 JSON lines, one entity per line:

    {"id": ..., "label": ..., "variants": [...], "class": ..., "ner_type": ...,
     "pos": ..., "article": ..., "links": [...], "rare": false}

Reference lists live in a single JSON file with keys `rare_blocklist`,
`class_filters`, `type_mapping` and `stopwords`.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import PeyvandError
from .textnorm import content_terms, get_normalizer, tokenize


class MalformedRecord(PeyvandError):
    def __init__(self, path: str | Path, line: int | None, reason: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {reason}")
        self.path = str(path)
        self.line = line
        self.reason = reason


class DuplicateEntityId(PeyvandError):
    def __init__(self, path: str | Path, line: int, entity_id: str):
        super().__init__(f"{path}:{line}: duplicate entity id {entity_id!r}")
        self.entity_id = entity_id


class UnknownEntity(PeyvandError):
    def __init__(self, entity_id: str):
        super().__init__(f"unknown entity id {entity_id!r}")
        self.entity_id = entity_id


class NerType(str, Enum):
    PER = "PER"
    LOC = "LOC"
    ORG = "ORG"
    WORK = "WORK"
    OTHER = "OTHER"
    UNKNOWN = "UNKNOWN"


class PosCategory(str, Enum):
    PROPER_NOUN = "PROPER_NOUN"
    COMMON_NOUN = "COMMON_NOUN"
    OTHER = "OTHER"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class EntityRecord:
    id: str
    canonical_label: str
    variant_labels: frozenset[str]
    kb_class: str
    ner_type: NerType
    pos_category: PosCategory
    article_text: str
    out_links: frozenset[str]
    rare: bool = False


@dataclass(frozen=True)
class ClassFilter:
    """Extra-evidence requirement for one fine class: if none of the trigger
    terms occurs in the document, the candidate keeps only `penalty` of its
    score."""

    triggers: frozenset[str]
    penalty: float


@dataclass(frozen=True)
class ReferenceLists:
    rare_blocklist: frozenset[str]
    class_filters: dict[str, ClassFilter]
    type_mapping: dict[NerType, frozenset[str]]
    stopwords: frozenset[str]


@dataclass
class KnowledgeBase:
    """Immutable after load; safe for concurrent readers."""

    entities: dict[str, EntityRecord]
    alias_index: dict[str, frozenset[str]]
    doc_count: int
    doc_freq: dict[str, int]
    normalizer: str = "persian"
    dropped_links: int = 0


def load_reference_lists(path: str | Path, normalizer: str = "persian") -> ReferenceLists:
    """Load and validate a reference-lists file.

    Trigger terms and stopwords are stored normalized so membership tests
    against normalized tokens are direct.
    """
    norm = get_normalizer(normalizer)
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedRecord(path, None, f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedRecord(path, None, "reference lists must be a JSON object")

    blocklist = data.get("rare_blocklist", [])
    if not isinstance(blocklist, list) or not all(isinstance(x, str) for x in blocklist):
        raise MalformedRecord(path, None, "rare_blocklist must be an array of entity ids")

    class_filters: dict[str, ClassFilter] = {}
    for cls, spec in data.get("class_filters", {}).items():
        if not isinstance(spec, dict) or "triggers" not in spec or "penalty" not in spec:
            raise MalformedRecord(path, None, f"class_filters[{cls!r}] needs triggers and penalty")
        penalty = spec["penalty"]
        if not isinstance(penalty, (int, float)) or not 0.0 < float(penalty) < 1.0:
            raise MalformedRecord(
                path, None, f"class_filters[{cls!r}].penalty must lie strictly between 0 and 1"
            )
        triggers = spec["triggers"]
        if not isinstance(triggers, list) or not all(isinstance(t, str) for t in triggers):
            raise MalformedRecord(path, None, f"class_filters[{cls!r}].triggers must be strings")
        class_filters[cls] = ClassFilter(frozenset(norm(t) for t in triggers), float(penalty))

    type_mapping: dict[NerType, frozenset[str]] = {}
    for key, classes in data.get("type_mapping", {}).items():
        try:
            ner = NerType(key)
        except ValueError:
            raise MalformedRecord(path, None, f"type_mapping key {key!r} is not a NER type") from None
        if not isinstance(classes, list) or not all(isinstance(c, str) for c in classes):
            raise MalformedRecord(path, None, f"type_mapping[{key!r}] must be an array of classes")
        type_mapping[ner] = frozenset(classes)

    stopwords = data.get("stopwords", [])
    if not isinstance(stopwords, list) or not all(isinstance(w, str) for w in stopwords):
        raise MalformedRecord(path, None, "stopwords must be an array of strings")

    return ReferenceLists(
        rare_blocklist=frozenset(blocklist),
        class_filters=class_filters,
        type_mapping=type_mapping,
        stopwords=frozenset(norm(w) for w in stopwords),
    )


_RECORD_KEYS = ("id", "label", "variants", "class", "ner_type", "pos", "article", "links")


def _parse_record(obj: object, path: str | Path, line_no: int) -> tuple[EntityRecord, list[str]]:
    if not isinstance(obj, dict):
        raise MalformedRecord(path, line_no, "record must be a JSON object")
    for key in _RECORD_KEYS:
        if key not in obj:
            raise MalformedRecord(path, line_no, f"missing key {key!r}")
    entity_id = obj["id"]
    label = obj["label"]
    if not isinstance(entity_id, str) or not entity_id:
        raise MalformedRecord(path, line_no, "id must be a non-empty string")
    if not isinstance(label, str) or not label:
        raise MalformedRecord(path, line_no, "label must be a non-empty string")
    variants = obj["variants"]
    if not isinstance(variants, list) or not all(isinstance(v, str) for v in variants):
        raise MalformedRecord(path, line_no, "variants must be an array of strings")
    links = obj["links"]
    if not isinstance(links, list) or not all(isinstance(l, str) for l in links):
        raise MalformedRecord(path, line_no, "links must be an array of entity ids")
    if not isinstance(obj["class"], str):
        raise MalformedRecord(path, line_no, "class must be a string")
    if not isinstance(obj["article"], str):
        raise MalformedRecord(path, line_no, "article must be a string")
    try:
        ner = NerType(obj["ner_type"])
    except ValueError:
        raise MalformedRecord(path, line_no, f"ner_type {obj['ner_type']!r} is invalid") from None
    try:
        pos = PosCategory(obj["pos"])
    except ValueError:
        raise MalformedRecord(path, line_no, f"pos {obj['pos']!r} is invalid") from None
    rare = obj.get("rare", False)
    if not isinstance(rare, bool):
        raise MalformedRecord(path, line_no, "rare must be a boolean")
    record = EntityRecord(
        id=entity_id,
        canonical_label=label,
        variant_labels=frozenset(variants),
        kb_class=obj["class"],
        ner_type=ner,
        pos_category=pos,
        article_text=obj["article"],
        out_links=frozenset(),  # resolved after the whole dump is read
        rare=rare,
    )
    return record, links


def load_kb(
    dump_path: str | Path,
    lists_path: str | Path,
    normalizer: str = "persian",
) -> tuple[KnowledgeBase, ReferenceLists]:
    """Load a dump and its reference lists and build all indexes.

    Out-links that point outside the dump (or back at the entity itself)
    are dropped and counted on `KnowledgeBase.dropped_links`; an
    incomplete dump subset is not an error.
    """
    lists = load_reference_lists(lists_path, normalizer)
    norm = get_normalizer(normalizer)

    raw: dict[str, tuple[EntityRecord, list[str]]] = {}
    with open(dump_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(dump_path, line_no, f"invalid JSON: {exc.msg}") from exc
            record, links = _parse_record(obj, dump_path, line_no)
            if record.id in raw:
                raise DuplicateEntityId(dump_path, line_no, record.id)
            raw[record.id] = (record, links)

    entities: dict[str, EntityRecord] = {}
    dropped = 0
    for entity_id, (record, links) in raw.items():
        resolved = frozenset(l for l in links if l in raw and l != entity_id)
        dropped += len(links) - len(resolved)
        entities[entity_id] = EntityRecord(
            id=record.id,
            canonical_label=record.canonical_label,
            variant_labels=record.variant_labels,
            kb_class=record.kb_class,
            ner_type=record.ner_type,
            pos_category=record.pos_category,
            article_text=record.article_text,
            out_links=resolved,
            rare=record.rare,
        )

    alias_sets: dict[str, set[str]] = {}
    for entity in entities.values():
        for alias in {entity.canonical_label, *entity.variant_labels}:
            alias_sets.setdefault(norm(alias), set()).add(entity.id)
    alias_index = {key: frozenset(ids) for key, ids in alias_sets.items()}

    doc_freq: Counter[str] = Counter()
    doc_count = 0
    for entity in entities.values():
        if not entity.article_text:
            continue
        doc_count += 1
        terms = set(content_terms(tokenize(entity.article_text, norm), lists.stopwords))
        doc_freq.update(terms)

    kb = KnowledgeBase(
        entities=entities,
        alias_index=alias_index,
        doc_count=doc_count,
        doc_freq=dict(doc_freq),
        normalizer=normalizer,
        dropped_links=dropped,
    )
    return kb, lists


def lookup_alias(kb: KnowledgeBase, surface: str) -> frozenset[str]:
    """Entity ids whose canonical or variant label normalizes to `surface`."""
    norm = get_normalizer(kb.normalizer)
    return kb.alias_index.get(norm(surface), frozenset())


def link_exists(kb: KnowledgeBase, a: str, b: str) -> bool:
    """True when either article links to the other (undirected reading)."""
    if a not in kb.entities:
        raise UnknownEntity(a)
    if b not in kb.entities:
        raise UnknownEntity(b)
    return b in kb.entities[a].out_links or a in kb.entities[b].out_links
