"""Annotated documents, prediction records and corpus statistics.

Corpus files are UTF-8 JSON lines:

    {"id": ..., "category": ..., "text": ...,
     "mentions": [{"start": 0, "end": 5, "surface": ...,
                   "ner_type"?: ..., "pos"?: ..., "gold"?: id-or-null}]}

`gold` carries three states: an entity id, JSON null for an explicit
"no KB entry exists" annotation, and an absent key for "not annotated".
Prediction files share the shape, with `gold` replaced by `prediction`
plus `score` and `ambiguity`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TYPE_CHECKING

from .errors import PeyvandError
from .kb import KnowledgeBase, NerType, PosCategory, lookup_alias
from .textnorm import get_normalizer, tokenize

if TYPE_CHECKING:  # pragma: no cover
    from .linker import LinkResult


class _Nil:
    """Singleton marking an explicit unlinkable annotation or decision."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NIL"


NIL = _Nil()


class MalformedDocument(PeyvandError):
    def __init__(self, path: str | Path, line: int, reason: str):
        super().__init__(f"{path}:{line}: {reason}")
        self.line = line
        self.reason = reason


class OverlappingMentions(PeyvandError):
    def __init__(self, doc_id: str):
        super().__init__(f"document {doc_id!r} has overlapping mentions")
        self.doc_id = doc_id


class SpanMismatch(PeyvandError):
    def __init__(self, doc_id: str, mention_index: int, reason: str):
        super().__init__(f"document {doc_id!r}, mention {mention_index}: {reason}")
        self.doc_id = doc_id
        self.mention_index = mention_index


@dataclass(frozen=True)
class Mention:
    start: int
    end: int
    surface: str
    ner_type: NerType | None = None
    pos_tag: PosCategory | None = None
    gold: str | _Nil | None = None


@dataclass
class Document:
    id: str
    category: str
    text: str
    mentions: list[Mention] = field(default_factory=list)


@dataclass(frozen=True)
class RankedCandidate:
    entity_id: str
    score: float


@dataclass(frozen=True)
class PredictedMention:
    start: int
    end: int
    surface: str
    prediction: str | _Nil
    score: float
    ambiguity: tuple[RankedCandidate, ...]
    ner_type: NerType | None = None
    pos_tag: PosCategory | None = None


@dataclass
class PredictionDoc:
    id: str
    category: str
    text: str
    mentions: list[PredictedMention] = field(default_factory=list)


def _validate_mentions(doc_id: str, text: str, mentions: Sequence[Mention]) -> None:
    for i, m in enumerate(mentions):
        if not (0 <= m.start < m.end <= len(text)):
            raise SpanMismatch(doc_id, i, f"span [{m.start}, {m.end}) out of bounds")
        if text[m.start : m.end] != m.surface:
            raise SpanMismatch(doc_id, i, "surface does not equal the text slice")
    spans = sorted((m.start, m.end) for m in mentions)
    for (_, prev_end), (nxt_start, _) in zip(spans, spans[1:]):
        if nxt_start < prev_end:
            raise OverlappingMentions(doc_id)


def _parse_mention(obj: dict, path: str | Path, line_no: int) -> Mention:
    for key in ("start", "end", "surface"):
        if key not in obj:
            raise MalformedDocument(path, line_no, f"mention missing key {key!r}")
    if not isinstance(obj["start"], int) or not isinstance(obj["end"], int):
        raise MalformedDocument(path, line_no, "mention offsets must be integers")
    if not isinstance(obj["surface"], str):
        raise MalformedDocument(path, line_no, "mention surface must be a string")
    ner = obj.get("ner_type")
    pos = obj.get("pos")
    try:
        ner_type = NerType(ner) if ner is not None else None
        pos_tag = PosCategory(pos) if pos is not None else None
    except ValueError as exc:
        raise MalformedDocument(path, line_no, str(exc)) from None
    if "gold" in obj:
        raw_gold = obj["gold"]
        if raw_gold is None:
            gold: str | _Nil | None = NIL
        elif isinstance(raw_gold, str):
            gold = raw_gold
        else:
            raise MalformedDocument(path, line_no, "gold must be an entity id or null")
    else:
        gold = None
    return Mention(obj["start"], obj["end"], obj["surface"], ner_type, pos_tag, gold)


def load_corpus(path: str | Path) -> list[Document]:
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedDocument(path, line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise MalformedDocument(path, line_no, "document must be a JSON object")
            for key in ("id", "category", "text", "mentions"):
                if key not in obj:
                    raise MalformedDocument(path, line_no, f"missing key {key!r}")
            doc_id, category, text = obj["id"], obj["category"], obj["text"]
            if not isinstance(doc_id, str) or not doc_id:
                raise MalformedDocument(path, line_no, "id must be a non-empty string")
            if not isinstance(category, str) or not isinstance(text, str):
                raise MalformedDocument(path, line_no, "category and text must be strings")
            if doc_id in seen:
                raise MalformedDocument(path, line_no, f"duplicate document id {doc_id!r}")
            seen.add(doc_id)
            if not isinstance(obj["mentions"], list):
                raise MalformedDocument(path, line_no, "mentions must be an array")
            mentions = [_parse_mention(m, path, line_no) for m in obj["mentions"]]
            _validate_mentions(doc_id, text, mentions)
            docs.append(Document(doc_id, category, text, mentions))
    return docs


def _mention_to_obj(m: Mention) -> dict:
    obj: dict = {"start": m.start, "end": m.end, "surface": m.surface}
    if m.ner_type is not None:
        obj["ner_type"] = m.ner_type.value
    if m.pos_tag is not None:
        obj["pos"] = m.pos_tag.value
    if m.gold is not None:
        obj["gold"] = None if isinstance(m.gold, _Nil) else m.gold
    return obj


def save_corpus(docs: Iterable[Document], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            obj = {
                "id": doc.id,
                "category": doc.category,
                "text": doc.text,
                "mentions": [_mention_to_obj(m) for m in doc.mentions],
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def write_predictions(
    docs: Sequence[Document],
    results: Sequence[Sequence["LinkResult"]],
    path: str | Path,
) -> None:
    """Serialize one prediction record per document, in input order."""
    if len(docs) != len(results):
        raise ValueError("one result list per document required")
    with open(path, "w", encoding="utf-8") as fh:
        for doc, doc_results in zip(docs, results):
            if len(doc.mentions) != len(doc_results):
                raise ValueError(f"document {doc.id!r}: one result per mention required")
            mentions = []
            for mention, res in zip(doc.mentions, doc_results):
                obj: dict = {"start": mention.start, "end": mention.end, "surface": mention.surface}
                if mention.ner_type is not None:
                    obj["ner_type"] = mention.ner_type.value
                if mention.pos_tag is not None:
                    obj["pos"] = mention.pos_tag.value
                obj["prediction"] = None if isinstance(res.decision, _Nil) else res.decision
                obj["score"] = res.score
                obj["ambiguity"] = [
                    {"id": c.entity_id, "score": c.combined} for c in res.ambiguity
                ]
                mentions.append(obj)
            record = {"id": doc.id, "category": doc.category, "text": doc.text, "mentions": mentions}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_predictions(path: str | Path) -> list[PredictionDoc]:
    docs: list[PredictionDoc] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedDocument(path, line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict) or not isinstance(obj.get("id"), str):
                raise MalformedDocument(path, line_no, "prediction record needs a string id")
            mentions = []
            for m in obj.get("mentions", []):
                for key in ("start", "end", "surface", "prediction", "score", "ambiguity"):
                    if key not in m:
                        raise MalformedDocument(path, line_no, f"prediction missing key {key!r}")
                prediction = NIL if m["prediction"] is None else m["prediction"]
                ner = m.get("ner_type")
                pos = m.get("pos")
                mentions.append(
                    PredictedMention(
                        start=m["start"],
                        end=m["end"],
                        surface=m["surface"],
                        prediction=prediction,
                        score=float(m["score"]),
                        ambiguity=tuple(
                            RankedCandidate(c["id"], float(c["score"])) for c in m["ambiguity"]
                        ),
                        ner_type=NerType(ner) if ner is not None else None,
                        pos_tag=PosCategory(pos) if pos is not None else None,
                    )
                )
            docs.append(PredictionDoc(obj["id"], obj.get("category", ""), obj.get("text", ""), mentions))
    return docs


@dataclass(frozen=True)
class CorpusStats:
    documents: int
    sentences: int
    words: int
    entities: int
    candidates: int
    words_per_article: float
    entities_per_article: float
    candidates_per_mention: float


_SENTENCE_BREAK = re.compile(r"[.!?؟\n]")


def count_sentences(text: str) -> int:
    """Approximate sentence count: split on ., !, ?, ؟ and newline."""
    return sum(1 for part in _SENTENCE_BREAK.split(text) if part.strip())


def corpus_stats(docs: Sequence[Document], kb: KnowledgeBase) -> CorpusStats:
    """Dataset-level counts; candidates are pre-filter alias matches."""
    norm = get_normalizer(kb.normalizer)
    documents = len(docs)
    sentences = sum(count_sentences(d.text) for d in docs)
    words = sum(len(tokenize(d.text, norm)) for d in docs)
    entities = sum(len(d.mentions) for d in docs)
    candidates = sum(
        len(lookup_alias(kb, m.surface)) for d in docs for m in d.mentions
    )

    def ratio(num: int, den: int) -> float:
        return num / den if den else 0.0

    return CorpusStats(
        documents=documents,
        sentences=sentences,
        words=words,
        entities=entities,
        candidates=candidates,
        words_per_article=ratio(words, documents),
        entities_per_article=ratio(entities, documents),
        candidates_per_mention=ratio(candidates, entities),
    )


def stats_by_category(docs: Sequence[Document], kb: KnowledgeBase) -> dict[str, CorpusStats]:
    categories = sorted({d.category for d in docs})
    return {
        cat: corpus_stats([d for d in docs if d.category == cat], kb) for cat in categories
    }
