"""The linking pipeline: candidates, filters, scoring, NIL abstention.

For every mention the pipeline looks up candidates in the alias index,
applies the four heuristic filters (type, POS, popularity, class-specific
evidence), then scores each surviving candidate with

    combined = penalty * (lambda * context + (1 - lambda) * graph)

where `context` is the TF-IDF cosine between the document text around the
mention and the candidate's article, and `graph` is the min-max-normalized
count of distinct candidates of the document's other mentions whose
articles link to the candidate (either direction). The top candidate wins
unless its combined score falls below the NIL threshold; rejected
candidates are kept on a ranked ambiguity list.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import PeyvandError
from .corpus import Document, Mention, NIL, _Nil
from .kb import (
    EntityRecord,
    KnowledgeBase,
    NerType,
    PosCategory,
    ReferenceLists,
    link_exists,
    lookup_alias,
)
from .textnorm import Token, get_normalizer, tokenize


class ConfigError(PeyvandError):
    pass


@dataclass(frozen=True)
class LinkerConfig:
    """Pipeline knobs. `lambda_weight` mixes context against graph score;
    `context_window` limits the context to that many tokens on each side
    of the mention (None means the whole document)."""

    lambda_weight: float = 0.5
    nil_threshold: float = 0.05
    type_filter: bool = True
    pos_filter: bool = True
    popularity_filter: bool = True
    class_filter: bool = True
    normalizer: str = "persian"
    context_window: int | None = None
    idf_smoothing: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.lambda_weight <= 1.0:
            raise ConfigError(f"lambda must lie in [0, 1], got {self.lambda_weight}")
        if self.nil_threshold < 0.0:
            raise ConfigError(f"nil_threshold must be non-negative, got {self.nil_threshold}")
        if self.context_window is not None and self.context_window < 1:
            raise ConfigError("context_window must be a positive token count or null")
        get_normalizer(self.normalizer)  # raises on unknown profile

    @classmethod
    def from_dict(cls, data: Mapping) -> "LinkerConfig":
        known = {"lambda", "nil_threshold", "filters", "normalizer", "context_window", "idf_smoothing"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        filters = data.get("filters", {})
        bad = set(filters) - {"type", "pos", "popularity", "class"}
        if bad:
            raise ConfigError(f"unknown filter keys: {sorted(bad)}")
        try:
            return cls(
                lambda_weight=float(data.get("lambda", cls.lambda_weight)),
                nil_threshold=float(data.get("nil_threshold", cls.nil_threshold)),
                type_filter=bool(filters.get("type", cls.type_filter)),
                pos_filter=bool(filters.get("pos", cls.pos_filter)),
                popularity_filter=bool(filters.get("popularity", cls.popularity_filter)),
                class_filter=bool(filters.get("class", cls.class_filter)),
                normalizer=data.get("normalizer", cls.normalizer),
                context_window=data.get("context_window", cls.context_window),
                idf_smoothing=bool(data.get("idf_smoothing", cls.idf_smoothing)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config value: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | Path) -> "LinkerConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lambda_weight,
            "nil_threshold": self.nil_threshold,
            "filters": {
                "type": self.type_filter,
                "pos": self.pos_filter,
                "popularity": self.popularity_filter,
                "class": self.class_filter,
            },
            "normalizer": self.normalizer,
            "context_window": self.context_window,
            "idf_smoothing": self.idf_smoothing,
        }


@dataclass(frozen=True)
class ScoredCandidate:
    entity_id: str
    context_score: float
    graph_score: float
    penalty: float
    combined: float


@dataclass(frozen=True)
class LinkResult:
    mention_index: int
    decision: str | _Nil
    score: float
    ambiguity: tuple[ScoredCandidate, ...]


def generate_candidates(kb: KnowledgeBase, mention: Mention) -> frozenset[str]:
    """All entities whose alias matches the mention surface."""
    return lookup_alias(kb, mention.surface)


def _document_term_set(kb: KnowledgeBase, lists: ReferenceLists, doc: Document) -> set[str]:
    norm = get_normalizer(kb.normalizer)
    return {t.text for t in tokenize(doc.text, norm) if t.text not in lists.stopwords}


def _apply_filters(
    kb: KnowledgeBase,
    lists: ReferenceLists,
    cfg: LinkerConfig,
    mention: Mention,
    candidates: frozenset[str] | set[str],
    doc_terms: set[str],
) -> tuple[set[str], dict[str, float]]:
    kept = set(candidates)

    # Type check: only when the mention carries a usable type and the
    # mapping has an opinion about it.
    if cfg.type_filter and mention.ner_type not in (None, NerType.UNKNOWN):
        allowed = lists.type_mapping.get(mention.ner_type)
        if allowed is not None:
            kept = {c for c in kept if kb.entities[c].kb_class in allowed}

    # POS check: UNKNOWN on either side keeps the candidate.
    if cfg.pos_filter and mention.pos_tag not in (None, PosCategory.UNKNOWN):
        kept = {
            c
            for c in kept
            if kb.entities[c].pos_category in (mention.pos_tag, PosCategory.UNKNOWN)
        }

    # Popularity: the manually curated rare list, whether shipped as a
    # blocklist or as per-record flags in the dump.
    if cfg.popularity_filter:
        kept = {
            c for c in kept if c not in lists.rare_blocklist and not kb.entities[c].rare
        }

    penalties = {c: 1.0 for c in kept}

    # Class-specific evidence: generic names (artwork titles and the like)
    # keep their full rate only when a trigger term appears in the document.
    if cfg.class_filter:
        for c in kept:
            class_filter = lists.class_filters.get(kb.entities[c].kb_class)
            if class_filter is not None and not (class_filter.triggers & doc_terms):
                penalties[c] = class_filter.penalty

    return kept, penalties


def filter_candidates(
    kb: KnowledgeBase,
    lists: ReferenceLists,
    cfg: LinkerConfig,
    doc: Document,
    mention: Mention,
    candidates: frozenset[str] | set[str],
) -> tuple[set[str], dict[str, float]]:
    """Apply type, POS, popularity and class filters, in that order.

    Returns the surviving candidate set and a penalty per survivor
    (1.0 unless a class filter fired). Filters never add candidates.
    """
    return _apply_filters(kb, lists, cfg, mention, candidates, _document_term_set(kb, lists, doc))


def _idf(term: str, kb: KnowledgeBase, smoothing: bool) -> float | None:
    df = kb.doc_freq.get(term, 0)
    if smoothing:
        return math.log((1 + kb.doc_count) / (1 + df)) + 1.0
    if df == 0 or kb.doc_count == 0:
        return None  # term unseen in the reference collection; drop it
    return math.log(kb.doc_count / df) + 1.0


def _tfidf_vector(terms: Sequence[str], kb: KnowledgeBase, smoothing: bool) -> dict[str, float]:
    vector: dict[str, float] = {}
    for term, count in Counter(terms).items():
        idf = _idf(term, kb, smoothing)
        if idf is not None:
            vector[term] = count * idf
    return vector


def _cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(w * b[t] for t, w in a.items() if t in b)
    if dot == 0.0:
        return 0.0
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    return dot / (norm_a * norm_b)


def _context_terms(
    tokens: Sequence[Token],
    mention: Mention,
    stopwords: frozenset[str],
    window: int | None,
) -> list[str]:
    """Document terms around the mention: every token not touching the
    mention span, optionally limited to `window` tokens on each side."""
    before = [t for t in tokens if t.end <= mention.start]
    after = [t for t in tokens if t.start >= mention.end]
    if window is not None:
        before = before[-window:]
        after = after[:window]
    return [t.text for t in before + after if t.text not in stopwords]


class _DocScorer:
    """Shared per-document state so the text is tokenized and article
    vectors are built once per `link_document` call."""

    def __init__(
        self,
        kb: KnowledgeBase,
        lists: ReferenceLists,
        cfg: LinkerConfig,
        doc: Document,
    ):
        self.kb = kb
        self.lists = lists
        self.cfg = cfg
        self.doc = doc
        norm = get_normalizer(kb.normalizer)
        self.tokens = tokenize(doc.text, norm)
        self.doc_terms = {t.text for t in self.tokens if t.text not in lists.stopwords}
        self._norm = norm
        self._article_vectors: dict[str, dict[str, float]] = {}

    def article_vector(self, entity: EntityRecord) -> dict[str, float]:
        cached = self._article_vectors.get(entity.id)
        if cached is None:
            terms = [
                t.text
                for t in tokenize(entity.article_text, self._norm)
                if t.text not in self.lists.stopwords
            ]
            cached = _tfidf_vector(terms, self.kb, self.cfg.idf_smoothing)
            self._article_vectors[entity.id] = cached
        return cached

    def context_score(self, mention: Mention, entity: EntityRecord) -> float:
        ctx = _context_terms(self.tokens, mention, self.lists.stopwords, self.cfg.context_window)
        return _cosine(
            _tfidf_vector(ctx, self.kb, self.cfg.idf_smoothing),
            self.article_vector(entity),
        )

    def raw_link_counts(
        self, mention_index: int, doc_candidates: Mapping[int, frozenset[str] | set[str]]
    ) -> dict[str, int]:
        others: set[str] = set()
        for j, cands in doc_candidates.items():
            if j != mention_index:
                others.update(cands)
        return {
            c: sum(1 for o in others if link_exists(self.kb, c, o))
            for c in sorted(doc_candidates.get(mention_index, ()))
        }

    def rank(
        self,
        mention_index: int,
        doc_candidates: Mapping[int, frozenset[str] | set[str]],
        penalties: Mapping[str, float],
    ) -> LinkResult:
        mention = self.doc.mentions[mention_index]
        raw = self.raw_link_counts(mention_index, doc_candidates)
        max_raw = max(raw.values(), default=0)
        scored = []
        for entity_id in sorted(doc_candidates.get(mention_index, ())):
            entity = self.kb.entities[entity_id]
            ctx = self.context_score(mention, entity)
            graph = raw[entity_id] / max_raw if max_raw else 0.0
            penalty = penalties.get(entity_id, 1.0)
            combined = penalty * (
                self.cfg.lambda_weight * ctx + (1.0 - self.cfg.lambda_weight) * graph
            )
            scored.append(ScoredCandidate(entity_id, ctx, graph, penalty, combined))
        scored.sort(key=lambda c: (-c.combined, c.entity_id))
        if not scored:
            return LinkResult(mention_index, NIL, 0.0, ())
        top = scored[0]
        if top.combined < self.cfg.nil_threshold:
            return LinkResult(mention_index, NIL, top.combined, tuple(scored))
        return LinkResult(mention_index, top.entity_id, top.combined, tuple(scored[1:]))


def context_score(
    kb: KnowledgeBase,
    lists: ReferenceLists,
    doc: Document,
    mention: Mention,
    entity: EntityRecord,
    window: int | None = None,
    idf_smoothing: bool = True,
) -> float:
    """TF-IDF cosine between the mention's context and the entity article.

    TF is the raw term count; IDF(t) = ln((1 + N) / (1 + df(t))) + 1 over
    the knowledge base's article collection. Empty context or empty
    article yields 0.
    """
    cfg = LinkerConfig(context_window=window, idf_smoothing=idf_smoothing)
    return _DocScorer(kb, lists, cfg, doc).context_score(mention, entity)


def graph_score(
    kb: KnowledgeBase,
    candidate: str,
    mention_index: int,
    doc_candidates: Mapping[int, frozenset[str] | set[str]],
) -> float:
    """Distinct candidates of other mentions linked to `candidate`,
    normalized by the best raw count among this mention's candidates."""
    if candidate not in doc_candidates.get(mention_index, ()):
        raise ValueError(f"{candidate!r} is not a candidate of mention {mention_index}")
    others: set[str] = set()
    for j, cands in doc_candidates.items():
        if j != mention_index:
            others.update(cands)
    raw = {
        c: sum(1 for o in others if link_exists(kb, c, o))
        for c in doc_candidates[mention_index]
    }
    max_raw = max(raw.values(), default=0)
    return raw[candidate] / max_raw if max_raw else 0.0


def rank_and_select(
    kb: KnowledgeBase,
    lists: ReferenceLists,
    cfg: LinkerConfig,
    doc: Document,
    mention_index: int,
    doc_candidates: Mapping[int, frozenset[str] | set[str]],
    penalties: Mapping[str, float] | None = None,
) -> LinkResult:
    """Score one mention's kept candidates and pick the winner or NIL.

    Ties on the combined score go to the lowest entity id. With an empty
    candidate set, or a top score below the NIL threshold, the decision is
    NIL and every scored candidate lands on the ambiguity list.
    """
    scorer = _DocScorer(kb, lists, cfg, doc)
    return scorer.rank(mention_index, doc_candidates, penalties or {})


def link_document(
    kb: KnowledgeBase,
    lists: ReferenceLists,
    cfg: LinkerConfig,
    doc: Document,
) -> list[LinkResult]:
    """Run the full pipeline over a document, one result per mention.

    Post-filter candidate sets for all mentions are built first because the
    graph score is collective; scoring then proceeds mention by mention.
    Pure function of its inputs: documents can be processed in parallel
    against a shared knowledge base.
    """
    scorer = _DocScorer(kb, lists, cfg, doc)
    doc_candidates: dict[int, set[str]] = {}
    penalties_by_mention: dict[int, dict[str, float]] = {}
    for i, mention in enumerate(doc.mentions):
        candidates = generate_candidates(kb, mention)
        kept, penalties = _apply_filters(kb, lists, cfg, mention, candidates, scorer.doc_terms)
        doc_candidates[i] = kept
        penalties_by_mention[i] = penalties
    return [
        scorer.rank(i, doc_candidates, penalties_by_mention[i])
        for i in range(len(doc.mentions))
    ]
