"""Unsupervised entity linking for Persian social text.

Candidate generation from an alias dictionary, heuristic filtering,
TF-IDF context scoring plus link-graph coherence, NIL abstention, and an
evaluation harness with per-category precision/recall/F1.
"""

from .corpus import (
    CorpusStats,
    Document,
    Mention,
    NIL,
    PredictionDoc,
    corpus_stats,
    load_corpus,
    load_predictions,
    save_corpus,
    stats_by_category,
    write_predictions,
)
from .errors import PeyvandError
from .evaluate import EvalReport, MetricRow, f1, render_report, score_predictions
from .kb import (
    EntityRecord,
    KnowledgeBase,
    NerType,
    PosCategory,
    ReferenceLists,
    link_exists,
    load_kb,
    load_reference_lists,
    lookup_alias,
)
from .linker import (
    LinkResult,
    LinkerConfig,
    ScoredCandidate,
    context_score,
    filter_candidates,
    generate_candidates,
    graph_score,
    link_document,
    rank_and_select,
)
from .textnorm import Token, content_terms, get_normalizer, normalize, tokenize

__version__ = "0.1.0"

__all__ = [
    "CorpusStats",
    "Document",
    "EntityRecord",
    "EvalReport",
    "KnowledgeBase",
    "LinkResult",
    "LinkerConfig",
    "Mention",
    "MetricRow",
    "NIL",
    "NerType",
    "PeyvandError",
    "PosCategory",
    "PredictionDoc",
    "ReferenceLists",
    "ScoredCandidate",
    "Token",
    "content_terms",
    "context_score",
    "corpus_stats",
    "f1",
    "filter_candidates",
    "generate_candidates",
    "get_normalizer",
    "graph_score",
    "link_document",
    "link_exists",
    "load_corpus",
    "load_kb",
    "load_predictions",
    "load_reference_lists",
    "lookup_alias",
    "normalize",
    "rank_and_select",
    "render_report",
    "save_corpus",
    "score_predictions",
    "stats_by_category",
    "tokenize",
    "write_predictions",
    "__version__",
]
