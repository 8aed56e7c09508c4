"""On-disk index cache: knowledge base plus reference lists in one file.

The format is a magic header line followed by canonical JSON (sorted keys,
sorted set members), so rebuilding from unchanged inputs is byte-identical.
A version bump in the header invalidates old caches loudly instead of
misreading them.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import PeyvandError
from .kb import (
    ClassFilter,
    EntityRecord,
    KnowledgeBase,
    NerType,
    PosCategory,
    ReferenceLists,
)

MAGIC = b"#peyvand-index"
CACHE_VERSION = 1
_HEADER = MAGIC + b":v%d\n" % CACHE_VERSION


class CacheError(PeyvandError):
    pass


class CacheVersionMismatch(CacheError):
    def __init__(self, path: str | Path, found: str):
        super().__init__(
            f"{path}: index cache version {found} does not match v{CACHE_VERSION}; "
            "rebuild it with `peyvand build-index`"
        )


def save_index(kb: KnowledgeBase, lists: ReferenceLists, path: str | Path) -> None:
    payload = {
        "normalizer": kb.normalizer,
        "doc_count": kb.doc_count,
        "dropped_links": kb.dropped_links,
        "doc_freq": kb.doc_freq,
        "alias_index": {key: sorted(ids) for key, ids in kb.alias_index.items()},
        "entities": {
            e.id: {
                "label": e.canonical_label,
                "variants": sorted(e.variant_labels),
                "class": e.kb_class,
                "ner_type": e.ner_type.value,
                "pos": e.pos_category.value,
                "article": e.article_text,
                "links": sorted(e.out_links),
                "rare": e.rare,
            }
            for e in kb.entities.values()
        },
        "lists": {
            "rare_blocklist": sorted(lists.rare_blocklist),
            "class_filters": {
                cls: {"triggers": sorted(f.triggers), "penalty": f.penalty}
                for cls, f in lists.class_filters.items()
            },
            "type_mapping": {ner.value: sorted(classes) for ner, classes in lists.type_mapping.items()},
            "stopwords": sorted(lists.stopwords),
        },
    }
    body = json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    Path(path).write_bytes(_HEADER + body.encode("utf-8") + b"\n")


def load_index(path: str | Path) -> tuple[KnowledgeBase, ReferenceLists]:
    raw = Path(path).read_bytes()
    header, _, body = raw.partition(b"\n")
    if not header.startswith(MAGIC + b":"):
        raise CacheError(f"{path}: not an index cache (bad magic header)")
    version = header[len(MAGIC) + 1 :].decode("ascii", "replace")
    if version != f"v{CACHE_VERSION}":
        raise CacheVersionMismatch(path, version)
    try:
        payload = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CacheError(f"{path}: corrupt index cache: {exc}") from exc

    entities = {
        entity_id: EntityRecord(
            id=entity_id,
            canonical_label=rec["label"],
            variant_labels=frozenset(rec["variants"]),
            kb_class=rec["class"],
            ner_type=NerType(rec["ner_type"]),
            pos_category=PosCategory(rec["pos"]),
            article_text=rec["article"],
            out_links=frozenset(rec["links"]),
            rare=rec["rare"],
        )
        for entity_id, rec in payload["entities"].items()
    }
    kb = KnowledgeBase(
        entities=entities,
        alias_index={key: frozenset(ids) for key, ids in payload["alias_index"].items()},
        doc_count=payload["doc_count"],
        doc_freq=payload["doc_freq"],
        normalizer=payload["normalizer"],
        dropped_links=payload["dropped_links"],
    )
    raw_lists = payload["lists"]
    lists = ReferenceLists(
        rare_blocklist=frozenset(raw_lists["rare_blocklist"]),
        class_filters={
            cls: ClassFilter(frozenset(f["triggers"]), f["penalty"])
            for cls, f in raw_lists["class_filters"].items()
        },
        type_mapping={
            NerType(key): frozenset(classes)
            for key, classes in raw_lists["type_mapping"].items()
        },
        stopwords=frozenset(raw_lists["stopwords"]),
    )
    return kb, lists
