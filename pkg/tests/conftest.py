from __future__ import annotations

from pathlib import Path

import pytest

from peyvand.corpus import load_corpus, load_predictions
from peyvand.kb import load_kb

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def kb_and_lists():
    return load_kb(DATA / "mini_kb.jsonl", DATA / "reference_lists.json")


@pytest.fixture(scope="session")
def kb(kb_and_lists):
    return kb_and_lists[0]


@pytest.fixture(scope="session")
def lists(kb_and_lists):
    return kb_and_lists[1]


@pytest.fixture(scope="session")
def mini_corpus():
    return load_corpus(DATA / "mini_corpus.jsonl")


@pytest.fixture(scope="session")
def golden_predictions():
    return load_predictions(DATA / "golden_predictions.jsonl")
