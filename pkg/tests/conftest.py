from __future__ import annotations

from pathlib import Path

import pytest

from factlink.presence import CorpusIndex
from factlink.store import CorpusStore
from factlink.text import Lexicon, SynonymConfig, WordVectorEmbedder

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_store() -> CorpusStore:
    return CorpusStore.load(FIXTURES)


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return Lexicon.load(FIXTURES / "vectors.txt")


@pytest.fixture(scope="session")
def embedder(lexicon) -> WordVectorEmbedder:
    return WordVectorEmbedder(lexicon)


@pytest.fixture(scope="session")
def syn_cfg() -> SynonymConfig:
    return SynonymConfig.load_terms(FIXTURES / "medical_terms.txt")


@pytest.fixture(scope="session")
def corpus_index(fixture_store) -> CorpusIndex:
    return CorpusIndex(fixture_store.articles.values())
