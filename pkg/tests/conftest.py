"""
Shared fixtures: small hand-checked corpora, a tokenizer without surprises,
and an in-memory experiment store.
"""

import pytest
from sqlalchemy.orm import sessionmaker

from app.corpus_functions import tokenize
from app.index_functions import build_index
from database import create_tables, make_engine
from models import RawDocument, TokenizerConfig


@pytest.fixture
def tokenizer():
    return TokenizerConfig(stopwords=frozenset({'the', 'of', 'and'}), min_length=2)


@pytest.fixture
def index_of(tokenizer):
    """Build an index from RawDocuments with the fixture tokenizer."""
    def build(documents, order=3, threads=1):
        return build_index((tokenize(d, tokenizer) for d in documents), order, tokenizer, threads)
    return build


@pytest.fixture
def filler():
    """Distinct filler words of the form fxy, one per position."""
    def words(count, prefix='f'):
        return [f"{prefix}{chr(97 + i // 26)}{chr(97 + i % 26)}" for i in range(count)]
    return words


@pytest.fixture
def hand_corpus():
    return [
        RawDocument('D1', 'apple banana apple'),
        RawDocument('D2', 'banana cherry'),
        RawDocument('D3', 'cherry cherry cherry apple'),
    ]


@pytest.fixture
def hand_index(index_of, hand_corpus):
    return index_of(hand_corpus)


@pytest.fixture
def engine():
    engine = make_engine("sqlite://")
    create_tables(engine, quiet=True)
    yield engine
    engine.dispose()


@pytest.fixture
def db(engine):
    session = sessionmaker(autocommit=False, autoflush=False, bind=engine)()
    try:
        yield session
    finally:
        session.close()
