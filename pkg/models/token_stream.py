"""
Corpus Domain Types
RawDocument, TokenizerConfig, Token and TokenStream
"""

import hashlib
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

from errors import InvalidArgumentError


@dataclass(frozen=True)
class RawDocument:
    """Markup-stripped document body under its external id."""
    docno: str
    text: str

    def __post_init__(self):
        if not self.docno or not self.docno.strip():
            raise InvalidArgumentError("A document needs a non-empty docno.")


@dataclass(frozen=True)
class TokenizerConfig:
    """
    Tokenizer settings. Stopwords and short tokens keep their position but are
    not indexed.
    """
    stopwords: FrozenSet[str] = frozenset()
    stem: bool = False
    min_length: int = 2

    def __post_init__(self):
        if self.min_length < 1:
            raise InvalidArgumentError("Minimum token length must be at least 1.")
        object.__setattr__(self, 'stopwords', frozenset(w.lower() for w in self.stopwords))

    def fingerprint(self) -> int:
        """64-bit identity of the settings, recorded in index headers."""
        digest = hashlib.sha256()
        for word in sorted(self.stopwords):
            digest.update(word.encode('utf-8'))
            digest.update(b'\n')
        digest.update(f"stem={int(self.stem)};min_length={self.min_length}".encode('ascii'))
        return int.from_bytes(digest.digest()[:8], 'little')


@dataclass(frozen=True)
class Token:
    position: int
    term: str
    indexable: bool


@dataclass(frozen=True)
class TokenStream:
    """
    Position-numbered tokens of one document. Positions run 1..L without gaps.
    """
    docno: str
    tokens: Tuple[Token, ...] = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.tokens)

    def term_positions(self) -> Dict[str, List[int]]:
        """Positions of every indexable term, in first-occurrence order."""
        positions: Dict[str, List[int]] = {}
        for token in self.tokens:
            if token.indexable:
                positions.setdefault(token.term, []).append(token.position)
        return positions

    def indexable_count(self) -> int:
        return sum(1 for token in self.tokens if token.indexable)
