"""
Index Domain Types
Posting, DocEntry, PostingList and the immutable Index (vocabulary + doc table + stats)
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import InvalidArgumentError
from models.spectral_vector import SpectralVector


@dataclass(frozen=True)
class DocEntry:
    docno: str
    length: int


@dataclass(frozen=True)
class Posting:
    """One (document ordinal, spectral vector) entry of an inverted list."""
    doc: int
    coeffs: SpectralVector

    @property
    def tf(self) -> int:
        # a0 = tf / sqrt(L)
        return int(round(self.coeffs.a0 * math.sqrt(self.coeffs.length)))


@dataclass(frozen=True, eq=False)
class PostingList:
    """
    Inverted list of one term as parallel arrays: ascending document ordinals
    and a (df, 2n+1) coefficient matrix.
    """
    docs: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        docs = np.ascontiguousarray(self.docs, dtype=np.uint32)
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 2 or coeffs.shape[0] != docs.shape[0]:
            raise InvalidArgumentError("Posting docs and coefficient rows must align.")
        docs.flags.writeable = False
        coeffs.flags.writeable = False
        object.__setattr__(self, 'docs', docs)
        object.__setattr__(self, 'coeffs', coeffs)

    @property
    def df(self) -> int:
        return int(self.docs.shape[0])

    def find(self, doc: int) -> Optional[int]:
        """Row of `doc` in this list, or None."""
        i = int(np.searchsorted(self.docs, doc))
        if i < self.df and int(self.docs[i]) == doc:
            return i
        return None


class Index:
    """
    Augmented inverted file: term -> PostingList, plus the document table and
    collection statistics. Treated as immutable once built or loaded.
    """

    def __init__(
        self,
        order: int,
        docs: List[DocEntry],
        vocabulary: Dict[str, PostingList],
        fingerprint: int = 0
    ):
        self.order = order
        self.docs: Tuple[DocEntry, ...] = tuple(docs)
        self.vocabulary: Dict[str, PostingList] = dict(vocabulary)
        self.fingerprint = fingerprint

    @property
    def num_docs(self) -> int:
        return len(self.docs)

    @cached_property
    def doc_lengths(self) -> np.ndarray:
        return np.array([d.length for d in self.docs], dtype=np.float64)

    @cached_property
    def _ordinals(self) -> Dict[str, int]:
        return {d.docno: i for i, d in enumerate(self.docs)}

    @cached_property
    def _forward(self) -> Dict[int, List[Tuple[str, int]]]:
        # doc ordinal -> [(term, row in that term's PostingList)], terms ascending
        forward: Dict[int, List[Tuple[str, int]]] = {}
        for term in sorted(self.vocabulary):
            for row, doc in enumerate(self.vocabulary[term].docs.tolist()):
                forward.setdefault(doc, []).append((term, row))
        return forward

    def ordinal(self, docno: str) -> Optional[int]:
        return self._ordinals.get(docno)

    def doc(self, ordinal: int) -> DocEntry:
        return self.docs[ordinal]

    def posting_list(self, term: str) -> Optional[PostingList]:
        return self.vocabulary.get(term)

    def df(self, term: str) -> int:
        plist = self.vocabulary.get(term)
        return plist.df if plist is not None else 0

    def vector(self, term: str, doc: int) -> Optional[SpectralVector]:
        """Spectral vector of `term` in document `doc`, or None if absent."""
        plist = self.vocabulary.get(term)
        if plist is None:
            return None
        row = plist.find(doc)
        if row is None:
            return None
        return SpectralVector(self.order, plist.coeffs[row], self.docs[doc].length)

    def doc_terms(self, doc: int) -> List[Tuple[str, int]]:
        return self._forward.get(doc, [])

    def __eq__(self, other):
        if not isinstance(other, Index):
            return NotImplemented
        if (self.order, self.docs, self.fingerprint) != (other.order, other.docs, other.fingerprint):
            return False
        if self.vocabulary.keys() != other.vocabulary.keys():
            return False
        return all(
            np.array_equal(a.docs, other.vocabulary[t].docs)
            and np.array_equal(a.coeffs, other.vocabulary[t].coeffs)
            for t, a in self.vocabulary.items()
        )

    __hash__ = None

    def __repr__(self):
        return f"<Index(order={self.order}, docs={self.num_docs}, terms={len(self.vocabulary)})>"
