"""
Retrieval Domain Types
Query (weighted terms) and RankedList (deterministically ordered results)
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from errors import InvalidArgumentError


@dataclass(frozen=True)
class Query:
    """Weighted query terms; at least one term, weights finite and positive."""
    terms: Tuple[Tuple[str, float], ...]

    def __post_init__(self):
        terms = tuple((str(t), float(w)) for t, w in self.terms)
        object.__setattr__(self, 'terms', terms)

        # Edge case: Validate terms and weights
        if not terms:
            raise InvalidArgumentError("A query needs at least one term.")
        seen = set()
        for term, weight in terms:
            if not term:
                raise InvalidArgumentError("Query terms cannot be empty.")
            if not math.isfinite(weight) or weight <= 0:
                raise InvalidArgumentError(f"Weight of '{term}' must be finite and positive, got {weight}.")
            if term in seen:
                raise InvalidArgumentError(f"Query term '{term}' appears twice.")
            seen.add(term)

    @classmethod
    def of(cls, *terms: str) -> "Query":
        return cls(tuple((t, 1.0) for t in terms))

    @property
    def term_set(self) -> frozenset:
        return frozenset(t for t, _ in self.terms)

    def weights(self) -> Dict[str, float]:
        return dict(self.terms)

    def __iter__(self) -> Iterator[Tuple[str, float]]:
        return iter(self.terms)

    def __str__(self):
        return ' '.join(t if w == 1.0 else f"{t}^{w:g}" for t, w in self.terms)


@dataclass(frozen=True)
class RankedEntry:
    """
    One result. `baseline` is the score of the run the entry came from and
    breaks ties after re-ranking; `doc` is the index ordinal when known.
    """
    docno: str
    score: float
    baseline: float
    doc: Optional[int] = None


def ranking_key(entry: RankedEntry):
    return (-entry.score, -entry.baseline, entry.docno)


@dataclass(frozen=True)
class RankedList:
    """Results sorted by score desc, then baseline desc, then docno asc."""
    entries: Tuple[RankedEntry, ...] = ()

    @classmethod
    def from_entries(cls, entries, top_n: Optional[int] = None) -> "RankedList":
        ordered = sorted(entries, key=ranking_key)
        if top_n is not None:
            ordered = ordered[:top_n]
        return cls(tuple(ordered))

    def docnos(self) -> List[str]:
        return [e.docno for e in self.entries]

    def head(self, n: int) -> "RankedList":
        return RankedList(self.entries[:n])

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[RankedEntry]:
        return iter(self.entries)

    def __getitem__(self, i) -> RankedEntry:
        return self.entries[i]
