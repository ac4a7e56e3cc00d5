"""
ExpansionCandidates Domain Type
Terms whose in-document distributions overlap the query's, best first
"""

from dataclasses import dataclass
from typing import Iterator, List, Tuple


@dataclass(frozen=True)
class ExpansionCandidates:
    """
    (term, aggregated similarity) sorted by similarity desc, then term asc.
    `r` is the number of feedback documents scanned and `k` the cutoff.
    """
    candidates: Tuple[Tuple[str, float], ...]
    r: int
    k: int

    def terms(self) -> List[str]:
        return [t for t, _ in self.candidates]

    def score(self, term: str) -> float:
        return dict(self.candidates).get(term, 0.0)

    def __len__(self):
        return len(self.candidates)

    def __iter__(self) -> Iterator[Tuple[str, float]]:
        return iter(self.candidates)
