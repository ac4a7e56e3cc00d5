"""
QrelSet Domain Type
Relevance judgments keyed by topic id, then docno
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple

from errors import InvalidArgumentError


@dataclass
class QrelSet:
    """topic -> {docno: grade}; grade > 0 means relevant."""
    by_topic: Dict[int, Dict[str, int]] = field(default_factory=dict)

    def add(self, topic: int, docno: str, grade: int):
        # Edge case: Validate grade and duplicates
        if grade < 0:
            raise InvalidArgumentError(f"Grade for ({topic}, {docno}) must be non-negative, got {grade}.")
        judged = self.by_topic.setdefault(topic, {})
        if docno in judged:
            raise InvalidArgumentError(f"Duplicate judgment for topic {topic}, document {docno}.")
        judged[docno] = grade

    def topics(self) -> List[int]:
        return sorted(self.by_topic)

    def has_topic(self, topic: int) -> bool:
        return topic in self.by_topic

    def judgments(self, topic: int) -> Dict[str, int]:
        return self.by_topic.get(topic, {})

    def relevant(self, topic: int) -> frozenset:
        return frozenset(d for d, g in self.judgments(topic).items() if g > 0)

    def grade(self, topic: int, docno: str) -> int:
        return self.judgments(topic).get(docno, 0)

    def __len__(self):
        return sum(len(judged) for judged in self.by_topic.values())

    def __iter__(self) -> Iterator[Tuple[int, str, int]]:
        for topic in sorted(self.by_topic):
            for docno, grade in sorted(self.by_topic[topic].items()):
                yield topic, docno, grade
