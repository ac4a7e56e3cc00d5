"""
EvalReport Domain Type
Per-topic metrics and positional diagnostics for one or more runs
"""

from dataclasses import dataclass, field
from statistics import fmean
from typing import Dict, List, Optional


@dataclass(frozen=True)
class TopicMetrics:
    run: str
    topic: int
    hits: int
    k: int
    precision_at_k: float
    average_precision: float
    r_precision: float
    objective: Optional[str] = None
    occurrences: int = 0
    skewness: Optional[float] = None       # None: undefined
    fitting_rate: Optional[float] = None   # None: undefined
    diagnosed: bool = False                # positional diagnostics were computed


@dataclass
class EvalReport:
    rows: List[TopicMetrics] = field(default_factory=list)
    metadata: Dict[str, str] = field(default_factory=dict)

    def runs(self) -> List[str]:
        return sorted({row.run for row in self.rows})

    def for_run(self, run: str) -> List[TopicMetrics]:
        return [row for row in self.rows if row.run == run]

    def mean(self, run: str, attribute: str) -> Optional[float]:
        """Mean over the topics where the value is defined."""
        values = [getattr(row, attribute) for row in self.for_run(run)]
        values = [v for v in values if v is not None]
        return fmean(values) if values else None
