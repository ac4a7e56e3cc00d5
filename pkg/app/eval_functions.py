"""
Evaluation Functions Implementation
Retrieval metrics (P@k, AP, R-precision, via trec_eval) and positional diagnostics
(skewness of query-term positions, objective fitting rate) with CSV output.
"""

import csv
import logging
from typing import Dict, List, Mapping, Optional, Sequence, TextIO, Tuple

import numpy as np
import pytrec_eval

from app.corpus_functions import default_tokenizer_config, tokenize
from app.objective_functions import format_objective, in_region
from config import EVAL_CONFIG
from errors import CorpusUnavailableError, InvalidArgumentError
from models import (
    EvalReport, ObjectiveSpec, QrelSet, Query, RankedList, RawDocument, TokenizerConfig, TopicMetrics
)

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ['run', 'topic', 'hits', 'k', 'p_at_k', 'average_precision', 'r_precision']
DIAGNOSTICS_COLUMNS = ['run', 'topic', 'objective', 'occurrences', 'skewness', 'fitting_rate']

Documents = Mapping[str, RawDocument]


def _judgments(qrels: QrelSet, topic: int) -> dict:
    # Edge case: Validate topic
    if not qrels.has_topic(topic):
        raise InvalidArgumentError(f"Topic {topic} has no relevance judgments.")
    return qrels.judgments(topic)


def trec_measures(ranked: RankedList, qrels: QrelSet, topic: int, k: int = None) -> Dict[str, float]:
    """
    P@k, AP and R-precision of one topic from trec_eval. Scores handed to the
    evaluator are derived from rank so the list order is what gets measured.
    """
    k = EVAL_CONFIG['k'] if k is None else k
    if k < 1:
        raise InvalidArgumentError(f"k must be at least 1, got {k}.")
    judged = _judgments(qrels, topic)
    docnos = ranked.docnos()
    if not docnos or not any(grade > 0 for grade in judged.values()):
        return {'precision_at_k': 0.0, 'average_precision': 0.0, 'r_precision': 0.0}

    qid = str(topic)
    run = {qid: {docno: float(len(docnos) - rank) for rank, docno in enumerate(docnos)}}
    evaluator = pytrec_eval.RelevanceEvaluator({qid: dict(judged)}, {f'P.{k}', 'map', 'Rprec'})
    measures = evaluator.evaluate(run)[qid]
    return {
        'precision_at_k': measures[f'P_{k}'],
        'average_precision': measures['map'],
        'r_precision': measures['Rprec']
    }


def precision_at_k(ranked: RankedList, qrels: QrelSet, topic: int, k: int = None) -> float:
    """Relevant documents among the first k, divided by k."""
    return trec_measures(ranked, qrels, topic, k)['precision_at_k']


def average_precision(ranked: RankedList, qrels: QrelSet, topic: int) -> float:
    """Mean of the precision at each relevant rank, over all relevant documents."""
    return trec_measures(ranked, qrels, topic)['average_precision']


def r_precision(ranked: RankedList, qrels: QrelSet, topic: int) -> float:
    """Precision at R, where R is the number of relevant documents."""
    return trec_measures(ranked, qrels, topic)['r_precision']


def sample_skewness(values: Sequence[float]) -> Optional[float]:
    """g1 = m3 / m2^1.5 with population moments; None below 3 values or without spread."""
    sample = np.asarray(values, dtype=np.float64)
    if sample.size < 3 or np.ptp(sample) == 0.0:
        return None
    centered = sample - sample.mean()
    m2 = np.mean(centered ** 2)
    if m2 == 0.0:
        return None
    return float(np.mean(centered ** 3) / m2 ** 1.5)


def query_occurrences(
    documents: Documents,
    query: Query,
    ranked: RankedList,
    tokenizer: TokenizerConfig,
    depth: int = None
) -> List[Tuple[List[int], int]]:
    """(query-term positions, L) of each of the first `depth` ranked documents."""
    depth = EVAL_CONFIG['diagnostic_depth'] if depth is None else depth
    terms = query.term_set
    occurrences = []
    for docno in ranked.docnos()[:depth]:
        document = documents.get(docno)
        if document is None:
            raise CorpusUnavailableError(
                f"Text of document '{docno}' is needed for positional diagnostics."
            )
        stream = tokenize(document, tokenizer)
        positions = [t.position for t in stream.tokens if t.indexable and t.term in terms]
        occurrences.append((positions, stream.length))
    return occurrences


def _relative(positions: Sequence[int], length: int) -> np.ndarray:
    # pulse midpoints
    return (np.asarray(positions, dtype=np.float64) - 0.5) / length


def position_skewness(
    documents: Documents,
    query: Query,
    ranked: RankedList,
    tokenizer: TokenizerConfig = None,
    depth: int = None,
    pooled: bool = None
) -> Optional[float]:
    """
    Skewness of the relative positions of query terms in the top documents.
    Pooled over all occurrences by default; with pooled=False the mean of the
    per-document values that are defined.
    """
    tokenizer = tokenizer or default_tokenizer_config()
    pooled = EVAL_CONFIG['pooled_skewness'] if pooled is None else pooled
    return _skewness_of(query_occurrences(documents, query, ranked, tokenizer, depth), pooled)


def _skewness_of(occurrences: List[Tuple[List[int], int]], pooled: bool) -> Optional[float]:
    if pooled:
        sample = [_relative(p, length) for p, length in occurrences if p]
        return sample_skewness(np.concatenate(sample)) if sample else None

    values = [sample_skewness(_relative(p, length)) for p, length in occurrences]
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


def fitting_rate(
    documents: Documents,
    query: Query,
    ranked: RankedList,
    objective: ObjectiveSpec,
    tokenizer: TokenizerConfig = None,
    depth: int = None
) -> Optional[float]:
    """Share of query-term occurrences in the top documents that lie inside the objective."""
    tokenizer = tokenizer or default_tokenizer_config()
    return _fitting_of(query_occurrences(documents, query, ranked, tokenizer, depth), objective)


def _fitting_of(occurrences: List[Tuple[List[int], int]], objective: ObjectiveSpec) -> Optional[float]:
    inside = total = 0
    for positions, length in occurrences:
        total += len(positions)
        inside += sum(1 for p in positions if in_region(p, objective, length))
    return inside / total if total else None


def report(
    runs: Mapping[str, Mapping[int, RankedList]],
    qrels: QrelSet,
    k: int = None,
    documents: Optional[Documents] = None,
    queries: Optional[Mapping[int, Query]] = None,
    objectives: Optional[Mapping[str, ObjectiveSpec]] = None,
    tokenizer: TokenizerConfig = None,
    depth: int = None,
    min_hits: int = None,
    pooled: bool = None
) -> EvalReport:
    """
    Evaluate every topic that a run and the qrels share. Positional diagnostics
    are computed when documents and queries are given, and only for topics
    with more than `min_hits` retrieved documents.
    """
    k = EVAL_CONFIG['k'] if k is None else k
    depth = EVAL_CONFIG['diagnostic_depth'] if depth is None else depth
    min_hits = EVAL_CONFIG['min_hits'] if min_hits is None else min_hits
    pooled = EVAL_CONFIG['pooled_skewness'] if pooled is None else pooled
    queries = queries or {}
    objectives = objectives or {}
    if documents is not None and tokenizer is None:
        tokenizer = default_tokenizer_config()

    judged = set(qrels.topics())
    rows = []
    for name in sorted(runs):
        topics = sorted(set(runs[name]) & judged)
        unjudged = sorted(set(runs[name]) - judged)
        if unjudged:
            logger.warning("run %s: topics without judgments skipped: %s", name, unjudged)
        if not topics:
            raise InvalidArgumentError(f"Run '{name}' shares no topic with the relevance judgments.")

        objective = objectives.get(name)
        for topic in topics:
            ranked = runs[name][topic]
            diagnostics = {}
            if documents is not None and topic in queries and len(ranked) > min_hits:
                query = queries[topic]
                occurrences = query_occurrences(documents, query, ranked, tokenizer, depth)
                diagnostics = {
                    'diagnosed': True,
                    'objective': format_objective(objective) if objective else None,
                    'occurrences': sum(len(p) for p, _ in occurrences),
                    'skewness': _skewness_of(occurrences, pooled),
                    'fitting_rate': _fitting_of(occurrences, objective) if objective else None
                }
            rows.append(TopicMetrics(
                run=name,
                topic=topic,
                hits=len(ranked),
                k=k,
                **trec_measures(ranked, qrels, topic, k),
                **diagnostics
            ))

    metadata = {'k': str(k), 'depth': str(depth), 'min_hits': str(min_hits), 'pooled': str(pooled).lower()}
    return EvalReport(rows, metadata)


def _fmt(value: Optional[float]) -> str:
    return 'NA' if value is None else f"{value:.6f}"


def write_metrics_csv(report_: EvalReport, stream: TextIO):
    """One row per (run, topic) plus an `all` row of means per run."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(METRICS_COLUMNS)
    for run in report_.runs():
        rows = sorted(report_.for_run(run), key=lambda row: row.topic)
        for row in rows:
            writer.writerow([
                run, row.topic, row.hits, row.k,
                _fmt(row.precision_at_k), _fmt(row.average_precision), _fmt(row.r_precision)
            ])
        writer.writerow([
            run, 'all', sum(row.hits for row in rows), rows[0].k if rows else '',
            _fmt(report_.mean(run, 'precision_at_k')),
            _fmt(report_.mean(run, 'average_precision')),
            _fmt(report_.mean(run, 'r_precision'))
        ])


def write_diagnostics_csv(report_: EvalReport, stream: TextIO):
    """Positional diagnostics of the topics that passed the hit filter; NA when undefined."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(DIAGNOSTICS_COLUMNS)
    for row in sorted(report_.rows, key=lambda r: (r.run, r.topic)):
        if not row.diagnosed:
            continue
        writer.writerow([
            row.run, row.topic, row.objective or 'NA', row.occurrences,
            _fmt(row.skewness), _fmt(row.fitting_rate)
        ])
