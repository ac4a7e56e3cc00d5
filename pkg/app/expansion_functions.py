"""
Expansion Functions Implementation
Spectral pseudo-relevance feedback: terms whose in-document distributions
overlap the query's distribution in the top-ranked documents are added to
the query.
"""

import logging
import math
from typing import FrozenSet, List, TextIO, Tuple

import numpy as np

from app.index_functions import doc_vectors
from app.retrieval_functions import query_coefficients, resolve_doc, tfidf_search
from app.spectral_functions import cosine_many
from config import EXPANSION_CONFIG, RETRIEVAL_CONFIG
from errors import InvalidArgumentError
from models import ExpansionCandidates, Index, Query, RankedList

logger = logging.getLogger(__name__)

AGGREGATORS = ('sum', 'max', 'mean')
WEIGHTINGS = ('unit', 'similarity')


def candidate_terms(
    index: Index,
    query: Query,
    top_docs: RankedList,
    r: int = None,
    k: int = None,
    aggregator: str = None,
    min_df: int = None,
    stopwords: FrozenSet[str] = frozenset()
) -> ExpansionCandidates:
    """
    For each of the first r documents, score every other term of the document
    by the (non-negative) cosine between its distribution and the query's, then
    aggregate per term across documents and keep the k best.
    Documents without any query term contribute nothing.
    """
    r = EXPANSION_CONFIG['r'] if r is None else r
    k = EXPANSION_CONFIG['k'] if k is None else k
    aggregator = aggregator or EXPANSION_CONFIG['aggregator']
    min_df = EXPANSION_CONFIG['min_df'] if min_df is None else min_df

    # Edge case: Validate parameters
    if r < 1 or k < 1:
        raise InvalidArgumentError(f"r and k must be at least 1, got r={r}, k={k}.")
    if aggregator not in AGGREGATORS:
        raise InvalidArgumentError(f"Unknown aggregator '{aggregator}' (expected one of {', '.join(AGGREGATORS)}).")

    excluded = query.term_set | frozenset(stopwords)
    totals = {}
    counts = {}

    for entry in top_docs.entries[:r]:
        doc = resolve_doc(index, entry)
        q = query_coefficients(index, query, doc)
        if not np.any(q):
            continue
        terms, matrix = doc_vectors(index, doc)
        sims = np.maximum(cosine_many(matrix, q), 0.0)
        for term, sim in zip(terms, sims.tolist()):
            if term in excluded or index.df(term) < min_df:
                continue
            if aggregator == 'max':
                totals[term] = max(totals.get(term, 0.0), sim)
            else:
                totals[term] = totals.get(term, 0.0) + sim
            counts[term] = counts.get(term, 0) + 1

    if aggregator == 'mean':
        totals = {term: total / counts[term] for term, total in totals.items()}

    ranked = sorted(
        ((term, score) for term, score in totals.items() if score > 0.0),
        key=lambda item: (-item[1], item[0])
    )
    logger.debug("expansion scanned %d documents, %d candidate terms", min(r, len(top_docs)), len(ranked))
    return ExpansionCandidates(tuple(ranked[:k]), r, k)


def expand_query(
    query: Query,
    candidates: ExpansionCandidates,
    mode: str = None,
    w0: float = None
) -> Query:
    """
    q_e = {w0 * original terms} + {w_i * candidate terms}; w_i = 1 in unit mode,
    A_i / max A in similarity mode. No candidates leaves the query unchanged.
    """
    mode = mode or EXPANSION_CONFIG['weighting']
    w0 = EXPANSION_CONFIG['w0'] if w0 is None else w0

    # Edge case: Validate weights
    if not math.isfinite(w0) or w0 <= 0:
        raise InvalidArgumentError(f"w0 must be positive, got {w0}.")
    if mode not in WEIGHTINGS:
        raise InvalidArgumentError(f"Unknown weighting mode '{mode}' (expected unit or similarity).")

    if len(candidates) == 0:
        return query

    top = max(score for _, score in candidates)
    added = [
        (term, 1.0 if mode == 'unit' else score / top)
        for term, score in candidates
    ]
    return Query(tuple((term, weight * w0) for term, weight in query) + tuple(added))


def run_expansion_pipeline(
    index: Index,
    query: Query,
    r: int = None,
    k: int = None,
    mode: str = None,
    top_n: int = None,
    w0: float = None,
    aggregator: str = None,
    min_df: int = None
) -> Tuple[RankedList, Query, ExpansionCandidates]:
    """
    Step 1: baseline tf-idf search. Step 2: harvest candidates from the top r
    documents and expand the query. Step 3: tf-idf search with the expanded query.
    """
    r = EXPANSION_CONFIG['r'] if r is None else r
    k = EXPANSION_CONFIG['k'] if k is None else k
    top_n = RETRIEVAL_CONFIG['top_n'] if top_n is None else top_n
    if k < 0:
        raise InvalidArgumentError(f"k must be non-negative, got {k}.")

    baseline = tfidf_search(index, query, top_n)
    if k == 0:
        return baseline, query, ExpansionCandidates((), r, 0)

    candidates = candidate_terms(index, query, baseline, r, k, aggregator, min_df)
    expanded = expand_query(query, candidates, mode, w0)
    if expanded is query:
        return baseline, query, candidates
    return tfidf_search(index, expanded, top_n), expanded, candidates


def expanded_search(
    index: Index,
    query: Query,
    r: int = None,
    k: int = None,
    mode: str = None,
    top_n: int = None,
    **options
) -> RankedList:
    """Final ranking of the three-step expansion pipeline."""
    return run_expansion_pipeline(index, query, r, k, mode, top_n, **options)[0]


def term_neighborhood(index: Index, docno: str, term: str) -> List[Tuple[str, float]]:
    """
    Cosine between `term` and every other term of one document, closest first.
    Neighbouring terms score near 1, terms far away near or below 0.
    """
    doc = index.ordinal(docno)
    if doc is None:
        raise InvalidArgumentError(f"Document '{docno}' is not in the index.")
    vector = index.vector(term, doc)
    if vector is None:
        raise InvalidArgumentError(f"Term '{term}' does not occur in document '{docno}'.")

    terms, matrix = doc_vectors(index, doc)
    sims = cosine_many(matrix, vector)
    pairs = [(t, float(s)) for t, s in zip(terms, sims) if t != term]
    return sorted(pairs, key=lambda item: (-item[1], item[0]))


def export_candidates(candidates: ExpansionCandidates, stream: TextIO):
    for term, score in candidates:
        stream.write(f"{term}\t{score:.6f}\n")
