"""
Retrieval Functions Implementation
Baseline tf-idf search, query spectra and objective-function re-ranking,
plus TREC run-file input/output.
"""

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np

from app.objective_functions import format_objective, objective_spectral
from config import RETRIEVAL_CONFIG
from errors import InvalidArgumentError, RunFileParseError
from models import Index, ObjectiveSpec, Query, RankedEntry, RankedList, SpectralVector

logger = logging.getLogger(__name__)

RUN_HEADER_PREFIX = '# fvs-run '

Scorer = Callable[[np.ndarray, int, int], np.ndarray]


def tfidf_weight(tf: np.ndarray, df: int, num_docs: int) -> np.ndarray:
    """(1 + ln tf) * ln(1 + N / df), element-wise over tf."""
    return (1.0 + np.log(tf)) * math.log(1.0 + num_docs / df)


def _validate_top_n(top_n: int):
    if not isinstance(top_n, int) or top_n < 1:
        raise InvalidArgumentError(f"topN must be a positive integer, got {top_n!r}.")


def tfidf_search(
    index: Index,
    query: Query,
    top_n: int = None,
    scorer: Scorer = tfidf_weight
) -> RankedList:
    """
    Score every document containing at least one query term:
    score(d) = sum over query terms of weight * scorer(tf, df, N).
    Documents scoring 0 are dropped; ties go to the smaller docno.
    """
    top_n = RETRIEVAL_CONFIG['top_n'] if top_n is None else top_n
    _validate_top_n(top_n)

    scores = np.zeros(index.num_docs)
    touched = np.zeros(index.num_docs, dtype=bool)
    for term, weight in query:
        plist = index.posting_list(term)
        if plist is None:
            continue
        lengths = index.doc_lengths[plist.docs]
        tf = np.rint(plist.coeffs[:, 0] * np.sqrt(lengths))
        scores[plist.docs] += weight * scorer(tf, plist.df, index.num_docs)
        touched[plist.docs] = True

    hits = np.flatnonzero(touched & (scores > 0))
    entries = [
        RankedEntry(index.docs[i].docno, float(scores[i]), float(scores[i]), int(i))
        for i in hits.tolist()
    ]
    return RankedList.from_entries(entries, top_n)


def query_coefficients(index: Index, query: Query, doc: int) -> np.ndarray:
    """Flat weighted sum of the query terms' coefficient rows in one document."""
    coeffs = np.zeros(2 * index.order + 1)
    for term, weight in query:
        plist = index.posting_list(term)
        if plist is None:
            continue
        row = plist.find(doc)
        if row is not None:
            coeffs += weight * plist.coeffs[row]
    return coeffs


def resolve_doc(index: Index, entry: RankedEntry) -> int:
    if entry.doc is not None:
        return entry.doc
    doc = index.ordinal(entry.docno)
    if doc is None:
        raise InvalidArgumentError(f"Document '{entry.docno}' is not in the index.")
    return doc


def query_spectral(index: Index, query: Query, doc: int) -> SpectralVector:
    """
    Distribution of the whole query in one document: the weighted sum of the
    posting vectors of the query terms it contains (zero vector if none).
    """
    # Edge case: Validate document ordinal
    if not 0 <= doc < index.num_docs:
        raise InvalidArgumentError(f"Document ordinal {doc} is out of range.")
    length = index.docs[doc].length
    if length == 0:
        raise InvalidArgumentError(f"Document '{index.docs[doc].docno}' has no tokens.")
    return SpectralVector(index.order, query_coefficients(index, query, doc), length)


def _objective_table(index: Index, objective: ObjectiveSpec, lengths: Iterable[int]) -> Dict[int, np.ndarray]:
    return {
        length: objective_spectral(objective, length, index.order).coeffs
        for length in sorted(set(lengths))
    }


def _rerank_scores(index, query, docs, objectives) -> List[float]:
    scores = []
    for doc in docs:
        q = query_coefficients(index, query, doc)
        o = objectives[index.docs[doc].length]
        nq = np.linalg.norm(q)
        if nq == 0.0:
            scores.append(0.0)
            continue
        cosine = float(np.dot(q, o) / (nq * np.linalg.norm(o)))
        scores.append(min(max(cosine, 0.0), 1.0))
    return scores


def fvs_rerank(
    index: Index,
    query: Query,
    objective: ObjectiveSpec,
    candidates: RankedList,
    top_n: int = None,
    depth: int = None,
    threads: int = 1
) -> RankedList:
    """
    Re-score the first `depth` candidates by the cosine between the query
    distribution and the objective function built for each document's length
    at the index order. Negative cosines clamp to 0; the baseline score of a
    candidate breaks ties.
    """
    top_n = RETRIEVAL_CONFIG['top_n'] if top_n is None else top_n
    depth = RETRIEVAL_CONFIG['rerank_depth'] if depth is None else depth
    _validate_top_n(top_n)
    if depth < 1 or threads < 1:
        raise InvalidArgumentError("Re-rank depth and thread count must be at least 1.")

    pool_entries = list(candidates.entries[:depth])
    if not pool_entries:
        return RankedList()

    docs = [resolve_doc(index, entry) for entry in pool_entries]
    objectives = _objective_table(index, objective, (index.docs[d].length for d in docs))

    if threads > 1 and len(docs) > 1:
        size = math.ceil(len(docs) / threads)
        chunks = [docs[i:i + size] for i in range(0, len(docs), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(lambda chunk: _rerank_scores(index, query, chunk, objectives), chunks)
            scores = [score for part in parts for score in part]
    else:
        scores = _rerank_scores(index, query, docs, objectives)

    entries = [
        RankedEntry(entry.docno, score, entry.score, doc)
        for entry, doc, score in zip(pool_entries, docs, scores)
    ]
    logger.debug("re-ranked %d candidates under %s", len(entries), format_objective(objective))
    return RankedList.from_entries(entries, top_n)


def run_fingerprint(params: dict) -> str:
    """Stable 16-hex-digit digest of a parameter mapping."""
    encoded = json.dumps(params, sort_keys=True, separators=(',', ':')).encode('utf-8')
    return hashlib.sha256(encoded).hexdigest()[:16]


def run_header(subcommand: str, params: dict, index: Optional[Index] = None) -> dict:
    """Machine-readable run metadata: subcommand, parameters and fingerprints."""
    header = {
        'subcommand': subcommand,
        'params': params,
        'config_fingerprint': run_fingerprint({'subcommand': subcommand, **params})
    }
    if index is not None:
        header['index_fingerprint'] = f"{index.fingerprint:016x}"
        header['order'] = index.order
    return header


def write_run(
    stream: TextIO,
    results: Iterable[Tuple[int, RankedList]],
    tag: str = None,
    header: Optional[dict] = None
):
    """TREC run lines `topic Q0 docno rank score tag`, topics in the given order."""
    tag = tag or RETRIEVAL_CONFIG['run_tag']
    if any(c.isspace() for c in tag):
        raise InvalidArgumentError(f"Run tag '{tag}' cannot contain whitespace.")
    if header is not None:
        stream.write(RUN_HEADER_PREFIX + json.dumps(header, sort_keys=True) + '\n')
    for topic, ranked in results:
        for rank, entry in enumerate(ranked, start=1):
            stream.write(f"{topic} Q0 {entry.docno} {rank} {entry.score:.6f} {tag}\n")


def read_run(stream: TextIO) -> Tuple[Optional[dict], Dict[int, RankedList]]:
    """
    Parse a TREC run. Returns the header (if present) and topic -> RankedList in
    file rank order. Other '#' lines are comments.
    """
    header = None
    entries: Dict[int, List[Tuple[int, RankedEntry]]] = {}
    seen = set()

    for line_no, line in enumerate(stream, start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith('#'):
            if line.startswith(RUN_HEADER_PREFIX):
                try:
                    header = json.loads(line[len(RUN_HEADER_PREFIX):])
                except json.JSONDecodeError as e:
                    raise RunFileParseError(f"unreadable run header ({e.msg})", line=line_no) from None
            continue

        fields = text.split()
        if len(fields) != 6:
            raise RunFileParseError(f"expected 6 fields, found {len(fields)}", line=line_no)
        topic, _, docno, rank, score, _ = fields
        try:
            topic_id, rank_value, score_value = int(topic), int(rank), float(score)
        except ValueError:
            raise RunFileParseError(f"bad topic, rank or score in '{text}'", line=line_no) from None
        if (topic_id, docno) in seen:
            raise RunFileParseError(f"document {docno} listed twice for topic {topic_id}", line=line_no)
        seen.add((topic_id, docno))
        entries.setdefault(topic_id, []).append((rank_value, RankedEntry(docno, score_value, score_value)))

    runs = {
        topic: RankedList(tuple(entry for _, entry in sorted(items, key=lambda item: item[0])))
        for topic, items in sorted(entries.items())
    }
    return header, runs
