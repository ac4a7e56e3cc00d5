"""
Experiment Store Functions Implementation
Persist corpus texts, topics, qrels, runs and evaluations in the relational store.
"""

import json
from datetime import datetime
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sqlalchemy import text
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import Session

from models import (
    CorpusDocument, EvalReport, Qrel, QrelSet, RankedEntry, RankedList, RawDocument, Run, RunResult, Topic,
    TopicEvaluation
)

SUBCOMMANDS = ['search', 'rerank', 'expand']
LOOKUP_CHUNK = 500


def _documents_by_docno(db: Session, docnos: Sequence[str]) -> Dict[str, CorpusDocument]:
    rows = {}
    for start in range(0, len(docnos), LOOKUP_CHUNK):
        chunk = list(docnos[start:start + LOOKUP_CHUNK])
        for row in db.query(CorpusDocument).filter(CorpusDocument.DocNo.in_(chunk)):
            rows[row.DocNo] = row
    return rows


def store_documents(db: Session, documents: Iterable[RawDocument], source: Optional[str] = None) -> int:
    """
    Document Texts - Store or refresh
    Insert unseen docnos and update texts that changed.

    Returns: number of rows inserted or updated
    Raises: ValueError on database failure
    """
    documents = list(documents)
    existing = _documents_by_docno(db, [d.docno for d in documents])

    changed = 0
    try:
        for document in documents:
            row = existing.get(document.docno)
            if row is None:
                row = CorpusDocument(DocNo=document.docno, Body=document.text, SourcePath=source)
                db.add(row)
                existing[document.docno] = row
                changed += 1
            elif row.Body != document.text:
                row.Body = document.text
                row.SourcePath = source
                changed += 1
        db.commit()
        return changed

    except Exception as e:
        db.rollback()
        raise ValueError(f"Storing documents failed: {str(e)}") from e


def fetch_documents(db: Session, docnos: Optional[Sequence[str]] = None) -> Dict[str, RawDocument]:
    """Stored texts as docno -> RawDocument (all documents when docnos is None)."""
    if docnos is None:
        rows = db.query(CorpusDocument).all()
    else:
        rows = _documents_by_docno(db, list(docnos)).values()
    return {row.DocNo: RawDocument(row.DocNo, row.Body) for row in rows}


def store_topics(db: Session, topics: Iterable[Topic]) -> List[Topic]:
    """
    Topics - Insert or retitle
    Parsed (transient) topics are merged by topic number.
    """
    stored = []
    try:
        for topic in topics:
            # Edge case: Validate topic number and title
            if not isinstance(topic.TopicID, int) or topic.TopicID <= 0:
                raise ValueError(f"Topic number must be a positive integer, got {topic.TopicID!r}.")
            if not topic.Title or not topic.Title.strip():
                raise ValueError(f"Topic {topic.TopicID} needs a title.")

            row = db.get(Topic, topic.TopicID)
            if row is None:
                row = Topic(TopicID=topic.TopicID, Title=topic.Title.strip())
                db.add(row)
            else:
                row.Title = topic.Title.strip()
            stored.append(row)
        db.commit()
        return stored

    except ValueError:
        db.rollback()
        raise
    except Exception as e:
        db.rollback()
        raise ValueError(f"Storing topics failed: {str(e)}") from e


def store_qrels(db: Session, qrels: QrelSet) -> int:
    """
    Relevance Judgments - Replace per topic
    Judgments of every topic present in `qrels` replace the stored ones.
    Topics not yet stored get a placeholder title.
    """
    try:
        for topic_id in qrels.topics():
            if db.get(Topic, topic_id) is None:
                db.add(Topic(TopicID=topic_id, Title=f"topic {topic_id}"))
            db.query(Qrel).filter(Qrel.TopicID == topic_id).delete(synchronize_session=False)
        db.flush()

        for topic_id, docno, grade in qrels:
            db.add(Qrel(TopicID=topic_id, DocNo=docno, Grade=grade))
        db.commit()
        return len(qrels)

    except IntegrityError as e:
        db.rollback()
        raise ValueError("Duplicate judgment in relevance set.") from e
    except Exception as e:
        db.rollback()
        raise ValueError(f"Storing qrels failed: {str(e)}") from e


def load_qrels(db: Session) -> QrelSet:
    qrels = QrelSet()
    for row in db.query(Qrel).order_by(Qrel.TopicID, Qrel.DocNo):
        qrels.add(row.TopicID, row.DocNo, row.Grade)
    return qrels


def record_run(
    db: Session,
    name: str,
    subcommand: str,
    header: dict,
    results: Iterable[Tuple[int, RankedList]]
) -> Run:
    """
    Run Recording - Store a run with its ranked results
    Recording under an existing name replaces the earlier run.
    """
    # Edge case: Validate name and subcommand
    if not name or not name.strip():
        raise ValueError("Run name is required and cannot be empty.")
    if len(name) > 100:
        raise ValueError("Run name cannot exceed 100 characters.")
    if subcommand not in SUBCOMMANDS:
        raise ValueError(f"Subcommand must be one of: {SUBCOMMANDS}")

    try:
        previous = db.query(Run).filter(Run.Name == name.strip()).first()
        if previous is not None:
            db.delete(previous)
            db.flush()

        run = Run(
            Name=name.strip(),
            Subcommand=subcommand,
            ConfigJSON=json.dumps(header, sort_keys=True),
            Fingerprint=header.get('config_fingerprint', ''),
            CreatedAt=datetime.now()
        )
        for topic, ranked in results:
            for rank, entry in enumerate(ranked, start=1):
                run.results.append(RunResult(TopicID=topic, DocNo=entry.docno, Rank=rank, Score=entry.score))

        db.add(run)
        db.commit()
        db.refresh(run)
        return run

    except Exception as e:
        db.rollback()
        raise ValueError(f"Recording run '{name}' failed: {str(e)}") from e


def record_evaluation(db: Session, report: EvalReport) -> List[TopicEvaluation]:
    """
    Evaluation Recording - Attach per-topic metrics to stored runs
    Earlier evaluations of the same runs are replaced.
    """
    runs = {}
    for name in report.runs():
        run = db.query(Run).filter(Run.Name == name).first()
        # Edge case: Check run exists
        if run is None:
            raise ValueError(f"Run '{name}' is not in the experiment store.")
        runs[name] = run

    try:
        rows = []
        for name, run in runs.items():
            db.query(TopicEvaluation).filter(TopicEvaluation.RunID == run.RunID).delete(synchronize_session=False)
            for metrics in report.for_run(name):
                row = TopicEvaluation(
                    RunID=run.RunID,
                    TopicID=metrics.topic,
                    Hits=metrics.hits,
                    K=metrics.k,
                    PrecisionAtK=metrics.precision_at_k,
                    AveragePrecision=metrics.average_precision,
                    RPrecision=metrics.r_precision,
                    Objective=metrics.objective,
                    Occurrences=metrics.occurrences,
                    Skewness=metrics.skewness,
                    FittingRate=metrics.fitting_rate
                )
                db.add(row)
                rows.append(row)
        db.commit()
        return rows

    except Exception as e:
        db.rollback()
        raise ValueError(f"Recording evaluation failed: {str(e)}") from e


def load_run(db: Session, name: str) -> Tuple[dict, Dict[int, RankedList]]:
    """Header and topic -> RankedList of a stored run."""
    run = db.query(Run).filter(Run.Name == name).first()
    if run is None:
        raise ValueError(f"Run '{name}' is not in the experiment store.")
    topics: Dict[int, list] = {}
    for row in sorted(run.results, key=lambda r: (r.TopicID, r.Rank)):
        topics.setdefault(row.TopicID, []).append(RankedEntry(row.DocNo, row.Score, row.Score))
    return json.loads(run.ConfigJSON), {t: RankedList(tuple(e)) for t, e in topics.items()}


def run_summary(db: Session) -> List[dict]:
    """Mean metrics per run from RunSummaryView, ordered by run name."""
    rows = db.execute(text(
        "SELECT RunName, Subcommand, TopicCount, MeanPrecisionAtK, MeanAveragePrecision, "
        "MeanRPrecision, MeanSkewness, MeanFittingRate FROM RunSummaryView ORDER BY RunName"
    ))
    keys = [
        'run', 'subcommand', 'topics', 'p_at_k', 'average_precision',
        'r_precision', 'skewness', 'fitting_rate'
    ]
    return [dict(zip(keys, row)) for row in rows]
