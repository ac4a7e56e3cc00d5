"""
Advanced SQL Features
Views and secondary indexes over the experiment store
"""

from sqlalchemy import text, Index
from database import engine
from models import RunResult, TopicEvaluation, Qrel


# Secondary indexes, bound to their tables at import
SECONDARY_INDEXES = [
    Index('idx_result_run_topic_rank', RunResult.RunID, RunResult.TopicID, RunResult.Rank),
    Index('idx_evaluation_run_topic', TopicEvaluation.RunID, TopicEvaluation.TopicID),
    Index('idx_qrel_docno', Qrel.DocNo)
]


RUN_SUMMARY_SELECT = """
    SELECT
        r."RunID" AS RunID,
        r."Name" AS RunName,
        r."Subcommand" AS Subcommand,
        COUNT(e."EvaluationID") AS TopicCount,
        AVG(e."PrecisionAtK") AS MeanPrecisionAtK,
        AVG(e."AveragePrecision") AS MeanAveragePrecision,
        AVG(e."RPrecision") AS MeanRPrecision,
        AVG(e."Skewness") AS MeanSkewness,
        AVG(e."FittingRate") AS MeanFittingRate
    FROM "Run" r
    LEFT JOIN "TopicEvaluation" e ON e."RunID" = r."RunID"
    GROUP BY r."RunID", r."Name", r."Subcommand"
"""


def create_views(bind=None, quiet=False):
    """
    Create database views using raw SQL (views are not directly supported in SQLAlchemy ORM).
    RunSummaryView averages the per-topic evaluation records of every run.
    """
    bind = bind or engine
    if bind.dialect.name == 'postgresql':
        statement = f"CREATE OR REPLACE VIEW RunSummaryView AS {RUN_SUMMARY_SELECT}"
    else:
        statement = f"CREATE VIEW IF NOT EXISTS RunSummaryView AS {RUN_SUMMARY_SELECT}"

    with bind.connect() as conn:
        conn.execute(text(statement))
        conn.commit()
    if not quiet:
        print("[OK] Created RunSummaryView")


def create_indexes(bind=None, quiet=False):
    """
    Create indexes for the lookups the pipeline performs.
    Using SQLAlchemy Index objects.
    """
    bind = bind or engine
    for idx in SECONDARY_INDEXES:
        idx.create(bind, checkfirst=True)

    if not quiet:
        print("[OK] Created all indexes")


def setup_advanced_features(bind=None, quiet=False):
    """Setup all advanced SQL features"""
    create_views(bind, quiet=quiet)
    create_indexes(bind, quiet=quiet)


if __name__ == "__main__":
    setup_advanced_features()
