"""
Database Configuration and Setup
Handles the experiment store connection, session management, and table creation
"""

import os

from sqlalchemy import create_engine, text
from sqlalchemy.orm import sessionmaker, declarative_base
from sqlalchemy.pool import StaticPool

# Database configuration - global variables (used when FVS_DB_BACKEND=postgresql)
DB_CONFIG = {
    'host': os.environ.get('FVS_DB_HOST', 'localhost'),
    'port': int(os.environ.get('FVS_DB_PORT', 5432)),
    'database': os.environ.get('FVS_DB_NAME', 'fvsdb'),
    'username': os.environ.get('FVS_DB_USER', 'postgres'),
    'password': os.environ.get('FVS_DB_PASSWORD', 'postgres')
}


def build_database_url():
    """Resolve the store URL: explicit URL, PostgreSQL from DB_CONFIG, or local SQLite."""
    explicit = os.environ.get('FVS_DATABASE_URL')
    if explicit:
        return explicit
    if os.environ.get('FVS_DB_BACKEND', 'sqlite') == 'postgresql':
        return (
            f"postgresql://{DB_CONFIG['username']}:{DB_CONFIG['password']}"
            f"@{DB_CONFIG['host']}:{DB_CONFIG['port']}/{DB_CONFIG['database']}"
        )
    return "sqlite:///fvs_experiments.db"


DATABASE_URL = build_database_url()


def make_engine(url):
    """Create an engine; pool sizing only applies to server backends."""
    if url in ("sqlite://", "sqlite:///:memory:"):
        # one shared connection, otherwise every checkout sees an empty database
        return create_engine(url, echo=False, poolclass=StaticPool, connect_args={"check_same_thread": False})
    if url.startswith("sqlite"):
        return create_engine(url, echo=False)
    return create_engine(
        url,
        echo=False,
        pool_pre_ping=True,
        pool_size=10,
        max_overflow=20
    )


# Create engine
engine = make_engine(DATABASE_URL)

# Create SessionLocal class
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

# Base class for declarative models
Base = declarative_base()


def get_db():
    """
    Dependency function to get a store session.
    Closes the session when the caller is done.
    """
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


def create_tables(bind=None, quiet=False):
    """
    Create all experiment-store tables, then the views and indexes.
    Safe to call repeatedly.
    """
    bind = bind or engine

    # Import all models to ensure they're registered with Base
    from models import (  # noqa: F401
        CorpusDocument, Topic, Qrel, Run, RunResult, TopicEvaluation
    )

    Base.metadata.create_all(bind=bind)
    if not quiet:
        print("[OK] All tables created successfully!")

    from database_advanced import setup_advanced_features
    setup_advanced_features(bind, quiet=quiet)


def drop_tables(bind=None):
    """
    Drop all experiment-store tables.
    Use with caution!
    """
    bind = bind or engine

    # Drop views first (they depend on tables)
    with bind.connect() as conn:
        conn.execute(text("DROP VIEW IF EXISTS RunSummaryView"))
        conn.commit()

    Base.metadata.drop_all(bind=bind)
    print("[OK] All tables dropped!")


def init_db():
    """Initialize the experiment store."""
    create_tables()


if __name__ == "__main__":
    print(f"Creating experiment store tables at {DATABASE_URL} ...")
    init_db()
