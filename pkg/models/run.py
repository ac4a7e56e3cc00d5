"""
Run Entity Model
Maps to the Run table in the experiment store
"""

from sqlalchemy import Column, Integer, String, Text, DateTime
from sqlalchemy.orm import relationship
from database import Base


class Run(Base):
    """
    Run entity: one retrieval run (search, rerank or expand) with its config header.

    Relationships:
    - One-to-Many with RunResult
    - One-to-Many with TopicEvaluation
    """
    __tablename__ = 'Run'

    # Primary Key
    RunID = Column(Integer, primary_key=True, autoincrement=True)

    # Attributes
    Name = Column(String(100), unique=True, nullable=False)
    Subcommand = Column(String(20), nullable=False)
    ConfigJSON = Column(Text, nullable=False)
    Fingerprint = Column(String(64), nullable=False)
    CreatedAt = Column(DateTime)

    # Relationships
    results = relationship(
        "RunResult",
        back_populates="run",
        cascade="all, delete-orphan",
        order_by="RunResult.ResultID",
        lazy="select"
    )
    evaluations = relationship(
        "TopicEvaluation",
        back_populates="run",
        cascade="all, delete-orphan",
        lazy="select"
    )

    def __repr__(self):
        return f"<Run(RunID={self.RunID}, Name='{self.Name}', Subcommand='{self.Subcommand}')>"
