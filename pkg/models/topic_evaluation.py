"""
TopicEvaluation Entity Model
Maps to the TopicEvaluation table in the experiment store
"""

from sqlalchemy import Column, Integer, String, Float, ForeignKey
from sqlalchemy.orm import relationship
from database import Base


class TopicEvaluation(Base):
    """
    Metrics and positional diagnostics of one topic in one run.
    Undefined diagnostics are stored as NULL.

    Relationships:
    - Many-to-One with Run
    """
    __tablename__ = 'TopicEvaluation'

    # Primary Key
    EvaluationID = Column(Integer, primary_key=True, autoincrement=True)

    # Foreign Key
    RunID = Column(Integer, ForeignKey('Run.RunID', ondelete='CASCADE'), nullable=False)

    # Attributes
    TopicID = Column(Integer, nullable=False)
    Hits = Column(Integer, nullable=False)
    K = Column(Integer, nullable=False)
    PrecisionAtK = Column(Float, nullable=False)
    AveragePrecision = Column(Float, nullable=False)
    RPrecision = Column(Float, nullable=False)
    Objective = Column(String(100))
    Occurrences = Column(Integer, default=0)
    Skewness = Column(Float)
    FittingRate = Column(Float)

    # Relationships
    run = relationship("Run", back_populates="evaluations")

    def __repr__(self):
        return f"<TopicEvaluation(RunID={self.RunID}, TopicID={self.TopicID}, P@{self.K}={self.PrecisionAtK})>"
