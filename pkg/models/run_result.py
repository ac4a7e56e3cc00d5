"""
RunResult Entity Model
Maps to the RunResult table in the experiment store
"""

from sqlalchemy import Column, Integer, String, Float, ForeignKey
from sqlalchemy.orm import relationship
from database import Base


class RunResult(Base):
    """
    One ranked result line of a run (TREC run format row).

    Relationships:
    - Many-to-One with Run
    """
    __tablename__ = 'RunResult'

    # Primary Key
    ResultID = Column(Integer, primary_key=True, autoincrement=True)

    # Foreign Key
    RunID = Column(Integer, ForeignKey('Run.RunID', ondelete='CASCADE'), nullable=False)

    # Attributes
    TopicID = Column(Integer, nullable=False)
    DocNo = Column(String(100), nullable=False)
    Rank = Column(Integer, nullable=False)
    Score = Column(Float, nullable=False)

    # Relationships
    run = relationship("Run", back_populates="results")

    def __repr__(self):
        return f"<RunResult(RunID={self.RunID}, TopicID={self.TopicID}, Rank={self.Rank}, DocNo='{self.DocNo}')>"
