"""
Qrel Entity Model
Maps to the Qrel table in the experiment store
"""

from sqlalchemy import Column, Integer, String, ForeignKey, UniqueConstraint
from sqlalchemy.orm import relationship
from database import Base


class Qrel(Base):
    """
    One relevance judgment. Grade > 0 means relevant.

    Relationships:
    - Many-to-One with Topic
    """
    __tablename__ = 'Qrel'
    __table_args__ = (UniqueConstraint('TopicID', 'DocNo', name='uq_qrel_topic_docno'),)

    # Primary Key
    QrelID = Column(Integer, primary_key=True, autoincrement=True)

    # Foreign Key
    TopicID = Column(Integer, ForeignKey('Topic.TopicID', ondelete='CASCADE'), nullable=False)

    # Attributes
    DocNo = Column(String(100), nullable=False)
    Grade = Column(Integer, nullable=False, default=0)

    # Relationships
    topic = relationship("Topic", back_populates="qrels", lazy="joined")

    def __repr__(self):
        return f"<Qrel(TopicID={self.TopicID}, DocNo='{self.DocNo}', Grade={self.Grade})>"
