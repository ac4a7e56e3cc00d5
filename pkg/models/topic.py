"""
Topic Entity Model
Maps to the Topic table in the experiment store
"""

from sqlalchemy import Column, Integer, String
from sqlalchemy.orm import relationship
from database import Base


class Topic(Base):
    """
    Topic entity: a numbered information need with its title query.
    Parsers return transient Topic instances; the store persists them.

    Relationships:
    - One-to-Many with Qrel
    """
    __tablename__ = 'Topic'

    # Primary Key (the external topic number)
    TopicID = Column(Integer, primary_key=True, autoincrement=False)

    # Attributes
    Title = Column(String(500), nullable=False)

    # Relationships
    qrels = relationship(
        "Qrel",
        back_populates="topic",
        cascade="all, delete-orphan",
        lazy="select"
    )

    @property
    def id(self):
        return self.TopicID

    @property
    def title(self):
        return self.Title

    def __repr__(self):
        return f"<Topic(TopicID={self.TopicID}, Title='{self.Title}')>"
