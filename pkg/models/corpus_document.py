"""
CorpusDocument Entity Model
Maps to the CorpusDocument table in the experiment store
"""

from sqlalchemy import Column, Integer, String, Text
from database import Base


class CorpusDocument(Base):
    """
    Stored text of one corpus document.
    Positional diagnostics re-tokenize these texts because the index keeps no positions.
    """
    __tablename__ = 'CorpusDocument'

    # Primary Key
    DocumentID = Column(Integer, primary_key=True, autoincrement=True)

    # Attributes
    DocNo = Column(String(100), unique=True, nullable=False)
    Body = Column(Text, nullable=False)
    SourcePath = Column(String(500))

    def __repr__(self):
        return f"<CorpusDocument(DocumentID={self.DocumentID}, DocNo='{self.DocNo}')>"
