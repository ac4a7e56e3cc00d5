# Models package initialization
# Experiment-store entities (ORM) and in-memory domain types

from .corpus_document import CorpusDocument
from .topic import Topic
from .qrel import Qrel
from .run import Run
from .run_result import RunResult
from .topic_evaluation import TopicEvaluation

from .spectral_vector import TermPositions, SpectralVector
from .objective_spec import ObjectiveSpec
from .token_stream import RawDocument, TokenizerConfig, Token, TokenStream
from .inverted_index import DocEntry, Posting, PostingList, Index
from .ranked_list import Query, RankedEntry, RankedList
from .qrel_set import QrelSet
from .expansion_candidates import ExpansionCandidates
from .eval_report import TopicMetrics, EvalReport
from .synth_spec import PlantRule, DocGroup, SynthSpec, SyntheticCorpus

__all__ = [
    # Experiment store
    'CorpusDocument',
    'Topic',
    'Qrel',
    'Run',
    'RunResult',
    'TopicEvaluation',
    # Domain types
    'TermPositions',
    'SpectralVector',
    'ObjectiveSpec',
    'RawDocument',
    'TokenizerConfig',
    'Token',
    'TokenStream',
    'DocEntry',
    'Posting',
    'PostingList',
    'Index',
    'Query',
    'RankedEntry',
    'RankedList',
    'QrelSet',
    'ExpansionCandidates',
    'TopicMetrics',
    'EvalReport',
    'PlantRule',
    'DocGroup',
    'SynthSpec',
    'SyntheticCorpus'
]
