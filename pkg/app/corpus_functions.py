"""
Corpus Functions Implementation
Ingest TREC SGML and plain corpora, topics and qrels; tokenize documents
into position-numbered term streams.
"""

import html
import logging
import os
import re
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, List, Optional, Union

from nltk.stem import PorterStemmer

from config import TOKENIZER_CONFIG
from errors import (
    CorpusParseError, InvalidArgumentError, QrelsParseError, TopicParseError
)
from models import Query, QrelSet, RawDocument, Token, TokenizerConfig, TokenStream, Topic

logger = logging.getLogger(__name__)

Source = Union[bytes, BinaryIO]

DOC_BOUNDARY = re.compile(r'(<DOC\s*>|</DOC\s*>)', re.IGNORECASE)
DOCNO_ELEMENT = re.compile(r'<DOCNO>\s*(.*?)\s*</DOCNO>', re.IGNORECASE | re.DOTALL)
TEXT_ELEMENT = re.compile(r'<TEXT>(.*?)</TEXT>', re.IGNORECASE | re.DOTALL)
ANY_TAG = re.compile(r'<[^>]*>')
WORD = re.compile(r'[^\W_]+')

TOPIC_BLOCK = re.compile(r'<top>(.*?)</top>', re.IGNORECASE | re.DOTALL)
TOPIC_NUM = re.compile(r'<num>\s*(?:Number:)?\s*(\S+)', re.IGNORECASE)
TOPIC_TITLE = re.compile(r'<title>\s*(?:Topic:)?(.*?)(?=<|\Z)', re.IGNORECASE | re.DOTALL)

_stemmer = None


def _lines(source: Source) -> Iterator[str]:
    """UTF-8 lines of a byte source; invalid bytes are replaced."""
    if isinstance(source, (bytes, bytearray)):
        yield from bytes(source).decode('utf-8', errors='replace').splitlines(keepends=True)
        return
    for raw in source:
        yield raw.decode('utf-8', errors='replace')


def _read_text(source: Source) -> str:
    return ''.join(_lines(source))


def _strip_markup(fragment: str) -> str:
    return html.unescape(ANY_TAG.sub(' ', fragment)).strip()


def _record_warning(message: str, warnings: Optional[list]):
    logger.warning(message)
    if warnings is not None:
        warnings.append(message)


def _document_from_block(block: str, line: int, include_headers: bool, warnings) -> Optional[RawDocument]:
    match = DOCNO_ELEMENT.search(block)
    docno = match.group(1).strip() if match else ''
    if not docno:
        _record_warning(f"line {line}: document without <DOCNO> skipped", warnings)
        return None

    body = block[:match.start()] + ' ' + block[match.end():]
    if not include_headers:
        body = '\n'.join(TEXT_ELEMENT.findall(body))
    return RawDocument(docno, _strip_markup(body))


def parse_trec_sgml(
    source: Source,
    include_headers: bool = None,
    warnings: Optional[list] = None
) -> Iterator[RawDocument]:
    """
    Stream RawDocuments out of concatenated <DOC>...</DOC> blocks.
    Header and headline text is part of the body unless include_headers is False.
    A <DOC> that opens before the previous one closed is dropped with a warning
    and scanning resumes at the new <DOC>.
    """
    if include_headers is None:
        include_headers = TOKENIZER_CONFIG['include_headers']

    in_doc = False
    start_line = 0
    parts: List[str] = []

    for line_no, line in enumerate(_lines(source), start=1):
        for piece in DOC_BOUNDARY.split(line):
            if not piece:
                continue
            if DOC_BOUNDARY.fullmatch(piece):
                closing = piece.startswith('</')
                if not closing:
                    if in_doc:
                        _record_warning(
                            f"line {start_line}: unterminated <DOC> dropped at line {line_no}", warnings
                        )
                    in_doc, start_line, parts = True, line_no, []
                elif in_doc:
                    document = _document_from_block(''.join(parts), start_line, include_headers, warnings)
                    if document is not None:
                        yield document
                    in_doc, parts = False, []
                else:
                    _record_warning(f"line {line_no}: stray </DOC> ignored", warnings)
            elif in_doc:
                parts.append(piece)

    if in_doc:
        _record_warning(f"line {start_line}: unterminated <DOC> at end of input dropped", warnings)


def parse_plain_corpus(source: Source) -> Iterator[RawDocument]:
    """Line-delimited `docno<TAB>text` records; blank lines are skipped."""
    for line_no, line in enumerate(_lines(source), start=1):
        line = line.rstrip('\r\n')
        if not line.strip():
            continue
        docno, tab, text = line.partition('\t')
        if not tab or not docno.strip():
            raise CorpusParseError("expected 'docno<TAB>text'", line=line_no)
        yield RawDocument(docno.strip(), text)


def sniff_format(path: Union[str, Path]) -> str:
    """'trec' when the first non-blank byte opens a tag, else 'plain'."""
    with open(path, 'rb') as handle:
        head = handle.read(4096).lstrip()
    return 'trec' if head.startswith(b'<') else 'plain'


def read_corpus(
    paths: Iterable[Union[str, Path]],
    fmt: str = 'auto',
    include_headers: bool = None,
    warnings: Optional[list] = None
) -> Iterator[RawDocument]:
    """Documents of several corpus files, file by file, in source order."""
    for path in paths:
        kind = sniff_format(path) if fmt == 'auto' else fmt
        if kind not in ('trec', 'plain'):
            raise InvalidArgumentError(f"Unknown corpus format '{fmt}'.")
        with open(path, 'rb') as handle:
            if kind == 'trec':
                yield from parse_trec_sgml(handle, include_headers, warnings)
            else:
                yield from parse_plain_corpus(handle)


def load_stopwords(path: Optional[Union[str, Path]] = None) -> frozenset:
    """Stopword list, one word per line; '#' starts a comment."""
    path = path or os.environ.get('FVS_STOPWORDS') or TOKENIZER_CONFIG['stopwords_path']
    words = set()
    with open(path, encoding='utf-8') as handle:
        for line in handle:
            word = line.split('#', 1)[0].strip().lower()
            if word:
                words.add(word)
    return frozenset(words)


def default_tokenizer_config(
    stem: Optional[bool] = None,
    min_length: Optional[int] = None,
    stopwords_path: Optional[str] = None
) -> TokenizerConfig:
    return TokenizerConfig(
        stopwords=load_stopwords(stopwords_path),
        stem=TOKENIZER_CONFIG['stem'] if stem is None else stem,
        min_length=TOKENIZER_CONFIG['min_length'] if min_length is None else min_length
    )


def _stem(word: str) -> str:
    global _stemmer
    if _stemmer is None:
        _stemmer = PorterStemmer()
    return _stemmer.stem(word)


def tokenize(raw: RawDocument, config: TokenizerConfig) -> TokenStream:
    """
    Split on every non-alphanumeric character and lowercase. Every token gets
    a position; stopwords and tokens shorter than the minimum are marked
    non-indexable but still consume their position.
    """
    tokens = []
    for position, word in enumerate(WORD.findall(raw.text.lower()), start=1):
        indexable = len(word) >= config.min_length and word not in config.stopwords
        term = _stem(word) if indexable and config.stem else word
        tokens.append(Token(position, term, indexable))
    return TokenStream(raw.docno, tuple(tokens))


def build_query(text: str, config: TokenizerConfig, weight: float = 1.0) -> Query:
    """Query of the indexable terms of `text`; repeated terms add their weights."""
    weights = {}
    for token in tokenize(RawDocument('query', text), config).tokens:
        if token.indexable:
            weights[token.term] = weights.get(token.term, 0.0) + weight
    if not weights:
        raise InvalidArgumentError(f"Query '{text}' has no indexable terms.")
    return Query(tuple(weights.items()))


def parse_topics(source: Source) -> List[Topic]:
    """Topics from <top>/<num>/<title> markup, as transient Topic entities."""
    text = _read_text(source)
    topics = []
    seen = set()
    for block in TOPIC_BLOCK.finditer(text):
        line = text.count('\n', 0, block.start()) + 1
        body = block.group(1)

        num = TOPIC_NUM.search(body)
        if not num:
            raise TopicParseError("topic without <num>", line=line)
        try:
            topic_id = int(num.group(1))
        except ValueError:
            raise TopicParseError(f"topic number '{num.group(1)}' is not an integer", line=line) from None
        if topic_id <= 0:
            raise TopicParseError(f"topic number {topic_id} must be positive", line=line)
        if topic_id in seen:
            raise TopicParseError(f"topic {topic_id} defined twice", line=line)

        title = TOPIC_TITLE.search(body)
        title_text = ' '.join(title.group(1).split()) if title else ''
        if not title_text:
            raise TopicParseError(f"topic {topic_id} has an empty <title>", line=line)

        seen.add(topic_id)
        topics.append(Topic(TopicID=topic_id, Title=title_text))
    return topics


def parse_qrels(source: Source) -> QrelSet:
    """Whitespace-separated `topic iteration docno grade` lines."""
    qrels = QrelSet()
    for line_no, line in enumerate(_lines(source), start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 4:
            raise QrelsParseError(f"expected 4 fields, found {len(fields)}", line=line_no)
        topic, _, docno, grade = fields
        try:
            topic_id = int(topic)
            grade_value = int(grade)
        except ValueError:
            raise QrelsParseError(f"non-integer topic or grade in '{line.strip()}'", line=line_no) from None
        try:
            qrels.add(topic_id, docno, grade_value)
        except InvalidArgumentError as e:
            raise QrelsParseError(str(e), line=line_no) from None
    return qrels
