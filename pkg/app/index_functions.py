"""
Index Functions Implementation
Build, persist and serve the augmented inverted file: per-term postings of
(document, spectral vector). Positions are not stored, only coefficients.

FVSI file layout (all integers unsigned little-endian, floats IEEE-754 binary64 LE):

    header      magic "FVSI" (4 bytes), version u32, order u32, num_docs u32,
                vocabulary size u32, tokenizer fingerprint u64
    doc table   per document: docno length u32, docno UTF-8 bytes, token count u32
    vocabulary  per term, ascending: term length u32, term UTF-8 bytes, df u32,
                postings byte offset u64 (relative to the first posting record)
    postings    total byte length u64, then per term per posting:
                doc ordinal u32, 2n+1 coefficients f64 (a0, a1, b1, ..., an, bn)

df is implied twice (vocabulary field and offset deltas) and checked on load.
"""

import logging
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from itertools import islice
from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Tuple, Union

import numpy as np

from app.spectral_functions import spectral_from_table, spectral_table
from config import SPECTRAL_CONFIG
from errors import IndexBuildError, IndexFormatError, InvalidArgumentError
from models import DocEntry, Index, Posting, PostingList, SpectralVector, TokenizerConfig, TokenStream

logger = logging.getLogger(__name__)

MAGIC = b'FVSI'
FORMAT_VERSION = 1
HEADER = struct.Struct('<4sIIIIQ')
U32 = struct.Struct('<I')
U64 = struct.Struct('<Q')

BUILD_CHUNK = 256


def posting_dtype(order: int) -> np.dtype:
    """Packed on-disk posting record."""
    return np.dtype([('doc', '<u4'), ('coeffs', '<f8', (2 * order + 1,))])


def _document_rows(stream: TokenStream, order: int) -> List[Tuple[str, np.ndarray]]:
    positions = stream.term_positions()
    if stream.length == 0 or not positions:
        return []
    table = spectral_table(stream.length, order)
    return [
        (term, spectral_from_table(table, positions[term], stream.length))
        for term in sorted(positions)
    ]


def _chunks(items: Iterable, size: int):
    iterator = iter(items)
    while True:
        chunk = list(islice(iterator, size))
        if not chunk:
            return
        yield chunk


def build_index(
    documents: Iterable[TokenStream],
    order: int = None,
    tokenizer: Optional[TokenizerConfig] = None,
    threads: int = 1
) -> Index:
    """
    Build the index from token streams. Every indexable term of a document gets
    its spectral vector; the doc table records the full token count, stopwords
    included. Documents are processed in parallel chunks and merged in input order.
    """
    order = SPECTRAL_CONFIG['order'] if order is None else order

    # Edge case: Validate order and threads
    if not isinstance(order, int) or not SPECTRAL_CONFIG['min_order'] <= order <= SPECTRAL_CONFIG['max_order']:
        raise InvalidArgumentError(
            f"Index order must lie in {SPECTRAL_CONFIG['min_order']}..{SPECTRAL_CONFIG['max_order']}, got {order!r}."
        )
    if threads < 1:
        raise InvalidArgumentError("Thread count must be at least 1.")

    docs: List[DocEntry] = []
    seen = set()
    term_docs: dict = {}
    term_rows: dict = {}
    rows_of = partial(_document_rows, order=order)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for chunk in _chunks(documents, BUILD_CHUNK):
            for stream in chunk:
                if stream.docno in seen:
                    raise IndexBuildError(f"Duplicate docno '{stream.docno}'.")
                seen.add(stream.docno)
            results = pool.map(rows_of, chunk) if threads > 1 else map(rows_of, chunk)
            for stream, rows in zip(chunk, results):
                ordinal = len(docs)
                docs.append(DocEntry(stream.docno, stream.length))
                for term, coeffs in rows:
                    term_docs.setdefault(term, []).append(ordinal)
                    term_rows.setdefault(term, []).append(coeffs)

    vocabulary = {
        term: PostingList(np.array(term_docs[term], dtype=np.uint32), np.vstack(term_rows[term]))
        for term in sorted(term_docs)
    }
    fingerprint = tokenizer.fingerprint() if tokenizer is not None else 0
    logger.info("indexed %d documents, %d terms at order %d", len(docs), len(vocabulary), order)
    return Index(order, docs, vocabulary, fingerprint)


def save_index(index: Index, path: Union[str, Path]):
    """Write the index in the FVSI format. Identical indexes give identical bytes."""
    record = posting_dtype(index.order)
    terms = sorted(index.vocabulary)

    with open(path, 'wb') as handle:
        handle.write(HEADER.pack(MAGIC, FORMAT_VERSION, index.order, index.num_docs, len(terms), index.fingerprint))

        for entry in index.docs:
            docno = entry.docno.encode('utf-8')
            handle.write(U32.pack(len(docno)))
            handle.write(docno)
            handle.write(U32.pack(entry.length))

        offset = 0
        for term in terms:
            encoded = term.encode('utf-8')
            df = index.vocabulary[term].df
            handle.write(U32.pack(len(encoded)))
            handle.write(encoded)
            handle.write(U32.pack(df))
            handle.write(U64.pack(offset))
            offset += df * record.itemsize

        handle.write(U64.pack(offset))
        for term in terms:
            plist = index.vocabulary[term]
            records = np.empty(plist.df, dtype=record)
            records['doc'] = plist.docs
            records['coeffs'] = plist.coeffs
            handle.write(records.tobytes())


class _Cursor:
    """Bounds-checked reader over the file bytes."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int, section: str) -> bytes:
        if self.pos + size > len(self.data):
            raise IndexFormatError("truncated file", section)
        chunk = self.data[self.pos:self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt: struct.Struct, section: str):
        return fmt.unpack(self.take(fmt.size, section))

    def text(self, section: str) -> str:
        (size,) = self.unpack(U32, section)
        try:
            return self.take(size, section).decode('utf-8')
        except UnicodeDecodeError:
            raise IndexFormatError("invalid UTF-8 string", section) from None


def load_index(path: Union[str, Path]) -> Index:
    """Read an FVSI file, verifying structure, df and posting invariants."""
    with open(path, 'rb') as handle:
        cursor = _Cursor(handle.read())

    if cursor.data[:4] != MAGIC:
        raise IndexFormatError("bad magic", "header")
    _, version, order, num_docs, vocab_size, fingerprint = cursor.unpack(HEADER, "header")
    if version != FORMAT_VERSION:
        raise IndexFormatError(f"unsupported format version {version}", "header")
    if not SPECTRAL_CONFIG['min_order'] <= order <= SPECTRAL_CONFIG['max_order']:
        raise IndexFormatError(f"invalid Fourier order {order}", "header")

    docs = []
    seen = set()
    for _ in range(num_docs):
        docno = cursor.text("doc table")
        (length,) = cursor.unpack(U32, "doc table")
        if not docno or docno in seen:
            raise IndexFormatError(f"empty or duplicate docno '{docno}'", "doc table")
        seen.add(docno)
        docs.append(DocEntry(docno, length))

    entries = []
    previous = None
    for _ in range(vocab_size):
        term = cursor.text("vocabulary")
        df, offset = cursor.unpack(U32, "vocabulary")[0], cursor.unpack(U64, "vocabulary")[0]
        if previous is not None and term <= previous:
            raise IndexFormatError(f"terms out of order at '{term}'", "vocabulary")
        previous = term
        entries.append((term, df, offset))

    record = posting_dtype(order)
    (total,) = cursor.unpack(U64, "postings")
    if total % record.itemsize:
        raise IndexFormatError("postings length is not a whole number of records", "postings")
    start = cursor.pos
    cursor.take(total, "postings")
    if cursor.pos != len(cursor.data):
        raise IndexFormatError("trailing bytes after postings", "postings")
    records = np.frombuffer(cursor.data, dtype=record, count=total // record.itemsize, offset=start)

    vocabulary = {}
    expected = 0
    for i, (term, df, offset) in enumerate(entries):
        end = entries[i + 1][2] if i + 1 < len(entries) else total
        if offset != expected or (end - offset) != df * record.itemsize or df == 0:
            raise IndexFormatError(f"df/offset mismatch for '{term}'", "vocabulary")
        expected = end
        rows = records[offset // record.itemsize:end // record.itemsize]
        doc_ids = rows['doc'].astype(np.uint32)
        if np.any(doc_ids >= num_docs) or np.any(np.diff(doc_ids.astype(np.int64)) <= 0):
            raise IndexFormatError(f"invalid document ordinals for '{term}'", "postings")
        coeffs = np.array(rows['coeffs'], dtype=np.float64)
        if np.any(coeffs[:, 0] <= 0) or not np.all(np.isfinite(coeffs)):
            raise IndexFormatError(f"invalid coefficients for '{term}'", "postings")
        vocabulary[term] = PostingList(doc_ids, coeffs)
    if expected != total:
        raise IndexFormatError("postings not covered by the vocabulary", "postings")

    return Index(order, docs, vocabulary, fingerprint)


def postings(index: Index, term: str) -> List[Posting]:
    """Postings of a term sorted by document ordinal; empty when absent."""
    plist = index.posting_list(term)
    if plist is None:
        return []
    return [
        Posting(int(doc), SpectralVector(index.order, row, index.docs[int(doc)].length))
        for doc, row in zip(plist.docs, plist.coeffs)
    ]


def idf(index: Index, term: str) -> float:
    """ln(1 + N / df); 0 for unknown terms."""
    df = index.df(term)
    if df == 0:
        return 0.0
    return math.log(1.0 + index.num_docs / df)


def term_frequency(coeffs_a0: float, length: int) -> int:
    """Occurrence count recovered from a0 = tf / sqrt(L)."""
    return int(round(coeffs_a0 * math.sqrt(length)))


def doc_vectors(index: Index, doc: int) -> Tuple[List[str], np.ndarray]:
    """All terms of one document with their coefficient rows."""
    pairs = index.doc_terms(doc)
    if not pairs:
        return [], np.empty((0, 2 * index.order + 1))
    terms = [term for term, _ in pairs]
    matrix = np.vstack([index.vocabulary[term].coeffs[row] for term, row in pairs])
    return terms, matrix


def export_postings(index: Index, stream: TextIO):
    """Diagnostic dump: `term<TAB>docno<TAB>tf<TAB>coefficients` per posting."""
    for term in sorted(index.vocabulary):
        plist = index.vocabulary[term]
        for doc, row in zip(plist.docs.tolist(), plist.coeffs):
            entry = index.docs[doc]
            coefficients = ' '.join(repr(float(c)) for c in row)
            stream.write(f"{term}\t{entry.docno}\t{term_frequency(row[0], entry.length)}\t{coefficients}\n")
