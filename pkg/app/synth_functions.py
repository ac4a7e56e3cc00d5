"""
Synthetic Corpus Functions Implementation
Deterministic corpora with planted positional structure and ground-truth labels.

Generator (fixed so every implementation emits the same bytes):
    state  <- (6364136223846793005 * state + 1442695040888963407) mod 2^64
    output  = state >> 32                 (32-bit)
    below(m) = (output * m) >> 32         (integer in 0..m-1)
    uniform  = output / 2^32              (real in [0, 1))

Draw order: one Fisher-Yates shuffle of the document ordinals assigns groups
by quota; then per document: its length, its background tokens, its plants.
Background token = "w" + 5-digit rank, rank = floor(V * u^2).
"""

import logging
from typing import Dict, List, MutableSequence, Sequence, TextIO, Tuple

from app.objective_functions import in_region, parse_objective
from errors import InvalidArgumentError, SynthError
from models import DocGroup, PlantRule, QrelSet, RawDocument, SynthSpec, SyntheticCorpus

logger = logging.getLogger(__name__)

MAX_VOCABULARY = 100000
PLACEMENT_ATTEMPTS = 64


class LCG:
    """64-bit linear congruential generator."""

    MULTIPLIER = 6364136223846793005
    INCREMENT = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u32(self) -> int:
        self.state = (self.MULTIPLIER * self.state + self.INCREMENT) & self.MASK
        return self.state >> 32

    def below(self, m: int) -> int:
        return (self.next_u32() * m) >> 32

    def between(self, low: int, high: int) -> int:
        """Integer in [low, high]."""
        return low + self.below(high - low + 1)

    def uniform(self) -> float:
        return self.next_u32() / 4294967296.0

    def shuffle(self, items: MutableSequence):
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def _assign_groups(spec: SynthSpec, rng: LCG) -> Dict[int, DocGroup]:
    ordinals = list(range(spec.docs))
    rng.shuffle(ordinals)
    assignment = {}
    start = 0
    for group in spec.groups:
        quota = round(group.fraction * spec.docs)
        if start + quota > spec.docs:
            raise SynthError(f"Group '{group.name}' quota exceeds the {spec.docs} documents.")
        for ordinal in ordinals[start:start + quota]:
            assignment[ordinal] = group
        start += quota
    return assignment


def _pick(rng: LCG, pool: List[int], count: int) -> List[int]:
    """`count` distinct items by a partial Fisher-Yates pass."""
    pool = list(pool)
    for i in range(count):
        j = i + rng.below(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:count]


def _plant(tokens: List[str], rules: Sequence[PlantRule], rng: LCG, docno: str):
    length = len(tokens)
    taken = set()
    planted: Dict[str, List[int]] = {}

    for rule in rules:
        if rule.anchor is None:
            region = parse_objective(rule.region)
            free = [p for p in range(1, length + 1) if p not in taken and in_region(p, region, length)]
            if len(free) < rule.count:
                raise SynthError(
                    f"{docno}: region {rule.region} of a {length}-token document has room for "
                    f"{len(free)} of {rule.count} '{rule.term}' occurrences."
                )
            chosen = _pick(rng, free, rule.count)
        else:
            anchors = sorted(planted.get(rule.anchor, []))
            if not anchors:
                raise SynthError(f"{docno}: anchor '{rule.anchor}' of '{rule.term}' is not planted before it.")
            chosen = []
            for i in range(rule.count):
                anchor = anchors[i % len(anchors)]
                for _ in range(PLACEMENT_ATTEMPTS):
                    offset = 1 + rng.below(rule.window)
                    p = anchor - offset if rng.below(2) else anchor + offset
                    if 1 <= p <= length and p not in taken and p not in chosen:
                        chosen.append(p)
                        break
                else:
                    raise SynthError(
                        f"{docno}: no free position within {rule.window} tokens of '{rule.anchor}' for '{rule.term}'."
                    )

        for p in chosen:
            tokens[p - 1] = rule.term
            taken.add(p)
        planted.setdefault(rule.term, []).extend(chosen)


def background_word(rng: LCG, vocabulary_size: int) -> str:
    u = rng.uniform()
    return f"w{int(vocabulary_size * u * u):05d}"


def generate(spec: SynthSpec) -> SyntheticCorpus:
    """Realize a SynthSpec; identical specs give identical corpora."""
    # Edge case: Validate vocabulary size against the word format
    if spec.vocabulary_size > MAX_VOCABULARY:
        raise SynthError(f"Vocabulary size is limited to {MAX_VOCABULARY}.")

    rng = LCG(spec.seed)
    assignment = _assign_groups(spec, rng)
    corpus = SyntheticCorpus(topics=list(spec.topics))
    qrels = QrelSet()

    for i in range(spec.docs):
        docno = f"SYN-{i:06d}"
        length = rng.between(spec.min_length, spec.max_length)
        tokens = [background_word(rng, spec.vocabulary_size) for _ in range(length)]
        group = assignment.get(i)
        if group is not None:
            _plant(tokens, group.plants, rng, docno)
            for topic in group.relevant_to:
                qrels.add(topic, docno, 1)
        corpus.documents.append(RawDocument(docno, ' '.join(tokens)))
        corpus.groups[docno] = group.name if group is not None else None

    corpus.ground_truth = qrels
    logger.info("generated %d synthetic documents (seed %d)", spec.docs, spec.seed)
    return corpus


def _region(term: str, count: int, region: str = "1|1") -> PlantRule:
    return PlantRule(term=term, count=count, region=region)


def _near(term: str, count: int, anchor: str, window: int = 3) -> PlantRule:
    return PlantRule(term=term, count=count, region=None, anchor=anchor, window=window)


UNIFORM_TERMS = ('apple', 'birch', 'cedar', 'delta', 'ember', 'fjord', 'grove', 'harbor')


def _plain_preset(seed: int) -> SynthSpec:
    return SynthSpec(seed=seed, docs=1000)


def _region_preset(seed: int) -> SynthSpec:
    # equal tf, half at the beginning, half at the end
    return SynthSpec(
        seed=seed, docs=200,
        groups=(
            DocGroup('first-third', 0.5, (_region('target', 4, '1|3'),), (1,)),
            DocGroup('last-third', 0.5, (_region('target', 4, '3|3'),), (2,)),
        ),
        topics=((1, 'target'), (2, 'target'))
    )


def _skew_preset(seed: int) -> SynthSpec:
    # balanced documents carry the higher tf, so they lead the tf-idf ranking
    return SynthSpec(
        seed=seed, docs=300,
        groups=(
            DocGroup('head', 1 / 3, (_region('target', 3, '1|3'), _region('target', 1, '3|3')), (1,)),
            DocGroup('tail', 1 / 3, (_region('target', 3, '3|3'), _region('target', 1, '1|3')), (2,)),
            DocGroup('balanced', 1 / 3, tuple(_region('target', 2, f'{x}|3') for x in (1, 2, 3))),
        ),
        topics=((1, 'target'), (2, 'target'))
    )


def _uniform_preset(seed: int) -> SynthSpec:
    return SynthSpec(
        seed=seed, docs=300, min_length=300, max_length=400,
        groups=(
            DocGroup('uniform', 1.0, tuple(_region(t, 20) for t in UNIFORM_TERMS),
                     tuple(range(1, len(UNIFORM_TERMS) + 1))),
        ),
        topics=tuple((i, t) for i, t in enumerate(UNIFORM_TERMS, start=1))
    )


def _colocation_preset(seed: int) -> SynthSpec:
    # alpha within 3 tokens of every probe, beta half a document away
    return SynthSpec(
        seed=seed, docs=100,
        groups=(
            DocGroup('colocated', 1.0, (
                _region('probe', 3, '2|4'),
                _near('alpha', 3, 'probe'),
                _region('beta', 3, '4|4'),
            ), (1,)),
        ),
        topics=((1, 'probe'),)
    )


def _expansion_preset(seed: int) -> SynthSpec:
    # relevant documents without the query term share its neighbours
    related = ('bone', 'calcium', 'vitamin')
    return SynthSpec(
        seed=seed, docs=200, vocabulary_size=300,
        groups=(
            DocGroup('core', 0.025, (_region('osteoporosis', 3),)
                     + tuple(_near(t, 3, 'osteoporosis', window=5) for t in related), (403,)),
            DocGroup('synonym', 0.15, tuple(_region(t, 4) for t in related), (403,)),
            DocGroup('distractor', 0.2, (_region('osteoporosis', 2),)),
        ),
        topics=((403, 'osteoporosis'),)
    )


PRESETS = {
    'plain': _plain_preset,
    'region': _region_preset,
    'skew': _skew_preset,
    'uniform': _uniform_preset,
    'colocation': _colocation_preset,
    'expansion': _expansion_preset,
}


def preset(name: str, seed: int = 0) -> SynthSpec:
    """Named benchmark specification."""
    if name not in PRESETS:
        raise InvalidArgumentError(f"Unknown preset '{name}' (expected one of {', '.join(sorted(PRESETS))}).")
    return PRESETS[name](seed)


def write_plain_corpus(corpus: SyntheticCorpus, stream: TextIO):
    for document in corpus.documents:
        stream.write(f"{document.docno}\t{document.text}\n")


def write_qrels(qrels: QrelSet, stream: TextIO):
    for topic, docno, grade in qrels:
        stream.write(f"{topic} 0 {docno} {grade}\n")


def write_topics(topics: Sequence[Tuple[int, str]], stream: TextIO):
    for topic, title in topics:
        stream.write(f"<top>\n<num> Number: {topic}\n<title> {title}\n</top>\n\n")


def write_labels(corpus: SyntheticCorpus, stream: TextIO):
    """`docno<TAB>group` for every document; '-' when it carries no plants."""
    for document in corpus.documents:
        stream.write(f"{document.docno}\t{corpus.groups.get(document.docno) or '-'}\n")
