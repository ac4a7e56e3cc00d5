"""
Command Line Interface for the Fourier Vector Scoring engine
Batch subcommands: index, search, rerank, expand, eval, gen-synthetic,
neighborhood, export-postings, init-db

Exit status: 0 success, 2 bad flag, 3 missing file or data, 4 format error,
5 invalid argument.
"""

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from app.corpus_functions import (
    build_query, default_tokenizer_config, parse_qrels, parse_topics, read_corpus, tokenize
)
from app.eval_functions import report, write_diagnostics_csv, write_metrics_csv
from app.expansion_functions import export_candidates, run_expansion_pipeline, term_neighborhood
from app.index_functions import build_index, export_postings, load_index, save_index
from app.objective_functions import format_objective, parse_objective
from app.retrieval_functions import fvs_rerank, read_run, run_header, tfidf_search, write_run
from app.synth_functions import (
    PRESETS, generate, preset, write_labels, write_plain_corpus, write_qrels, write_topics
)
from config import EVAL_CONFIG, EXPANSION_CONFIG, RETRIEVAL_CONFIG, SPECTRAL_CONFIG, configure_logging
from errors import (
    CorpusUnavailableError, IndexBuildError, IndexFormatError, InvalidArgumentError, ParseError
)
from models import Index, Query, RankedList, SynthSpec, TokenizerConfig

logger = logging.getLogger('fvs')

EXIT_OK = 0
EXIT_MISSING = 3
EXIT_FORMAT = 4
EXIT_INVALID = 5


def exit_code(error: Exception) -> int:
    """Map a failure to its exit status."""
    if isinstance(error, (FileNotFoundError, CorpusUnavailableError)):
        return EXIT_MISSING
    if isinstance(error, (ParseError, IndexFormatError, IndexBuildError, UnicodeDecodeError)):
        return EXIT_FORMAT
    return EXIT_INVALID


# Argument types

def _bounded_int(minimum: int, maximum: Optional[int] = None):
    def convert(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"'{text}' is not an integer") from None
        if value < minimum or (maximum is not None and value > maximum):
            upper = f"..{maximum}" if maximum is not None else " or more"
            raise argparse.ArgumentTypeError(f"{value} is outside {minimum}{upper}")
        return value
    return convert


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a number") from None
    if not value > 0 or value == float('inf'):
        raise argparse.ArgumentTypeError(f"{text} must be a positive finite number")
    return value


def _objective(text: str):
    try:
        return parse_objective(text)
    except ParseError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


# Shared helpers

def _tokenizer(args) -> TokenizerConfig:
    return default_tokenizer_config(stem=args.stem, min_length=args.min_length, stopwords_path=args.stopwords)


def _open_index(args) -> Tuple[Index, TokenizerConfig]:
    index = load_index(args.index)
    tokenizer = _tokenizer(args)
    if index.fingerprint and index.fingerprint != tokenizer.fingerprint():
        raise InvalidArgumentError(
            f"Tokenizer settings differ from those the index was built with "
            f"({tokenizer.fingerprint():016x} vs {index.fingerprint:016x})."
        )
    return index, tokenizer


def _queries(args, tokenizer: TokenizerConfig) -> List[Tuple[int, Query]]:
    """(topic id, query) pairs from --topics or --query."""
    if args.query is not None:
        return [(args.topic_id, build_query(args.query, tokenizer))]
    with open(args.topics, 'rb') as handle:
        topics = parse_topics(handle)
    queries = []
    for topic in topics:
        try:
            queries.append((topic.TopicID, build_query(topic.Title, tokenizer)))
        except InvalidArgumentError as e:
            logger.warning("topic %d skipped: %s", topic.TopicID, e)
    return queries


def _tokenizer_params(tokenizer: TokenizerConfig) -> dict:
    return {'tokenizer': f"{tokenizer.fingerprint():016x}"}


def _write_results(args, subcommand: str, header: dict, results: List[Tuple[int, RankedList]]):
    with open(args.output, 'w', encoding='utf-8', newline='\n') as handle:
        write_run(handle, results, args.tag, header)
    print(f"[OK] Wrote {sum(len(r) for _, r in results)} results for {len(results)} topics to {args.output}")

    if args.store:
        from app.store_functions import record_run
        name = args.name or Path(args.output).stem
        with store_session() as db:
            record_run(db, name, subcommand, header, results)
        print(f"[OK] Recorded run '{name}' in the experiment store")


@contextmanager
def store_session():
    """Experiment-store session with the schema in place."""
    from database import SessionLocal, create_tables
    create_tables(quiet=True)
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


# Subcommands

def cmd_index(args):
    tokenizer = _tokenizer(args)
    warnings: List[str] = []
    kept = []

    def streams():
        for document in read_corpus(args.corpus, args.format, not args.no_headers, warnings):
            if args.store:
                kept.append(document)
            yield tokenize(document, tokenizer)

    index = build_index(streams(), args.order, tokenizer, args.threads)
    save_index(index, args.output)
    print(f"[OK] Indexed {index.num_docs} documents, {len(index.vocabulary)} terms (order {index.order}) "
          f"into {args.output}")
    if warnings:
        print(f"[OK] {len(warnings)} corpus warnings (see log)")

    if args.store:
        from app.store_functions import store_documents
        with store_session() as db:
            count = store_documents(db, kept, source=','.join(str(p) for p in args.corpus))
        print(f"[OK] Stored {count} document texts")


def cmd_search(args):
    index, tokenizer = _open_index(args)
    params = {'top_n': args.top_n, **_tokenizer_params(tokenizer)}
    results = [(topic, tfidf_search(index, query, args.top_n)) for topic, query in _queries(args, tokenizer)]
    _write_results(args, 'search', run_header('search', params, index), results)


def cmd_rerank(args):
    index, tokenizer = _open_index(args)
    params = {
        'objective': format_objective(args.objective),
        'depth': args.depth,
        'top_n': args.top_n,
        **_tokenizer_params(tokenizer)
    }
    results = []
    for topic, query in _queries(args, tokenizer):
        baseline = tfidf_search(index, query, args.depth)
        results.append((topic, fvs_rerank(index, query, args.objective, baseline, args.top_n, args.depth, args.threads)))
    _write_results(args, 'rerank', run_header('rerank', params, index), results)


def cmd_expand(args):
    index, tokenizer = _open_index(args)
    params = {
        'r': args.r, 'k': args.k, 'w0': args.w0, 'weights': args.weights,
        'aggregator': args.aggregator, 'min_df': args.min_df, 'top_n': args.top_n,
        **_tokenizer_params(tokenizer)
    }
    results = []
    harvested = []
    for topic, query in _queries(args, tokenizer):
        ranked, expanded, candidates = run_expansion_pipeline(
            index, query, args.r, args.k, args.weights, args.top_n,
            w0=args.w0, aggregator=args.aggregator, min_df=args.min_df
        )
        logger.info("topic %d expanded to: %s", topic, expanded)
        results.append((topic, ranked))
        harvested.append((topic, candidates))

    _write_results(args, 'expand', run_header('expand', params, index), results)
    if args.candidates:
        with open(args.candidates, 'w', encoding='utf-8', newline='\n') as handle:
            for topic, candidates in harvested:
                handle.write(f"# topic {topic}\n")
                export_candidates(candidates, handle)
        print(f"[OK] Wrote expansion candidates to {args.candidates}")


def _needed_docnos(runs: Dict[str, Dict[int, RankedList]], depth: int) -> List[str]:
    return sorted({docno for run in runs.values() for ranked in run.values() for docno in ranked.docnos()[:depth]})


def cmd_eval(args):
    with open(args.qrels, 'rb') as handle:
        qrels = parse_qrels(handle)
    if len(qrels) == 0:
        raise InvalidArgumentError(f"Qrels file {args.qrels} holds no judgments.")

    runs = {}
    objectives = {}
    for path in args.run:
        with open(path, encoding='utf-8') as handle:
            header, topics = read_run(handle)
        name = Path(path).stem
        runs[name] = topics
        stated = ((header or {}).get('params') or {}).get('objective')
        if args.objective is not None:
            objectives[name] = args.objective
        elif stated:
            objectives[name] = parse_objective(stated)

    tokenizer = _tokenizer(args)
    queries = dict(_queries(args, tokenizer)) if (args.topics or args.query) else {}
    documents = None
    if queries:
        needed = set(_needed_docnos(runs, args.depth))
        if args.corpus:
            documents = {
                d.docno: d for d in read_corpus(args.corpus, args.format, not args.no_headers)
                if d.docno in needed
            }
        else:
            from app.store_functions import fetch_documents
            with store_session() as db:
                documents = fetch_documents(db, sorted(needed))

    evaluation = report(
        runs, qrels, args.k, documents, queries, objectives, tokenizer, args.depth, args.min_hits,
        pooled=not args.per_document
    )

    with open(args.metrics, 'w', encoding='utf-8', newline='') as handle:
        write_metrics_csv(evaluation, handle)
    print(f"[OK] Wrote metrics for {len(evaluation.rows)} topic evaluations to {args.metrics}")
    if args.diagnostics:
        with open(args.diagnostics, 'w', encoding='utf-8', newline='') as handle:
            write_diagnostics_csv(evaluation, handle)
        print(f"[OK] Wrote positional diagnostics to {args.diagnostics}")

    if args.store:
        from app.store_functions import record_evaluation
        with store_session() as db:
            rows = record_evaluation(db, evaluation)
        print(f"[OK] Recorded {len(rows)} topic evaluations")


def cmd_gen_synthetic(args):
    if args.spec:
        spec = SynthSpec.from_json(Path(args.spec).read_text(encoding='utf-8'))
        if args.seed is not None:
            spec = spec.with_seed(args.seed)
    else:
        spec = preset(args.preset, args.seed if args.seed is not None else 0)

    corpus = generate(spec)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = [
        ('corpus.tsv', lambda h: write_plain_corpus(corpus, h)),
        ('qrels.txt', lambda h: write_qrels(corpus.ground_truth, h)),
        ('topics.txt', lambda h: write_topics(corpus.topics, h)),
        ('labels.tsv', lambda h: write_labels(corpus, h)),
    ]
    for name, writer in outputs:
        with open(out / name, 'w', encoding='utf-8', newline='\n') as handle:
            writer(handle)
    print(f"[OK] Generated {len(corpus.documents)} documents (seed {spec.seed}) in {out}")


def cmd_neighborhood(args):
    index = load_index(args.index)
    rows = term_neighborhood(index, args.docno, args.term)
    shown = rows if args.limit is None else rows[:args.limit]
    print(f"Terms of {args.docno} by similarity to '{args.term}':")
    for term, sim in shown:
        print(f"  {term:<24} {sim: .4f}")


def cmd_export_postings(args):
    index = load_index(args.index)
    with open(args.output, 'w', encoding='utf-8', newline='\n') as handle:
        export_postings(index, handle)
    print(f"[OK] Exported postings of {len(index.vocabulary)} terms to {args.output}")


def cmd_init_db(args):
    from database import create_tables
    create_tables()


# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='fvs',
        description="Fourier Vector Scoring: position-aware retrieval experiments."
    )
    parser.add_argument('--log-level', default=None, help="DEBUG, INFO, WARNING (default from FVS_LOG_LEVEL)")
    commands = parser.add_subparsers(dest='command', required=True, metavar='command')

    tokenizer = argparse.ArgumentParser(add_help=False)
    tokenizer.add_argument('--stopwords', default=None, help="stopword list (default: FVS_STOPWORDS or shipped list)")
    tokenizer.add_argument('--stem', action='store_true', help="apply the Porter stemmer")
    tokenizer.add_argument('--min-length', type=_bounded_int(1), default=None, help="shortest indexable token")

    corpus = argparse.ArgumentParser(add_help=False)
    corpus.add_argument('--format', choices=['auto', 'trec', 'plain'], default='auto')
    corpus.add_argument('--no-headers', action='store_true', help="TREC: index only <TEXT> content")

    threads = argparse.ArgumentParser(add_help=False)
    threads.add_argument('--threads', type=_bounded_int(1), default=RETRIEVAL_CONFIG['threads'])

    queries = argparse.ArgumentParser(add_help=False)
    source = queries.add_mutually_exclusive_group()
    source.add_argument('--topics', help="TREC topic file")
    source.add_argument('--query', help="single query text")
    queries.add_argument('--topic-id', type=_bounded_int(1), default=1, help="topic id of --query")

    run = argparse.ArgumentParser(add_help=False, parents=[tokenizer, queries])
    run.add_argument('--index', required=True)
    run.add_argument('--output', required=True, help="TREC run file")
    run.add_argument('--top-n', type=_bounded_int(1), default=RETRIEVAL_CONFIG['top_n'])
    run.add_argument('--tag', default=RETRIEVAL_CONFIG['run_tag'])
    run.add_argument('--store', action='store_true', help="record the run in the experiment store")
    run.add_argument('--name', default=None, help="stored run name (default: output file stem)")

    p = commands.add_parser('index', parents=[tokenizer, corpus, threads], help="build and save an index")
    p.add_argument('--corpus', nargs='+', required=True)
    p.add_argument('--output', required=True)
    p.add_argument('--order', type=_bounded_int(SPECTRAL_CONFIG['min_order'], SPECTRAL_CONFIG['max_order']),
                   default=SPECTRAL_CONFIG['order'])
    p.add_argument('--store', action='store_true', help="store document texts for positional diagnostics")
    p.set_defaults(handler=cmd_index)

    p = commands.add_parser('search', parents=[run], help="baseline tf-idf run")
    p.set_defaults(handler=cmd_search)

    p = commands.add_parser('rerank', parents=[run, threads], help="objective-function re-ranking")
    p.add_argument('--objective', type=_objective, required=True, help='e.g. "1|3" or "1|3+3|3"')
    p.add_argument('--depth', type=_bounded_int(1), default=RETRIEVAL_CONFIG['rerank_depth'],
                   help="baseline candidates re-scored")
    p.set_defaults(handler=cmd_rerank)

    p = commands.add_parser('expand', parents=[run], help="spectral pseudo-relevance feedback")
    p.add_argument('--r', type=_bounded_int(1), default=EXPANSION_CONFIG['r'], help="feedback documents")
    p.add_argument('--k', type=_bounded_int(0), default=EXPANSION_CONFIG['k'], help="expansion terms")
    p.add_argument('--w0', type=_positive_float, default=EXPANSION_CONFIG['w0'], help="original term weight")
    p.add_argument('--weights', choices=['unit', 'similarity'], default=EXPANSION_CONFIG['weighting'])
    p.add_argument('--aggregator', choices=['sum', 'max', 'mean'], default=EXPANSION_CONFIG['aggregator'])
    p.add_argument('--min-df', type=_bounded_int(1), default=EXPANSION_CONFIG['min_df'])
    p.add_argument('--candidates', default=None, help="write term<TAB>score lists here")
    p.set_defaults(handler=cmd_expand)

    p = commands.add_parser('eval', parents=[tokenizer, corpus, queries], help="metrics and diagnostics")
    p.add_argument('--run', nargs='+', required=True)
    p.add_argument('--qrels', required=True)
    p.add_argument('--corpus', nargs='+', default=None, help="texts for diagnostics (default: experiment store)")
    p.add_argument('--objective', type=_objective, default=None, help="objective for the fitting rate")
    p.add_argument('--k', type=_bounded_int(1), default=EVAL_CONFIG['k'])
    p.add_argument('--depth', type=_bounded_int(1), default=EVAL_CONFIG['diagnostic_depth'])
    p.add_argument('--min-hits', type=_bounded_int(0), default=EVAL_CONFIG['min_hits'])
    p.add_argument('--per-document', action='store_true', help="mean per-document skewness instead of pooled")
    p.add_argument('--metrics', required=True, help="metrics CSV")
    p.add_argument('--diagnostics', default=None, help="diagnostics CSV")
    p.add_argument('--store', action='store_true', help="record evaluations for stored runs")
    p.set_defaults(handler=cmd_eval)

    p = commands.add_parser('gen-synthetic', help="generate a synthetic benchmark")
    spec = p.add_mutually_exclusive_group(required=True)
    spec.add_argument('--preset', choices=sorted(PRESETS))
    spec.add_argument('--spec', help="SynthSpec JSON file")
    p.add_argument('--seed', type=_bounded_int(0), default=None)
    p.add_argument('--output-dir', required=True)
    p.set_defaults(handler=cmd_gen_synthetic)

    p = commands.add_parser('neighborhood', help="terms of one document by closeness to a term")
    p.add_argument('--index', required=True)
    p.add_argument('--docno', required=True)
    p.add_argument('--term', required=True)
    p.add_argument('--limit', type=_bounded_int(1), default=None)
    p.set_defaults(handler=cmd_neighborhood)

    p = commands.add_parser('export-postings', help="dump postings as text")
    p.add_argument('--index', required=True)
    p.add_argument('--output', required=True)
    p.set_defaults(handler=cmd_export_postings)

    p = commands.add_parser('init-db', help="create the experiment store schema")
    p.set_defaults(handler=cmd_init_db)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    needs_queries = args.handler in (cmd_search, cmd_rerank, cmd_expand)
    if needs_queries and args.topics is None and args.query is None:
        parser.error(f"{args.command}: one of --topics or --query is required")

    try:
        args.handler(args)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code(e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
