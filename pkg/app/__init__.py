# Application package initialization
# Import all functions for easy access

from .spectral_functions import (
    compute_spectral,
    rect_spectral,
    reconstruct,
    sample_distribution,
    dot,
    cosine_sim,
    cosine_many,
    add,
    scale,
    truncate
)

from .objective_functions import (
    parse_objective,
    format_objective,
    objective_spectral,
    in_region,
    region_bounds
)

from .corpus_functions import (
    parse_trec_sgml,
    parse_plain_corpus,
    read_corpus,
    parse_topics,
    parse_qrels,
    load_stopwords,
    default_tokenizer_config,
    tokenize,
    build_query
)

from .index_functions import (
    build_index,
    save_index,
    load_index,
    postings,
    idf,
    doc_vectors,
    export_postings
)

from .retrieval_functions import (
    tfidf_search,
    query_spectral,
    fvs_rerank,
    run_header,
    write_run,
    read_run
)

from .expansion_functions import (
    candidate_terms,
    expand_query,
    expanded_search,
    run_expansion_pipeline,
    term_neighborhood,
    export_candidates
)

from .eval_functions import (
    precision_at_k,
    average_precision,
    r_precision,
    trec_measures,
    position_skewness,
    fitting_rate,
    report,
    write_metrics_csv,
    write_diagnostics_csv
)

from .synth_functions import (
    generate,
    preset,
    write_plain_corpus,
    write_qrels,
    write_topics,
    write_labels
)

from .store_functions import (
    store_documents,
    fetch_documents,
    store_topics,
    store_qrels,
    load_qrels,
    record_run,
    load_run,
    record_evaluation,
    run_summary
)

__all__ = [
    # Spectral functions
    'compute_spectral',
    'rect_spectral',
    'reconstruct',
    'sample_distribution',
    'dot',
    'cosine_sim',
    'cosine_many',
    'add',
    'scale',
    'truncate',
    # Objective functions
    'parse_objective',
    'format_objective',
    'objective_spectral',
    'in_region',
    'region_bounds',
    # Corpus functions
    'parse_trec_sgml',
    'parse_plain_corpus',
    'read_corpus',
    'parse_topics',
    'parse_qrels',
    'load_stopwords',
    'default_tokenizer_config',
    'tokenize',
    'build_query',
    # Index functions
    'build_index',
    'save_index',
    'load_index',
    'postings',
    'idf',
    'doc_vectors',
    'export_postings',
    # Retrieval functions
    'tfidf_search',
    'query_spectral',
    'fvs_rerank',
    'run_header',
    'write_run',
    'read_run',
    # Expansion functions
    'candidate_terms',
    'expand_query',
    'expanded_search',
    'run_expansion_pipeline',
    'term_neighborhood',
    'export_candidates',
    # Evaluation functions
    'precision_at_k',
    'average_precision',
    'r_precision',
    'trec_measures',
    'position_skewness',
    'fitting_rate',
    'report',
    'write_metrics_csv',
    'write_diagnostics_csv',
    # Synthetic corpora
    'generate',
    'preset',
    'write_plain_corpus',
    'write_qrels',
    'write_topics',
    'write_labels',
    # Experiment store
    'store_documents',
    'fetch_documents',
    'store_topics',
    'store_qrels',
    'load_qrels',
    'record_run',
    'load_run',
    'record_evaluation',
    'run_summary'
]
