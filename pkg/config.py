"""
Runtime Configuration
Module-level defaults for every pipeline stage, with environment overrides
"""

import logging
import os
from pathlib import Path

# Spectral core
SPECTRAL_CONFIG = {
    'order': 3,                         # Fourier order n of the index
    'min_order': 1,
    'max_order': 32,
    'truncate_mismatched_orders': True  # dot/cosine truncate the higher-order vector
}

# Tokenizer
TOKENIZER_CONFIG = {
    'min_length': 2,
    'stem': False,
    'stopwords_path': os.environ.get(
        'FVS_STOPWORDS',
        str(Path(__file__).resolve().parent / 'app' / 'data' / 'stopwords.txt')
    ),
    'include_headers': True             # index header/headline text inside <DOC>
}

# Baseline search and objective re-ranking
RETRIEVAL_CONFIG = {
    'top_n': 1000,
    'rerank_depth': 1000,
    'threads': int(os.environ.get('FVS_THREADS', os.cpu_count() or 1)),
    'run_tag': 'fvs'
}

# Pseudo-relevance feedback
EXPANSION_CONFIG = {
    'r': 10,
    'k': 40,
    'w0': 2.0,
    'weighting': 'unit',                # unit | similarity
    'aggregator': 'sum',                # sum | max | mean
    'min_df': 2
}

# Evaluation
EVAL_CONFIG = {
    'k': 10,
    'diagnostic_depth': 10,
    'min_hits': 10,                     # diagnostics only for topics with more hits than this
    'pooled_skewness': True
}

LOG_CONFIG = {
    'level': os.environ.get('FVS_LOG_LEVEL', 'WARNING'),
    'format': '%(asctime)s %(levelname)s %(name)s: %(message)s'
}


def configure_logging(level=None):
    """Install a single stream handler on the root logger."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_CONFIG['format']))
    root.addHandler(handler)
    root.setLevel((level or LOG_CONFIG['level']).upper())
