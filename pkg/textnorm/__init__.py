# textnorm/__init__.py
from .normalizer import NormalizationTable, normalize_text, normalize_lines, URDU_PUNCTUATION_PAIRS
from .tokenizer import Token, TokenKind, TokenizedSentence, tokenize, as_words
from .corpus import (
    ParallelCorpus,
    CorpusStats,
    SideStats,
    clean_pair,
    corpus_stats,
    render_stats,
    load_parallel_corpus,
)
