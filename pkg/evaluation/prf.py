from collections import Counter
from typing import Tuple

from textnorm.tokenizer import SentenceLike

from .preprocessing import DEFAULT_OPTIONS, EvalOptions, prepare


def overlap_counts(hyp: SentenceLike, ref: SentenceLike, options: EvalOptions = DEFAULT_OPTIONS) -> Tuple[int, int, int]:
    """(bag-of-words intersection size, hypothesis length, reference length)."""
    hyp_words, ref_words = prepare(hyp, options), prepare(ref, options)
    common = Counter(hyp_words) & Counter(ref_words)
    return sum(common.values()), len(hyp_words), len(ref_words)


def f1_score(precision: float, recall: float) -> float:
    return 2 * precision * recall / (precision + recall) if precision + recall else 0.0


def prf_from_counts(common: int, hyp_length: int, ref_length: int) -> Tuple[float, float, float]:
    precision = common / hyp_length if hyp_length else 0.0
    recall = common / ref_length if ref_length else 0.0
    return precision, recall, f1_score(precision, recall)


def prf(hyp: SentenceLike, ref: SentenceLike, options: EvalOptions = DEFAULT_OPTIONS) -> Tuple[float, float, float]:
    """Unigram precision, recall and F1 over multiset intersection."""
    return prf_from_counts(*overlap_counts(hyp, ref, options))
