import math
from typing import List, Sequence

from textnorm.tokenizer import SentenceLike
from utils.exceptions import ConfigError, DataFormatError

from .preprocessing import DEFAULT_OPTIONS, EvalOptions, clipped_counts, prepare


def _check_refs(refs) -> None:
    if not refs:
        raise DataFormatError("At least one reference is required.")


def clipped_ngram_precision(
    hyp: SentenceLike, refs: Sequence[SentenceLike], n: int = 1, options: EvalOptions = DEFAULT_OPTIONS
) -> float:
    """
    Matched hypothesis n-grams, clipped by their maximum count in any reference,
    over the number of hypothesis n-grams. 0 for an empty hypothesis.

    Example:
        >>> clipped_ngram_precision("the the the", ["the cat"])
        0.3333333333333333
    """
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}.")
    _check_refs(refs)
    matches, total = clipped_counts(prepare(hyp, options), [prepare(r, options) for r in refs], n)
    return matches / total if total else 0.0


def closest_ref_length(hyp_length: int, ref_lengths: Sequence[int]) -> int:
    """Reference length closest to the hypothesis length, the shorter one on ties."""
    return min(ref_lengths, key=lambda r: (abs(r - hyp_length), r))


def brevity_penalty(hyp_length: int, ref_length: int) -> float:
    if hyp_length == 0:
        return 0.0
    return math.exp(min(0.0, 1.0 - ref_length / hyp_length))


def bleu_from_counts(matches: List[int], totals: List[int], hyp_length: int, ref_length: int, smooth: bool) -> float:
    log_sum = 0.0
    for n, (m, t) in enumerate(zip(matches, totals), start=1):
        if smooth and n > 1:
            m, t = m + 1, t + 1
        if m == 0 or t == 0:
            return 0.0
        log_sum += math.log(m / t)
    return brevity_penalty(hyp_length, ref_length) * math.exp(log_sum / len(matches))


def bleu(
    hyps: Sequence[SentenceLike],
    refs: Sequence[Sequence[SentenceLike]],
    max_n: int = None,
    options: EvalOptions = DEFAULT_OPTIONS,
) -> float:
    """
    Corpus BLEU in [0, 1]: the geometric mean of corpus-level clipped n-gram
    precisions for n = 1..max_n times the brevity penalty exp(min(0, 1 - r/c)),
    with r the sum of the closest reference lengths. Unsmoothed: any zero
    precision gives 0.

    `refs[i]` holds the references of `hyps[i]`.
    """
    max_n = max_n or options.max_n
    if max_n < 1:
        raise ConfigError(f"max_n must be >= 1, got {max_n}.")
    if len(hyps) != len(refs):
        raise DataFormatError(f"{len(hyps)} hypotheses but {len(refs)} reference sets.")
    matches, totals = [0] * max_n, [0] * max_n
    hyp_length = ref_length = 0
    for hyp, sentence_refs in zip(hyps, refs):
        _check_refs(sentence_refs)
        hyp_words = prepare(hyp, options)
        ref_words = [prepare(r, options) for r in sentence_refs]
        for n in range(1, max_n + 1):
            m, t = clipped_counts(hyp_words, ref_words, n)
            matches[n - 1] += m
            totals[n - 1] += t
        hyp_length += len(hyp_words)
        ref_length += closest_ref_length(len(hyp_words), [len(r) for r in ref_words])
    return bleu_from_counts(matches, totals, hyp_length, ref_length, smooth=False)


def sentence_bleu(
    hyp: SentenceLike, refs: Sequence[SentenceLike], options: EvalOptions = DEFAULT_OPTIONS
) -> float:
    """Sentence BLEU with add-one smoothing of the n > 1 precisions."""
    _check_refs(refs)
    hyp_words = prepare(hyp, options)
    ref_words = [prepare(r, options) for r in refs]
    matches, totals = [], []
    for n in range(1, options.max_n + 1):
        m, t = clipped_counts(hyp_words, ref_words, n)
        matches.append(m)
        totals.append(t)
    ref_length = closest_ref_length(len(hyp_words), [len(r) for r in ref_words])
    return bleu_from_counts(matches, totals, len(hyp_words), ref_length, smooth=True)
