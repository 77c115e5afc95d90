import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List

from textnorm.corpus import ParallelCorpus
from textnorm.tokenizer import TokenizedSentence
from utils.exceptions import ConfigError, EmptyInputError
from utils.parallel import ordered_map
from .pharaoh import AlignmentLinkSet

NULL_TOKEN = "<NULL>"
DEFAULT_ITERATIONS = 5


@dataclass
class Model1Table:
    """
    Lexical translation table t(target word | source word) of IBM Model 1.

    Attributes:
    -----------
    - probs (dict): probs[source][target] = t(target | source). The NULL source token is `NULL_TOKEN`.
    - log_likelihoods (list[float]): Corpus log-likelihood under the parameters of each E-step.
    """
    probs: Dict[str, Dict[str, float]] = field(default_factory=dict)
    log_likelihoods: List[float] = field(default_factory=list)

    def prob(self, target: str, source: str) -> float:
        return self.probs.get(source, {}).get(target, 0.0)

    def row_sums(self) -> Dict[str, float]:
        return {source: math.fsum(row.values()) for source, row in self.probs.items()}


def _initial_table(corpus: ParallelCorpus) -> Dict[str, Dict[str, float]]:
    cooccurrences = defaultdict(set)
    for src, tgt in corpus:
        targets = set(tgt.words)
        for source in set(src.words) | {NULL_TOKEN}:
            cooccurrences[source] |= targets
    return {
        source: {target: 1.0 / len(targets) for target in sorted(targets)}
        for source, targets in sorted(cooccurrences.items())
    }


def _expected_counts(probs, pair):
    src, tgt = pair
    sources = src.words + [NULL_TOKEN]
    counts = defaultdict(float)
    log_likelihood = 0.0
    for target in tgt.words:
        scores = [probs.get(source, {}).get(target, 0.0) for source in sources]
        total = math.fsum(scores)
        log_likelihood += math.log(total / len(sources))
        for source, score in zip(sources, scores):
            if score > 0.0:
                counts[(source, target)] += score / total
    return counts, log_likelihood


def train_model1(corpus: ParallelCorpus, iterations: int = DEFAULT_ITERATIONS, threads: int = 1) -> Model1Table:
    """
    Trains IBM Model 1 t(target | source) with EM.

    The table starts uniform over the target words co-occurring with each source
    word (NULL co-occurs with every target word). The E-step runs over sentence pairs,
    optionally on several threads, and fractional counts are reduced in corpus order.

    Args:
        corpus (ParallelCorpus): Training pairs.
        iterations (int): Number of EM iterations, at least 1. Defaults to 5.
        threads (int): Worker threads for the E-step. Defaults to 1.

    Returns:
        Model1Table: The estimated table with the log-likelihood of each iteration.

    Raises:
        EmptyInputError: If the corpus is empty.
        ConfigError: If `iterations` < 1.
    """
    if len(corpus) == 0:
        raise EmptyInputError("Cannot train Model 1 on an empty corpus.")
    if iterations < 1:
        raise ConfigError(f"Model 1 iterations must be >= 1, got {iterations}.")

    start_time = time.time()
    probs = _initial_table(corpus)
    log_likelihoods = []

    for iteration in range(1, iterations + 1):
        results = ordered_map(lambda pair: _expected_counts(probs, pair), corpus.pairs, threads)
        counts = defaultdict(float)
        log_likelihood = 0.0
        for pair_counts, pair_log_likelihood in results:
            log_likelihood += pair_log_likelihood
            for key, value in pair_counts.items():
                counts[key] += value
        log_likelihoods.append(log_likelihood)

        totals = defaultdict(float)
        for (source, _), value in counts.items():
            totals[source] += value
        new_probs = defaultdict(dict)
        for (source, target), value in sorted(counts.items()):
            new_probs[source][target] = value / totals[source]
        probs = dict(new_probs)
        logging.debug(f"[model1] Iteration {iteration}: log-likelihood {log_likelihood:.6f}.")

    elapsed_time = time.time() - start_time
    logging.info(
        f"[model1] Trained on {len(corpus)} sentence pairs, {iterations} iterations, "
        f"{len(probs)} source words in {elapsed_time:.2f} seconds."
    )
    return Model1Table(probs=probs, log_likelihoods=log_likelihoods)


def viterbi_align(table: Model1Table, src: TokenizedSentence, tgt: TokenizedSentence) -> AlignmentLinkSet:
    """
    Links every target word to its most probable source word.

    Ties go to the smaller source index. A target word whose NULL probability is
    strictly greater than every source word's stays unlinked, as does one with no
    probability mass at all.
    """
    src_words = src.words
    links = set()
    for j, target in enumerate(tgt.words):
        best_i, best_prob = -1, 0.0
        for i, source in enumerate(src_words):
            prob = table.prob(target, source)
            if prob > best_prob:
                best_i, best_prob = i, prob
        if best_i >= 0 and best_prob >= table.prob(target, NULL_TOKEN):
            links.add((best_i, j))
    return AlignmentLinkSet(frozenset(links), len(src), len(tgt))
