import logging
import time
from typing import List

from textnorm.corpus import ParallelCorpus
from .model1 import DEFAULT_ITERATIONS, train_model1, viterbi_align
from .pharaoh import AlignmentLinkSet
from .symmetrization import DEFAULT_HEURISTIC, symmetrize


def align_corpus(corpus: ParallelCorpus, iterations: int = DEFAULT_ITERATIONS,
                 heuristic: str = DEFAULT_HEURISTIC, threads: int = 1) -> List[AlignmentLinkSet]:
    """
    Word-aligns a corpus with Model 1 in both directions and symmetrizes the result.

    The source-to-target table links each target word to a source word; the
    target-to-source table is trained on the swapped corpus and its links are
    transposed back before symmetrization.
    """
    start_time = time.time()
    forward_table = train_model1(corpus, iterations, threads)
    backward_table = train_model1(corpus.swapped(), iterations, threads)

    alignments = []
    for src, tgt in corpus:
        forward = viterbi_align(forward_table, src, tgt)
        backward = viterbi_align(backward_table, tgt, src).transposed()
        alignments.append(symmetrize(forward, backward, heuristic))

    links = sum(len(a) for a in alignments)
    elapsed_time = time.time() - start_time
    logging.info(
        f"[word_aligner] Aligned {len(corpus)} sentence pairs with {heuristic}: {links} links "
        f"in {elapsed_time:.2f} seconds."
    )
    return alignments
