from dataclasses import dataclass
from typing import List, Optional, Sequence

from textnorm.tokenizer import SentenceLike

from .preprocessing import DEFAULT_OPTIONS, EvalOptions, prepare


@dataclass(frozen=True)
class MeteorStats:
    matches: int
    hyp_length: int
    ref_length: int
    chunks: int

    def __add__(self, other: "MeteorStats") -> "MeteorStats":
        return MeteorStats(
            self.matches + other.matches,
            self.hyp_length + other.hyp_length,
            self.ref_length + other.ref_length,
            self.chunks + other.chunks,
        )


def align_unigrams(hyp: Sequence[str], ref: Sequence[str]) -> List[Optional[int]]:
    """
    Exact-match alignment: for each hypothesis position, the reference position it
    matches or None. Each reference position is used once. A word that continues
    the previous match takes the next reference position when that position holds
    the same word; otherwise it takes the leftmost unused occurrence.
    """
    unused = {}
    for position, word in enumerate(ref):
        unused.setdefault(word, []).append(position)
    alignment: List[Optional[int]] = []
    previous = None
    for word in hyp:
        positions = unused.get(word)
        chosen = None
        if positions:
            if previous is not None and previous + 1 in positions:
                chosen = previous + 1
            else:
                chosen = positions[0]
            positions.remove(chosen)
        alignment.append(chosen)
        previous = chosen
    return alignment


def count_chunks(alignment: Sequence[Optional[int]]) -> int:
    """Maximal runs of matches adjacent in both the hypothesis and the reference."""
    chunks = 0
    previous = None
    for position in alignment:
        if position is not None and (previous is None or position != previous + 1):
            chunks += 1
        previous = position
    return chunks


def meteor_stats(hyp: SentenceLike, ref: SentenceLike, options: EvalOptions = DEFAULT_OPTIONS) -> MeteorStats:
    hyp_words, ref_words = prepare(hyp, options), prepare(ref, options)
    alignment = align_unigrams(hyp_words, ref_words)
    matches = sum(1 for p in alignment if p is not None)
    return MeteorStats(matches, len(hyp_words), len(ref_words), count_chunks(alignment))


def meteor_from_stats(stats: MeteorStats, options: EvalOptions = DEFAULT_OPTIONS) -> float:
    """
    (10 P R) / (R + 9 P) * (1 - Pm) with Pm = 0.5 * C / Mu, or 0.5 * (C / Mu) ** 3
    under the cubic penalty. 0 when nothing matches.
    """
    if stats.matches == 0:
        return 0.0
    precision = stats.matches / stats.hyp_length
    recall = stats.matches / stats.ref_length
    fmean = 10 * precision * recall / (recall + 9 * precision)
    fragmentation = stats.chunks / stats.matches
    if options.meteor_penalty == "cubic":
        fragmentation **= 3
    return fmean * (1 - 0.5 * fragmentation)


def meteor(hyp: SentenceLike, ref: SentenceLike, options: EvalOptions = DEFAULT_OPTIONS) -> float:
    """
    Single-reference METEOR with exact matching.

    Example:
        >>> meteor("a b x y", "a b c d")
        0.375
    """
    return meteor_from_stats(meteor_stats(hyp, ref, options), options)
