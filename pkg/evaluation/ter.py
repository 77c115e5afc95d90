from typing import List, Sequence, Tuple

from textnorm.tokenizer import SentenceLike
from utils.exceptions import EmptyInputError

from .preprocessing import DEFAULT_OPTIONS, EvalOptions, prepare

MAX_SHIFT_LENGTH = 10


def edit_distance(hyp: Sequence[str], ref: Sequence[str]) -> int:
    """Word-level Levenshtein distance with unit insertion, deletion and substitution costs."""
    previous = list(range(len(ref) + 1))
    for i, word in enumerate(hyp, start=1):
        current = [i] + [0] * len(ref)
        for j, ref_word in enumerate(ref, start=1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (word != ref_word),
            )
        previous = current
    return previous[-1]


def _contains(ref: Sequence[str], block: Tuple[str, ...]) -> bool:
    n = len(block)
    return any(tuple(ref[k:k + n]) == block for k in range(len(ref) - n + 1))


def shift_edits(hyp: Sequence[str], ref: Sequence[str]) -> int:
    """
    Edits with greedy block shifts: repeatedly moves the hypothesis block, found
    verbatim in the reference, whose move lowers the edit distance the most, as long
    as the move saves more than the one edit it costs. Returns shifts plus the final
    edit distance.
    """
    words: List[str] = list(hyp)
    distance = edit_distance(words, ref)
    shifts = 0
    while True:
        best = None
        for start in range(len(words)):
            for length in range(1, min(MAX_SHIFT_LENGTH, len(words) - start) + 1):
                block = tuple(words[start:start + length])
                if not _contains(ref, block):
                    continue
                rest = words[:start] + words[start + length:]
                for target in range(len(rest) + 1):
                    if target == start:
                        continue
                    moved = rest[:target] + list(block) + rest[target:]
                    moved_distance = edit_distance(moved, ref)
                    if distance - moved_distance > 1 and (best is None or moved_distance < best[0]):
                        best = (moved_distance, moved)
        if best is None:
            return shifts + distance
        distance, words = best
        shifts += 1


def ter_edits(hyp: SentenceLike, refs: Sequence[SentenceLike], options: EvalOptions = DEFAULT_OPTIONS) -> Tuple[int, float]:
    """(fewest edits to any reference, average reference length)."""
    if not refs:
        raise EmptyInputError("TER needs at least one reference.")
    hyp_words = prepare(hyp, options)
    ref_words = [prepare(r, options) for r in refs]
    average_length = sum(len(r) for r in ref_words) / len(ref_words)
    if average_length == 0:
        raise EmptyInputError("TER is undefined for an empty reference.")
    measure = shift_edits if options.ter_shifts else edit_distance
    return min(measure(hyp_words, r) for r in ref_words), average_length


def ter(hyp: SentenceLike, ref: SentenceLike, options: EvalOptions = DEFAULT_OPTIONS) -> float:
    """
    Edits needed to turn the hypothesis into the reference, over the reference length.

    Example:
        >>> ter("a b c", "a x c")
        0.3333333333333333
    """
    edits, average_length = ter_edits(hyp, [ref], options)
    return edits / average_length
