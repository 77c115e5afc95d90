from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from textnorm.tokenizer import SentenceLike, TokenizedSentence, TokenKind, classify, tokenize
from utils.exceptions import ConfigError

METEOR_PENALTIES = ("linear", "cubic")


@dataclass(frozen=True)
class EvalOptions:
    """
    Options shared by every metric.

    - lowercase: compare tokens case-insensitively.
    - strip_punctuation: drop punctuation tokens before matching.
    - max_n: highest n-gram order of BLEU.
    - meteor_penalty: "linear" 0.5 * C / Mu, or "cubic" 0.5 * (C / Mu) ** 3.
    - ter_shifts: allow greedy block shifts in TER, one edit each.
    """
    lowercase: bool = True
    strip_punctuation: bool = True
    max_n: int = 4
    meteor_penalty: str = "linear"
    ter_shifts: bool = False

    def __post_init__(self):
        if self.max_n < 1:
            raise ConfigError(f"max_n must be >= 1, got {self.max_n}.")
        if self.meteor_penalty not in METEOR_PENALTIES:
            raise ConfigError(f"meteor_penalty must be one of {METEOR_PENALTIES}, got '{self.meteor_penalty}'.")


DEFAULT_OPTIONS = EvalOptions()


def prepare(sentence: SentenceLike, options: EvalOptions = DEFAULT_OPTIONS) -> List[str]:
    """Tokens as the metrics compare them. Plain strings are tokenized first."""
    if isinstance(sentence, str):
        sentence = tokenize(sentence)
    if isinstance(sentence, TokenizedSentence):
        tokens = [(t.surface, t.kind) for t in sentence]
    else:
        tokens = [(w, classify(w)) for w in sentence]
    words = []
    for surface, kind in tokens:
        if options.strip_punctuation and kind is TokenKind.PUNCTUATION:
            continue
        words.append(surface.lower() if options.lowercase else surface)
    return words


def ngrams(words: Sequence[str], n: int) -> Counter:
    return Counter(tuple(words[i:i + n]) for i in range(len(words) - n + 1))


def clipped_counts(hyp: Sequence[str], refs: Sequence[Sequence[str]], n: int) -> Tuple[int, int]:
    """(clipped matches, hypothesis n-grams): each n-gram counts at most its maximum count in one reference."""
    hyp_counts = ngrams(hyp, n)
    max_ref: Counter = Counter()
    for ref in refs:
        max_ref |= ngrams(ref, n)
    matches = sum(min(count, max_ref[gram]) for gram, count in hyp_counts.items())
    return matches, max(len(hyp) - n + 1, 0)
