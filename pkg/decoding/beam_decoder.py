import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from mining.model import TransliterationModel
from utils.exceptions import ConfigError
from utils.parallel import ordered_map

from .nbest import NBestItem, NBestList
from .ngram_lm import END, LanguageModel


@dataclass(frozen=True)
class BeamConfig:
    beam: int = 16
    n: int = 10
    w_tm: float = 1.0
    w_lm: float = 0.5
    max_ratio: float = 3.0

    def __post_init__(self):
        if self.beam < 1:
            raise ConfigError(f"Beam width must be >= 1, got {self.beam}.")
        if self.n < 1:
            raise ConfigError(f"N-best size must be >= 1, got {self.n}.")
        if self.w_tm < 0 or self.w_lm < 0:
            raise ConfigError(f"Score weights must be >= 0, got w_tm={self.w_tm}, w_lm={self.w_lm}.")
        if self.max_ratio <= 0:
            raise ConfigError(f"Length ratio must be > 0, got {self.max_ratio}.")

    def max_output_length(self, source_length: int) -> int:
        return max(1, int(self.max_ratio * source_length))

    def combine(self, tm_score: float, lm_score: float) -> float:
        return self.w_tm * tm_score + self.w_lm * lm_score


# (source position, output length) -> output -> (tm score, lm prefix score)
_Stacks = Dict[Tuple[int, int], Dict[str, Tuple[float, float]]]


def _expansions(model: TransliterationModel, src: str, i: int) -> List[Tuple[int, str, float]]:
    """(source characters consumed, target segment, log theta) for every multigram starting at i."""
    options = []
    index = model.by_source_segment
    for di in (0, 1, 2):
        if i + di > len(src):
            break
        for tgt_seg, logprob in index.get(src[i:i + di], ()):
            options.append((di, tgt_seg, logprob))
    return options


def _prune(stack: Dict[str, Tuple[float, float]], cfg: BeamConfig) -> List[Tuple[str, float, float]]:
    ranked = sorted(stack.items(), key=lambda item: (-cfg.combine(*item[1]), item[0]))
    return [(output, tm, lm) for output, (tm, lm) in ranked[:cfg.beam]]


def transliterate(model: TransliterationModel, lm: LanguageModel, src: str, cfg: BeamConfig = BeamConfig()) -> NBestList:
    """
    Monotonic beam search from a source word to an n-best list of target words.

    Hypotheses consume source segments left to right and emit the paired target
    segments. They are grouped in stacks by (source characters consumed, output
    length), processed in increasing order of their sum; each stack keeps the
    best-scoring hypothesis per output string and is pruned to `cfg.beam`
    entries before expansion. A hypothesis is complete once it has consumed the
    whole source with a non-empty output; its score is

        w_tm * tm + w_lm * (lm prefix + log p(end | output))

    where tm is the best alignment's log probability. Outputs are capped at
    `cfg.max_output_length(len(src))` characters.

    Returns an n-best list flagged `failed` when no hypothesis completes.
    """
    if not src:
        raise ConfigError("Cannot transliterate an empty word.")
    max_len = cfg.max_output_length(len(src))
    stacks: _Stacks = {(0, 0): {"": (0.0, 0.0)}}
    expansions = [_expansions(model, src, i) for i in range(len(src) + 1)]
    completed: List[NBestItem] = []

    for diagonal in range(len(src) + max_len + 1):
        for i in range(max(0, diagonal - max_len), min(len(src), diagonal) + 1):
            stack = stacks.pop((i, diagonal - i), None)
            if not stack:
                continue
            for output, tm, lm_prefix in _prune(stack, cfg):
                if i == len(src) and output:
                    lm_total = lm_prefix + lm.logprob_next(output, END)
                    completed.append(NBestItem(output, tm, lm_total, cfg.combine(tm, lm_total)))
                for di, tgt_seg, logprob in expansions[i]:
                    if len(output) + len(tgt_seg) > max_len:
                        continue
                    new_output = output
                    new_lm = lm_prefix
                    for char in tgt_seg:
                        new_lm += lm.logprob_next(new_output, char)
                        new_output += char
                    key = (i + di, len(new_output))
                    new_tm = tm + logprob
                    target = stacks.setdefault(key, {})
                    previous = target.get(new_output)
                    if previous is None or new_tm > previous[0]:
                        target[new_output] = (new_tm, new_lm)

    if not completed:
        logging.warning(f"[beam_decoder][{src}] No hypothesis covers the whole word; transliteration failed.")
        return NBestList.failure(src, cfg.n)
    nbest = NBestList.from_items(src, completed, cfg.n)
    logging.debug(f"[beam_decoder][{src}] 1-best '{nbest.best.candidate}' ({nbest.best.combined:.4f}).")
    return nbest


def transliterate_words(
    model: TransliterationModel,
    lm: LanguageModel,
    words: Sequence[str],
    cfg: BeamConfig = BeamConfig(),
    threads: int = 1,
) -> List[NBestList]:
    """Decodes each word independently; results follow the input order."""
    return ordered_map(lambda word: transliterate(model, lm, word, cfg), words, threads)
