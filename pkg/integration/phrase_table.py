import logging
import math
import sys
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Tuple

from decoding.beam_decoder import BeamConfig, transliterate
from decoding.ngram_lm import LanguageModel
from mining.model import TransliterationModel
from utils.exceptions import ConfigError, DataFormatError
from utils.file_utils import atomic_write, read_lines

FIELD_SEPARATOR = "|||"


@dataclass(frozen=True)
class PhraseTableEntry:
    source: str
    target: str
    p_forward: float
    p_backward: float

    def __post_init__(self):
        if not self.source or not self.target:
            raise ValueError("Phrase table entries need non-empty phrases.")
        for p in (self.p_forward, self.p_backward):
            if not 0.0 < p <= 1.0:
                raise ValueError(f"Phrase table score {p} outside (0, 1].")

    def to_line(self) -> str:
        return f"{self.source} ||| {self.target} ||| {self.p_forward!r} {self.p_backward!r} ||| ||| "


def _softmax(scores: List[float]) -> List[float]:
    top = max(scores)
    weights = [math.exp(s - top) for s in scores]
    total = math.fsum(weights)
    return [max(w / total, sys.float_info.min) for w in weights]


def export_phrase_table(
    model: TransliterationModel,
    lm: LanguageModel,
    oov_words: Iterable[str],
    n: int,
    cfg: BeamConfig = BeamConfig(),
) -> List[PhraseTableEntry]:
    """
    Builds a transliteration phrase table for an external phrase-based decoder.

    Every distinct OOV word contributes up to `n` entries from its n-best list.
    The forward probability p(target | source) normalizes the exponentiated
    combined scores over the word's n-best; the backward probability
    p(source | target) normalizes the same scores over every source word that
    produced the target. Words the decoder cannot transliterate are omitted with
    a warning.

    Entries are ordered by source word, then by decoder rank.
    """
    if n < 1:
        raise ConfigError(f"Phrase table n-best size must be >= 1, got {n}.")
    cfg = replace(cfg, n=n)
    scored: List[Tuple[str, str, float, float]] = []
    for word in sorted(set(oov_words)):
        nbest = transliterate(model, lm, word, cfg)
        if nbest.failed:
            logging.warning(f"[phrase_table][{word}] No transliteration; word omitted from the phrase table.")
            continue
        forward = _softmax([item.combined for item in nbest])
        for item, p in zip(nbest, forward):
            scored.append((word, item.candidate, p, item.combined))

    by_target: Dict[str, List[Tuple[int, float]]] = {}
    for position, (_, target, _, combined) in enumerate(scored):
        by_target.setdefault(target, []).append((position, combined))
    backward = [0.0] * len(scored)
    for members in by_target.values():
        for (position, _), p in zip(members, _softmax([c for _, c in members])):
            backward[position] = p

    entries = [
        PhraseTableEntry(source, target, p_forward, p_backward)
        for (source, target, p_forward, _), p_backward in zip(scored, backward)
    ]
    logging.info(f"[phrase_table] Exported {len(entries)} entries for {len({e.source for e in entries})} words.")
    return entries


def write_phrase_table(path: str, entries: Iterable[PhraseTableEntry]) -> int:
    count = 0
    with atomic_write(path) as handle:
        for entry in entries:
            handle.write(entry.to_line() + "\n")
            count += 1
    return count


def read_phrase_table(path: str) -> List[PhraseTableEntry]:
    """Parses `src ||| tgt ||| p_fwd p_bwd ||| ||| ` lines."""
    entries = []
    for number, line in enumerate(read_lines(path), start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(FIELD_SEPARATOR)]
        if len(fields) < 3:
            raise DataFormatError(f"{path}:{number}: expected 'src ||| tgt ||| scores'.")
        scores = fields[2].split()
        if len(scores) != 2:
            raise DataFormatError(f"{path}:{number}: expected two scores, got {len(scores)}.")
        try:
            entries.append(PhraseTableEntry(fields[0], fields[1], float(scores[0]), float(scores[1])))
        except ValueError as e:
            raise DataFormatError(f"{path}:{number}: {e}")
    return entries
