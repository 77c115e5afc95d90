from typing import List, Optional, Tuple

from mining.model import TransliterationModel
from mining.multigrams import NEG_INF, Multigram
from utils.exceptions import ConfigError

from .beam_decoder import BeamConfig
from .ngram_lm import END, LanguageModel

ORACLE_MAX_ALPHABET = 4
ORACLE_MAX_LENGTH = 12


def _target_symbols(model: TransliterationModel) -> List[str]:
    symbols = set()
    for (_, tgt_seg), logprob in model.theta.items():
        if logprob != NEG_INF:
            symbols.update(tgt_seg)
    return sorted(symbols)


def exhaustive_oracle(
    model: TransliterationModel,
    lm: LanguageModel,
    src: str,
    max_len: int,
    cfg: BeamConfig = BeamConfig(),
) -> Optional[Tuple[str, float]]:
    """
    Scores every non-empty target string of at most `max_len` characters and
    returns the best (candidate, combined score), or None when no string can be
    aligned with `src`.

    The candidates are walked as a trie. Each node carries the Viterbi column of
    best alignment scores of every source prefix with the node's string, and
    the language model prefix score, so extending a string by one character
    costs one column. Ties follow the decoder: shorter candidate, then
    lexicographic order.

    Raises:
        ConfigError: If the emittable target alphabet has more than 4 symbols or
            `max_len` exceeds 12.
    """
    symbols = _target_symbols(model)
    if len(symbols) > ORACLE_MAX_ALPHABET:
        raise ConfigError(f"Oracle search is limited to {ORACLE_MAX_ALPHABET} target symbols, got {len(symbols)}.")
    if max_len > ORACLE_MAX_LENGTH:
        raise ConfigError(f"Oracle search is limited to length {ORACLE_MAX_LENGTH}, got {max_len}.")

    n = len(src)
    shapes = model.shapes

    def theta(src_seg: str, tgt_seg: str) -> float:
        return model.multigram_logprob(Multigram(src_seg, tgt_seg))

    def next_column(columns: List[List[float]], output: str) -> List[float]:
        j = len(output)
        column = [NEG_INF] * (n + 1)
        for i in range(n + 1):
            if i == 0 and j == 0:
                column[0] = 0.0
                continue
            best = NEG_INF
            for di, dj in shapes:
                if di > i or dj > j:
                    continue
                previous = column if dj == 0 else columns[-dj]
                score = previous[i - di]
                if score == NEG_INF:
                    continue
                score += theta(src[i - di:i], output[j - dj:j])
                if score > best:
                    best = score
            column[i] = best
        return column

    start = next_column([], "")
    best: Optional[Tuple[str, float]] = None

    def visit(output: str, columns: List[List[float]], lm_prefix: float):
        nonlocal best
        tm = columns[-1][n]
        if output and tm != NEG_INF:
            combined = cfg.combine(tm, lm_prefix + lm.logprob_next(output, END))
            if (
                best is None
                or combined > best[1]
                or (combined == best[1] and (len(output), output) < (len(best[0]), best[0]))
            ):
                best = (output, combined)
        if len(output) == max_len:
            return
        for symbol in symbols:
            extended = output + symbol
            visit(extended, columns[-1:] + [next_column(columns, extended)],
                  lm_prefix + lm.logprob_next(output, symbol))

    visit("", [start], 0.0)
    return best
