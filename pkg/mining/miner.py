import logging
import time
from dataclasses import replace

from alignment.candidates import WordPairList
from utils.exceptions import ConfigError
from utils.parallel import ordered_map

from .model import TransliterationModel, posterior_translit

DEFAULT_THRESHOLD = 0.5


def mine_pairs(
    model: TransliterationModel,
    candidates: WordPairList,
    threshold: float = DEFAULT_THRESHOLD,
    threads: int = 1,
) -> WordPairList:
    """
    Keeps the candidate pairs whose transliteration posterior is at least `threshold`.

    The result carries each pair's posterior and is sorted by posterior descending,
    then by source word, then by target word.

    Raises:
        ConfigError: If `threshold` lies outside [0, 1].
    """
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"Mining threshold must lie in [0, 1], got {threshold}.")
    start_time = time.time()
    posteriors = ordered_map(lambda p: posterior_translit(model, p.source, p.target), candidates, threads)
    mined = [
        replace(pair, posterior=posterior)
        for pair, posterior in zip(candidates, posteriors)
        if posterior >= threshold
    ]
    mined.sort(key=lambda p: (-p.posterior, p.source, p.target))
    elapsed_time = time.time() - start_time
    logging.info(
        f"[miner] Finished mining in {elapsed_time:.2f} seconds. "
        f"{len(mined)} of {len(candidates)} candidates at threshold {threshold}."
    )
    return WordPairList(mined)
