import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from tabulate import tabulate

from utils.exceptions import ConfigError, DataFormatError, EmptyInputError
from utils.file_utils import get_filename, read_lines
from .normalizer import NormalizationTable, normalize_text
from .tokenizer import TokenizedSentence, tokenize

DEFAULT_MIN_LENGTH = 1
DEFAULT_MAX_LENGTH = 80


@dataclass
class ParallelCorpus:
    """
    Sentence-aligned parallel text: pair k holds the tokenized source and target
    sentences of line k. Neither side of any pair may be empty.
    """
    pairs: List[Tuple[TokenizedSentence, TokenizedSentence]] = field(default_factory=list)
    source_lang: str = "ur"
    target_lang: str = "en"

    def __post_init__(self):
        for index, (src, tgt) in enumerate(self.pairs):
            if len(src) == 0 or len(tgt) == 0:
                raise DataFormatError(f"Sentence pair {index} has an empty side.")

    @classmethod
    def from_strings(cls, pairs, source_lang="ur", target_lang="en") -> "ParallelCorpus":
        """Builds a corpus from (source, target) whitespace-tokenized strings."""
        return cls(
            [(TokenizedSentence.from_words(s.split()), TokenizedSentence.from_words(t.split())) for s, t in pairs],
            source_lang=source_lang,
            target_lang=target_lang,
        )

    def swapped(self) -> "ParallelCorpus":
        return ParallelCorpus([(t, s) for s, t in self.pairs], self.target_lang, self.source_lang)

    @property
    def sources(self) -> List[TokenizedSentence]:
        return [s for s, _ in self.pairs]

    @property
    def targets(self) -> List[TokenizedSentence]:
        return [t for _, t in self.pairs]

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


@dataclass(frozen=True)
class SideStats:
    avg_length: float
    min_length: int
    max_length: int
    total_words: int
    unique_words: int


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    source: SideStats
    target: SideStats


def _check_bounds(min_len: int, max_len: int):
    if min_len < 1 or max_len < min_len:
        raise ConfigError(f"Invalid sentence length bounds [{min_len}, {max_len}]: need 1 <= min <= max.")


def clean_pair(src: TokenizedSentence, tgt: TokenizedSentence,
               min_len: int = DEFAULT_MIN_LENGTH, max_len: int = DEFAULT_MAX_LENGTH) -> bool:
    """
    Decides whether a sentence pair survives cleaning.

    Returns:
        bool: True to keep the pair, False to drop it (either side's token count is outside [min_len, max_len]).

    Raises:
        ConfigError: If the bounds are invalid.
    """
    _check_bounds(min_len, max_len)
    return min_len <= len(src) <= max_len and min_len <= len(tgt) <= max_len


def _side_stats(sentences: List[TokenizedSentence], lowercase: bool) -> SideStats:
    lengths = [len(s) for s in sentences]
    vocabulary = set()
    for sentence in sentences:
        for word in sentence.words:
            vocabulary.add(word.lower() if lowercase else word)
    return SideStats(
        avg_length=sum(lengths) / len(lengths),
        min_length=min(lengths),
        max_length=max(lengths),
        total_words=sum(lengths),
        unique_words=len(vocabulary),
    )


def corpus_stats(corpus: ParallelCorpus, lowercase_target: bool = False) -> CorpusStats:
    """
    Computes the corpus statistics table.

    Unique words are counted case-sensitively on the source side; the target side
    is lowercased first when `lowercase_target` is set.

    Raises:
        EmptyInputError: If the corpus has no sentence pairs.
    """
    if len(corpus) == 0:
        raise EmptyInputError("Cannot compute statistics of an empty corpus.")
    return CorpusStats(
        sentence_count=len(corpus),
        source=_side_stats(corpus.sources, lowercase=False),
        target=_side_stats(corpus.targets, lowercase=lowercase_target),
    )


def render_stats(stats: CorpusStats, source_label: str = "Urdu", target_label: str = "English") -> str:
    """Renders the statistics as an aligned two-column plain-text table."""
    rows = [
        ["# of sentences", stats.sentence_count, ""],
        ["Avg. sentence length", f"{stats.source.avg_length:.0f}", f"{stats.target.avg_length:.0f}"],
        ["Min , Max words in sentence",
         f"{stats.source.min_length},{stats.source.max_length}",
         f"{stats.target.min_length},{stats.target.max_length}"],
        ["# of total words", stats.source.total_words, stats.target.total_words],
        ["# of unique words", stats.source.unique_words, stats.target.unique_words],
    ]
    return tabulate(rows, headers=["", source_label, target_label], tablefmt="plain", disable_numparse=True)


def load_parallel_corpus(source_path: str, target_path: str,
                         table: Optional[NormalizationTable] = None,
                         min_len: int = DEFAULT_MIN_LENGTH, max_len: int = DEFAULT_MAX_LENGTH,
                         source_lang: str = "ur", target_lang: str = "en") -> ParallelCorpus:
    """
    Reads, normalizes, tokenizes and cleans a two-file parallel corpus.

    Args:
        source_path (str): UTF-8 file with one source sentence per line.
        target_path (str): UTF-8 file whose line i translates line i of `source_path`.
        table (NormalizationTable, optional): Punctuation mapping. Defaults to the Urdu table.
        min_len (int): Minimum tokens per side. Defaults to 1.
        max_len (int): Maximum tokens per side. Defaults to 80.

    Returns:
        ParallelCorpus: The pairs that survive cleaning.

    Raises:
        DataFormatError: If the files have different line counts or are not valid UTF-8.
        ConfigError: If the bounds are invalid.
    """
    _check_bounds(min_len, max_len)
    start_time = time.time()
    table = table or NormalizationTable.default()
    source_lines = read_lines(source_path)
    target_lines = read_lines(target_path)
    if len(source_lines) != len(target_lines):
        raise DataFormatError(
            f"Line count mismatch: {get_filename(source_path)} has {len(source_lines)} lines, "
            f"{get_filename(target_path)} has {len(target_lines)}."
        )

    pairs = []
    dropped = 0
    for src_line, tgt_line in zip(source_lines, target_lines):
        src = tokenize(normalize_text(src_line, table))
        tgt = tokenize(normalize_text(tgt_line, table))
        if clean_pair(src, tgt, min_len, max_len):
            pairs.append((src, tgt))
        else:
            dropped += 1

    elapsed_time = time.time() - start_time
    logging.info(
        f"[corpus][{get_filename(source_path)}] Loaded {len(pairs)} sentence pairs, dropped {dropped} "
        f"outside [{min_len}, {max_len}] tokens in {elapsed_time:.2f} seconds."
    )
    return ParallelCorpus(pairs, source_lang=source_lang, target_lang=target_lang)
