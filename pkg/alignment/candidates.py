import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional

from textnorm.corpus import ParallelCorpus
from textnorm.tokenizer import TokenKind
from utils.exceptions import DataFormatError
from utils.file_utils import atomic_write, read_lines

DEFAULT_MIN_WORD_CHARS = 2


@dataclass(frozen=True)
class WordPair:
    source: str
    target: str
    count: int = 1
    posterior: Optional[float] = None


class WordPairList:
    """
    WordPairList holds (source word, target word) pairs with corpus counts and,
    after mining, their transliteration posteriors.

    Two TSV layouts are supported:
    - candidates: source<TAB>target<TAB>count
    - mined pairs: source<TAB>target<TAB>posterior
    """

    def __init__(self, entries: Iterable[WordPair] = ()):
        self.entries: List[WordPair] = list(entries)
        for entry in self.entries:
            if entry.count < 1:
                raise DataFormatError(f"Word pair {entry.source}/{entry.target} has count {entry.count} < 1.")

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[WordPair]:
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def pairs(self):
        return [(e.source, e.target) for e in self.entries]

    def write_candidates(self, file_path: str) -> int:
        with atomic_write(file_path) as f:
            for e in self.entries:
                f.write(f"{e.source}\t{e.target}\t{e.count}\n")
        return len(self.entries)

    def write_mined(self, file_path: str) -> int:
        with atomic_write(file_path) as f:
            for e in self.entries:
                f.write(f"{e.source}\t{e.target}\t{e.posterior!r}\n")
        return len(self.entries)

    @classmethod
    def read(cls, file_path: str, mined: bool = False) -> "WordPairList":
        """Reads a candidate (count column) or mined (posterior column) TSV file."""
        entries = []
        for line_number, line in enumerate(read_lines(file_path), start=1):
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise DataFormatError(f"Line {line_number} of {file_path}: expected 3 tab-separated fields.")
            source, target, value = fields
            try:
                if mined:
                    entries.append(WordPair(source, target, posterior=float(value)))
                else:
                    entries.append(WordPair(source, target, count=int(value)))
            except ValueError:
                raise DataFormatError(f"Line {line_number} of {file_path}: bad numeric field '{value}'.")
        return cls(entries)


def extract_candidates(corpus: ParallelCorpus, alignments, min_word_chars: int = DEFAULT_MIN_WORD_CHARS) -> WordPairList:
    """
    Collects candidate word pairs from one-to-one alignment links.

    A link (i, j) yields a candidate when source word i and target word j take part
    in exactly one link each, both are word tokens (not punctuation or numbers) and
    both have at least `min_word_chars` characters. Counts are aggregated over the
    corpus; the list is sorted by source then target word.

    Raises:
        DataFormatError: If `alignments` is not parallel to `corpus`.
    """
    if len(alignments) != len(corpus):
        raise DataFormatError(
            f"Got {len(alignments)} alignment lines for {len(corpus)} sentence pairs."
        )
    counts = Counter()
    skipped = 0
    for (src, tgt), links in zip(corpus, alignments):
        if (links.src_len, links.tgt_len) != (len(src), len(tgt)):
            raise DataFormatError("Alignment link set does not match the lengths of its sentence pair.")
        src_degree = defaultdict(int)
        tgt_degree = defaultdict(int)
        for i, j in links.links:
            src_degree[i] += 1
            tgt_degree[j] += 1
        for i, j in links.links:
            if src_degree[i] != 1 or tgt_degree[j] != 1:
                continue
            source, target = src[i], tgt[j]
            if source.kind is not TokenKind.WORD or target.kind is not TokenKind.WORD:
                skipped += 1
                continue
            if len(source.surface) < min_word_chars or len(target.surface) < min_word_chars:
                skipped += 1
                continue
            counts[(source.surface, target.surface)] += 1

    entries = [WordPair(s, t, count=c) for (s, t), c in sorted(counts.items())]
    logging.info(f"[candidates] Extracted {len(entries)} candidate pairs; skipped {skipped} non-word or short links.")
    return WordPairList(entries)
