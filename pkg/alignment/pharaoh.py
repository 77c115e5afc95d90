import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple

from utils.exceptions import AlignmentRangeError, DataFormatError, PharaohParseError
from utils.file_utils import read_lines, write_lines

_LINK = re.compile(r"^(\d+)-(\d+)$")

Link = Tuple[int, int]


@dataclass(frozen=True)
class AlignmentLinkSet:
    """
    Word alignment links (i, j) of one sentence pair: source word i is linked to
    target word j. Indices are zero-based and bounded by the sentence lengths.
    """
    links: FrozenSet[Link] = field(default_factory=frozenset)
    src_len: int = 0
    tgt_len: int = 0

    def __post_init__(self):
        object.__setattr__(self, "links", frozenset(self.links))
        for i, j in self.links:
            if not (0 <= i < self.src_len and 0 <= j < self.tgt_len):
                raise AlignmentRangeError(
                    f"Link {i}-{j} outside sentence pair of lengths ({self.src_len}, {self.tgt_len})."
                )

    def to_pharaoh(self) -> str:
        return " ".join(f"{i}-{j}" for i, j in sorted(self.links))

    def transposed(self) -> "AlignmentLinkSet":
        return AlignmentLinkSet(frozenset((j, i) for i, j in self.links), self.tgt_len, self.src_len)

    def __contains__(self, link):
        return link in self.links

    def __iter__(self):
        return iter(sorted(self.links))

    def __len__(self):
        return len(self.links)


def parse_pharaoh(line: str, src_len: int, tgt_len: int) -> AlignmentLinkSet:
    """
    Parses a line of whitespace-separated "i-j" tokens.

    Raises:
        PharaohParseError: If a token is not of the form i-j.
        AlignmentRangeError: If an index is not smaller than the corresponding sentence length.
    """
    links = set()
    for token in line.split():
        match = _LINK.match(token)
        if not match:
            raise PharaohParseError(token)
        links.add((int(match.group(1)), int(match.group(2))))
    return AlignmentLinkSet(frozenset(links), src_len, tgt_len)


def read_alignments(file_path: str, corpus) -> List[AlignmentLinkSet]:
    """Reads one alignment line per sentence pair of `corpus`."""
    lines = read_lines(file_path)
    if len(lines) != len(corpus):
        raise DataFormatError(
            f"Alignment file has {len(lines)} lines but the corpus has {len(corpus)} sentence pairs."
        )
    return [parse_pharaoh(line, len(src), len(tgt)) for line, (src, tgt) in zip(lines, corpus)]


def write_alignments(file_path: str, alignments: Iterable[AlignmentLinkSet]) -> int:
    return write_lines(file_path, (a.to_pharaoh() for a in alignments))
