from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Tuple

from utils.exceptions import DataFormatError
from utils.file_utils import atomic_write, read_lines


@dataclass(frozen=True)
class NBestItem:
    candidate: str
    tm_score: float
    lm_score: float
    combined: float

    def sort_key(self) -> Tuple[float, int, str]:
        # best score first, then the shorter candidate, then lexicographic order
        return -self.combined, len(self.candidate), self.candidate


@dataclass(frozen=True)
class NBestList:
    """
    Top-n decoder hypotheses for one source word: sorted by combined score
    descending, without duplicate candidates, at most `capacity` items.
    `failed` marks a word no hypothesis could transliterate.
    """
    source: str
    items: Tuple[NBestItem, ...] = ()
    capacity: int = 10
    failed: bool = False

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError(f"N-best capacity must be >= 1, got {self.capacity}.")
        if len(self.items) > self.capacity:
            raise ValueError(f"{len(self.items)} items exceed the n-best capacity {self.capacity}.")
        keys = [item.sort_key() for item in self.items]
        if keys != sorted(keys):
            raise ValueError("N-best items must be sorted by combined score.")
        if len({item.candidate for item in self.items}) != len(self.items):
            raise ValueError("N-best items must not repeat a candidate.")

    @classmethod
    def from_items(cls, source: str, items: Iterable[NBestItem], capacity: int) -> "NBestList":
        """Sorts, keeps the best item per candidate and truncates to `capacity`."""
        best: Dict[str, NBestItem] = {}
        for item in sorted(items, key=NBestItem.sort_key):
            best.setdefault(item.candidate, item)
        return cls(source, tuple(sorted(best.values(), key=NBestItem.sort_key)[:capacity]), capacity)

    @classmethod
    def failure(cls, source: str, capacity: int) -> "NBestList":
        return cls(source, (), capacity, failed=True)

    @property
    def best(self) -> NBestItem:
        return self.items[0]

    def candidates(self) -> List[str]:
        return [item.candidate for item in self.items]

    def __len__(self):
        return len(self.items)

    def __iter__(self) -> Iterator[NBestItem]:
        return iter(self.items)


def write_nbest(path: str, nbest_lists: Iterable[NBestList]) -> int:
    """Writes source<TAB>rank<TAB>candidate<TAB>tm<TAB>lm<TAB>combined rows, ranks starting at 1."""
    rows = 0
    with atomic_write(path) as handle:
        for nbest in nbest_lists:
            for rank, item in enumerate(nbest.items, start=1):
                handle.write(
                    f"{nbest.source}\t{rank}\t{item.candidate}\t"
                    f"{item.tm_score!r}\t{item.lm_score!r}\t{item.combined!r}\n"
                )
                rows += 1
    return rows


def read_nbest(path: str, capacity: int = 10) -> Dict[str, NBestList]:
    grouped: Dict[str, List[NBestItem]] = {}
    for number, line in enumerate(read_lines(path), start=1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 6:
            raise DataFormatError(f"{path}:{number}: expected 6 tab-separated fields.")
        source, _, candidate, tm, lm, combined = fields
        try:
            grouped.setdefault(source, []).append(NBestItem(candidate, float(tm), float(lm), float(combined)))
        except ValueError:
            raise DataFormatError(f"{path}:{number}: bad score field.")
    return {
        source: NBestList.from_items(source, items, max(capacity, len(items)))
        for source, items in grouped.items()
    }
