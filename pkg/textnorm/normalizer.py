import logging
import unicodedata
from typing import Iterable, Mapping, Tuple, Union

import regex

from utils.exceptions import ConfigError
from utils.file_utils import decode_utf8

# Urdu punctuation and its ASCII counterpart.
URDU_PUNCTUATION_PAIRS = (
    ("،", ","),   # ، comma
    ("۔", "."),   # ۔ full stop
    ("؛", ";"),   # ؛ semicolon
    ("؟", "?"),   # ؟ question mark
    ("’", "'"),   # ’ single quote
    ("“", '"'),   # “ double quote
    ("”", '"'),   # ” double quote
)

EXTRA_PUNCTUATION_PAIRS = (
    ("‘", "'"),   # ‘
    ("«", '"'),   # «
    ("»", '"'),   # »
    ("٪", "%"),   # ٪
)

_ZERO_WIDTH = "‌‍"
_WORD_CHAR = r"\p{L}\p{M}\p{N}"
_BOUNDARY_ZERO_WIDTH = regex.compile(
    rf"(?<![{_WORD_CHAR}{_ZERO_WIDTH}])[{_ZERO_WIDTH}]+"
    rf"|[{_ZERO_WIDTH}]+(?![{_WORD_CHAR}{_ZERO_WIDTH}])"
)
_WHITESPACE = regex.compile(r"\s+")


class NormalizationTable:
    """
    NormalizationTable maps source codepoint sequences to canonical replacements.

    The table is built from ordered pairs and is immutable afterwards. Construction
    rejects duplicate keys and replacements that contain a key, so applying the
    table twice gives the same result as applying it once. Lookup is longest-match
    first.

    Attributes:
    -----------
    - mapping (Mapping[str, str]): The source sequence to replacement mapping, in insertion order.
    """

    def __init__(self, pairs: Iterable[Tuple[str, str]]):
        mapping = {}
        for source, replacement in pairs:
            if not source:
                raise ConfigError("Normalization table keys must be non-empty.")
            if source in mapping:
                raise ConfigError(f"Duplicate normalization table key {source!r}.")
            mapping[source] = replacement
        for source, replacement in mapping.items():
            for key in mapping:
                if key in replacement:
                    raise ConfigError(
                        f"Replacement {replacement!r} for {source!r} contains table key {key!r}."
                    )
        self._mapping = dict(mapping)
        keys = sorted(self._mapping, key=len, reverse=True)
        self._pattern = regex.compile("|".join(regex.escape(k) for k in keys)) if keys else None

    @classmethod
    def default(cls) -> "NormalizationTable":
        """Table with the Urdu/English punctuation correspondences plus quote and percent variants."""
        return cls(URDU_PUNCTUATION_PAIRS + EXTRA_PUNCTUATION_PAIRS)

    @property
    def mapping(self) -> Mapping[str, str]:
        return dict(self._mapping)

    def apply(self, text: str) -> str:
        if self._pattern is None:
            return text
        return self._pattern.sub(lambda m: self._mapping[m.group(0)], text)

    def __len__(self):
        return len(self._mapping)

    def __contains__(self, key):
        return key in self._mapping


def normalize_text(line: Union[str, bytes], table: NormalizationTable) -> str:
    """
    Normalizes a line of Urdu or English text.

    Steps: canonical composition (NFC), punctuation mapping, removal of ZWNJ/ZWJ at
    word boundaries (word-internal ones are kept), a second NFC pass, and collapsing
    of whitespace runs to single spaces with the ends stripped.

    Args:
        line (str | bytes): The text. Bytes are decoded strictly as UTF-8.
        table (NormalizationTable): The punctuation mapping to apply.

    Returns:
        str: The normalized line.

    Raises:
        TextDecodeError: If `line` is bytes and not valid UTF-8.
    """
    if isinstance(line, (bytes, bytearray)):
        line = decode_utf8(bytes(line))
    text = unicodedata.normalize("NFC", line)
    text = table.apply(text)
    text = _BOUNDARY_ZERO_WIDTH.sub("", text)
    text = unicodedata.normalize("NFC", text)
    text = _WHITESPACE.sub(" ", text).strip()
    return text


def normalize_lines(lines: Iterable[Union[str, bytes]], table: NormalizationTable):
    """Normalizes each line; yields the results in order."""
    count = 0
    for line in lines:
        count += 1
        yield normalize_text(line, table)
    logging.debug(f"[normalizer] Normalized {count} lines.")
