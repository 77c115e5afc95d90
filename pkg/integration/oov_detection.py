from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, List, Optional, Tuple

import regex

from textnorm.tokenizer import TokenizedSentence

_SOURCE_SCRIPT = regex.compile(r"[\u0600-\u06FF]")
# UNK|word|  and  word|UNK|UNK|UNK
_PREFIX_MARKER = regex.compile(r"^UNK\|(.+)\|$")
_SUFFIX_MARKER = regex.compile(r"^(.+?)(?:\|UNK)+$")


class OOVReason(str, Enum):
    SOURCE_SCRIPT = "source-script"
    NOT_IN_VOCAB = "not-in-vocab"
    DECODER_MARKER = "decoder-marker"


@dataclass(frozen=True)
class OOVOccurrence:
    """
    An untranslated token in MT output. `raw` is the token exactly as it appears
    in the sentence; `surface` is the word to transliterate, which differs from
    `raw` only for decoder-marked tokens.
    """
    sentence_index: int
    token_index: int
    surface: str
    reason: OOVReason
    raw: str


def unwrap_marker(token: str) -> Optional[str]:
    """The word inside a decoder unknown-word marker, or None if the token carries no marker."""
    for pattern in (_PREFIX_MARKER, _SUFFIX_MARKER):
        match = pattern.match(token)
        if match:
            return match.group(1)
    return None


def has_source_script(token: str) -> bool:
    return bool(_SOURCE_SCRIPT.search(token))


def _classify(token, vocab: Optional[AbstractSet[str]]) -> Optional[Tuple[str, OOVReason]]:
    inner = unwrap_marker(token.surface)
    if inner:
        return inner, OOVReason.DECODER_MARKER
    if has_source_script(token.surface):
        return token.surface, OOVReason.SOURCE_SCRIPT
    if vocab is not None and token.is_word and token.surface not in vocab and token.surface.lower() not in vocab:
        return token.surface, OOVReason.NOT_IN_VOCAB
    return None


def detect_oov(
    sentence: TokenizedSentence,
    vocab: Optional[AbstractSet[str]] = None,
    sentence_index: int = 0,
) -> List[OOVOccurrence]:
    """
    Finds the tokens of an MT output sentence that were left untranslated.

    Rules, first match wins:
    - decoder-marker: `UNK|word|` or `word|UNK|UNK|UNK`; the word inside is reported.
    - source-script: the token contains a codepoint of the Arabic block U+0600-U+06FF.
    - not-in-vocab: with a vocabulary, a word token absent from it (exact or lowercased).

    Example:
        >>> [o.token_index for o in detect_oov(TokenizedSentence.from_words("I read کتاب".split()))]
        [2]
    """
    occurrences = []
    for index, token in enumerate(sentence):
        found = _classify(token, vocab)
        if found is not None:
            surface, reason = found
            occurrences.append(OOVOccurrence(sentence_index, index, surface, reason, token.surface))
    return occurrences
