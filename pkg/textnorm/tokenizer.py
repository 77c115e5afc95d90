from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import regex

_DIGITS = "0-9٠-٩۰-۹"
_NUMBER = regex.compile(rf"^[{_DIGITS}]+$")
_PUNCTUATION = regex.compile(r"^[\p{P}\p{S}]+$")
_WORD_CHAR = rf"[^\s\p{{P}}\p{{S}}{_DIGITS}]"
# Apostrophes and hyphens are kept when they join two word runs (Pakistan's, e-mail).
_TOKEN = regex.compile(
    rf"{_WORD_CHAR}+(?:['\-]{_WORD_CHAR}+)*"
    rf"|[{_DIGITS}]+"
    r"|[\p{P}\p{S}]"
)


class TokenKind(str, Enum):
    WORD = "word"
    PUNCTUATION = "punctuation"
    NUMBER = "number"


def classify(surface: str) -> TokenKind:
    if _NUMBER.match(surface):
        return TokenKind.NUMBER
    if _PUNCTUATION.match(surface):
        return TokenKind.PUNCTUATION
    return TokenKind.WORD


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind

    def __post_init__(self):
        if not self.surface:
            raise ValueError("Token surface must be non-empty.")
        if (self.kind is TokenKind.NUMBER) != bool(_NUMBER.match(self.surface)):
            raise ValueError(f"Token {self.surface!r} kind {self.kind.value} disagrees with its digits.")

    @classmethod
    def of(cls, surface: str) -> "Token":
        return cls(surface, classify(surface))

    @property
    def is_word(self) -> bool:
        return self.kind is TokenKind.WORD


@dataclass(frozen=True)
class TokenizedSentence:
    """An immutable sequence of tokens."""
    tokens: Tuple[Token, ...] = ()

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "TokenizedSentence":
        return cls(tuple(Token.of(w) for w in words))

    @property
    def words(self) -> List[str]:
        return [t.surface for t in self.tokens]

    def join(self) -> str:
        return " ".join(self.words)

    def replace(self, index: int, surface: str) -> "TokenizedSentence":
        tokens = list(self.tokens)
        tokens[index] = Token.of(surface)
        return TokenizedSentence(tuple(tokens))

    def __len__(self):
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]


SentenceLike = Union[TokenizedSentence, Sequence[str], str]


def as_words(sentence: SentenceLike) -> List[str]:
    """Accepts a TokenizedSentence, a list of token strings or a whitespace-separated string."""
    if isinstance(sentence, TokenizedSentence):
        return sentence.words
    if isinstance(sentence, str):
        return sentence.split()
    return list(sentence)


def tokenize(line: str) -> TokenizedSentence:
    """
    Splits a normalized line into word, number and punctuation tokens.

    Whitespace separates tokens; punctuation and symbol characters are detached
    one per token; runs of ASCII or Arabic-Indic digits stay together. The result
    is stable: joining the tokens with single spaces and tokenizing again gives
    the same tokens.

    Example:
        >>> tokenize("name is Umar.").words
        ['name', 'is', 'Umar', '.']
    """
    tokens = []
    for chunk in line.split():
        for match in _TOKEN.finditer(chunk):
            tokens.append(Token.of(match.group(0)))
    return TokenizedSentence(tuple(tokens))
