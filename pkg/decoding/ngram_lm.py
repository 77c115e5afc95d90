import logging
import math
from collections import Counter, defaultdict
from typing import Dict, Iterable, List, Optional, Protocol, Sequence, Tuple, Union

from utils.exceptions import ConfigError, EmptyInputError, ModelFormatError
from utils.file_utils import atomic_write, read_lines

BOS = "<s>"
END = "</s>"
DEFAULT_ORDER = 3
DEFAULT_DISCOUNT = 0.75
OUT_OF_ALPHABET_PROB = 1e-9
_OUT_OF_ALPHABET_LOGPROB = math.log(OUT_OF_ALPHABET_PROB)

Symbols = Union[str, Sequence[str]]


class LanguageModel(Protocol):
    """What the decoder and the integrators need from a language model."""
    order: int

    def logprob_next(self, history: Symbols, symbol: str, pad: bool = True) -> float:
        ...

    def in_vocab(self, symbol: str) -> bool:
        ...


class NGramLM:
    """
    NGramLM is an interpolated absolute-discounting n-gram model over symbols
    (characters of words, or word tokens of sentences).

    The highest order uses raw counts; each lower order uses Kneser-Ney
    continuation counts (the number of distinct symbols seen before the
    n-gram). The recursion ends in a uniform distribution over the alphabet
    plus the end symbol:

        p_m(w | h) = max(c(h w) - D, 0) / c(h) + D * N1+(h .) / c(h) * p_{m-1}(w | h')

    A context never seen at some order backs off entirely to the next lower
    order. Every conditional distribution over alphabet + end sums to 1.
    Symbols outside the alphabet get probability 1e-9.

    Attributes:
    -----------
    - order (int): n.
    - discount (float): D in [0, 1].
    - counts (dict[tuple, int]): highest-order n-gram counts, contexts padded with `<s>`.
    - alphabet (set[str]): predicted symbols seen in training, excluding the end symbol.
    """

    def __init__(self, order: int, discount: float, counts: Dict[Tuple[str, ...], int], kind: str = "char"):
        if order < 1:
            raise ConfigError(f"n-gram order must be >= 1, got {order}.")
        if not 0.0 <= discount <= 1.0:
            raise ConfigError(f"Discount must lie in [0, 1], got {discount}.")
        self.order = order
        self.discount = discount
        self.kind = kind
        self.counts = dict(counts)
        self.alphabet = {ngram[-1] for ngram in self.counts} - {END}
        self.vocab_size = len(self.alphabet) + 1
        self._tables = self._build_tables()
        self._memo: Dict[Tuple[str, Tuple[str, ...]], float] = {}

    def _build_tables(self) -> Dict[int, Dict[Tuple[str, ...], Tuple[Dict[str, int], int]]]:
        """Per order m: context (length m - 1) -> (symbol counts, total)."""
        by_order: Dict[int, Dict[Tuple[str, ...], Counter]] = {self.order: defaultdict(Counter)}
        for ngram, count in self.counts.items():
            by_order[self.order][ngram[:-1]][ngram[-1]] += count
        higher_types = set(self.counts)
        for m in range(self.order - 1, 0, -1):
            table: Dict[Tuple[str, ...], Counter] = defaultdict(Counter)
            for ngram in higher_types:
                suffix = ngram[1:]
                table[suffix[:-1]][suffix[-1]] += 1
            by_order[m] = table
            higher_types = {ngram[1:] for ngram in higher_types}
        return {
            m: {context: (dict(symbols), sum(symbols.values())) for context, symbols in table.items()}
            for m, table in by_order.items()
        }

    def _prob(self, symbol: str, context: Tuple[str, ...]) -> float:
        m = len(context) + 1
        lower = self._prob(symbol, context[1:]) if m > 1 else 1.0 / self.vocab_size
        entry = self._tables[m].get(context)
        if entry is None:
            return lower
        symbols, total = entry
        count = symbols.get(symbol, 0)
        return max(count - self.discount, 0.0) / total + self.discount * len(symbols) / total * lower

    def _context(self, history: Symbols, pad: bool) -> Tuple[str, ...]:
        width = self.order - 1
        if width == 0:
            return ()
        tail = tuple(history[-width:]) if len(history) else ()
        if not pad:
            return tail
        return (BOS,) * (width - len(tail)) + tail

    def logprob_next(self, history: Symbols, symbol: str, pad: bool = True) -> float:
        """
        log p(symbol | last n-1 symbols of history). With `pad` the history is taken
        to start the sequence and is padded with `<s>`; without it a short history
        is used as a shorter context.
        """
        if symbol != END and symbol not in self.alphabet:
            return _OUT_OF_ALPHABET_LOGPROB
        context = self._context(history, pad)
        key = (symbol, context)
        cached = self._memo.get(key)
        if cached is None:
            cached = math.log(self._prob(symbol, context))
            self._memo[key] = cached
        return cached

    def prob_next(self, history: Symbols, symbol: str) -> float:
        return math.exp(self.logprob_next(history, symbol))

    def in_vocab(self, symbol: str) -> bool:
        return symbol in self.alphabet

    def contexts(self) -> List[Tuple[str, ...]]:
        """Highest-order contexts observed in training."""
        return sorted(self._tables[self.order])

    # Serialization

    def save(self, path: str) -> None:
        with atomic_write(path) as handle:
            handle.write(f"N\torder={self.order}\tdiscount={self.discount!r}\tkind={self.kind}\n")
            for ngram, count in sorted(self.counts.items()):
                handle.write("\t".join(["G", str(count), *ngram]) + "\n")

    @classmethod
    def load(cls, path: str) -> "NGramLM":
        lines = read_lines(path)
        if not lines or not lines[0].startswith("N\t"):
            raise ModelFormatError(f"{path}: missing language model header line.")
        try:
            header = dict(item.split("=", 1) for item in lines[0].split("\t")[1:])
            order = int(header["order"])
            discount = float(header["discount"])
        except (KeyError, ValueError) as e:
            raise ModelFormatError(f"{path}: invalid header: {e}")
        counts = {}
        for number, line in enumerate(lines[1:], start=2):
            fields = line.split("\t")
            if fields[0] != "G" or len(fields) != order + 2:
                raise ModelFormatError(f"{path}:{number}: expected an order-{order} n-gram row.")
            try:
                counts[tuple(fields[2:])] = int(fields[1])
            except ValueError:
                raise ModelFormatError(f"{path}:{number}: bad count '{fields[1]}'.")
        try:
            return cls(order, discount, counts, header.get("kind", "char"))
        except ConfigError as e:
            raise ModelFormatError(f"{path}: {e}")


def _train(sequences: Iterable[Sequence[str]], order: int, discount: float, kind: str) -> NGramLM:
    if order < 1:
        raise ConfigError(f"n-gram order must be >= 1, got {order}.")
    counts: Counter = Counter()
    seen = 0
    for sequence in sequences:
        seen += 1
        padded = [BOS] * (order - 1) + list(sequence) + [END]
        for t in range(order - 1, len(padded)):
            counts[tuple(padded[t - order + 1:t + 1])] += 1
    if seen == 0:
        raise EmptyInputError("Cannot train a language model on an empty list.")
    lm = NGramLM(order, discount, dict(counts), kind)
    logging.info(
        f"[ngram_lm] Trained {kind} {order}-gram model on {seen} sequences: "
        f"{len(lm.alphabet)} symbols, {len(counts)} n-grams."
    )
    return lm


def train_char_lm(words: Sequence[str], order: int = DEFAULT_ORDER, discount: float = DEFAULT_DISCOUNT) -> NGramLM:
    """
    Character n-gram model over target words, each padded with `<s>` and closed by `</s>`.

    Example:
        >>> lm = train_char_lm(["ab", "ab", "ac"], order=2, discount=0.0)
        >>> round(lm.prob_next("a", "b"), 4)
        0.6667
    """
    return _train(words, order, discount, "char")


def train_word_lm(
    sentences: Sequence[Sequence[str]], order: int = DEFAULT_ORDER, discount: float = DEFAULT_DISCOUNT
) -> NGramLM:
    """Word n-gram model over tokenized sentences."""
    return _train(sentences, order, discount, "word")


def lm_logprob(lm: LanguageModel, s: Symbols, include_end: bool = True, history: Optional[Symbols] = None) -> float:
    """
    Chain-rule log probability of `s`, closed by the end symbol unless `include_end` is off.

    Only the prefix score (include_end=False) is monotone: appending a symbol
    never increases it. The closed score of a longer string can exceed that of
    its prefix.
    """
    symbols: List[str] = list(history) if history is not None else []
    total = 0.0
    for symbol in s:
        total += lm.logprob_next(symbols, symbol)
        symbols.append(symbol)
    if include_end:
        total += lm.logprob_next(symbols, END)
    return total
