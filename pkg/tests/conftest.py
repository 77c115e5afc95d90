import math

import numpy as np
import pytest

from alignment.candidates import WordPair, WordPairList
from mining.model import TransliterationModel
from mining.multigrams import DEFAULT_SHAPES, Multigram

URDU_LETTERS = "ابپتٹجچدڈرزسشکگلمنوہیع"
LATIN_LETTERS = "abcdefghijklmnopqrstuv"


class UniformLM:
    """Language model that gives every symbol the same probability."""

    def __init__(self, logprob=math.log(0.5), vocab=()):
        self.order = 2
        self._logprob = logprob
        self._vocab = set(vocab)

    def logprob_next(self, history, symbol, pad=True):
        return self._logprob

    def in_vocab(self, symbol):
        return symbol in self._vocab


@pytest.fixture
def uniform_lm():
    return UniformLM()


def _random_word(rng, alphabet, min_len, max_len):
    length = int(rng.integers(min_len, max_len + 1))
    return "".join(alphabet[int(k)] for k in rng.integers(0, len(alphabet), size=length))


def _make_planted_pairs(seed=0, n_cipher=500, n_random=500, noise=0.1,
                        src_alphabet=LATIN_LETTERS[:20], tgt_alphabet=URDU_LETTERS[:20],
                        min_len=5, max_len=8):
    """
    Candidate pairs made of cipher pairs (a fixed random letter substitution with
    each target letter replaced by a random one with probability `noise`) and
    unrelated random pairs. Returns the candidate list and the set of cipher pairs.
    """
    rng = np.random.default_rng(seed)
    permutation = rng.permutation(len(tgt_alphabet))
    cipher = {s: tgt_alphabet[int(permutation[k])] for k, s in enumerate(src_alphabet)}
    planted, entries = set(), {}
    while len(planted) < n_cipher:
        source = _random_word(rng, src_alphabet, min_len, max_len)
        target = "".join(
            tgt_alphabet[int(rng.integers(len(tgt_alphabet)))] if rng.random() < noise else cipher[c]
            for c in source
        )
        if (source, target) not in entries:
            planted.add((source, target))
            entries[(source, target)] = WordPair(source, target)
    added = 0
    while added < n_random:
        source = _random_word(rng, src_alphabet, min_len, max_len)
        target = _random_word(rng, tgt_alphabet, min_len, max_len)
        if (source, target) not in entries:
            entries[(source, target)] = WordPair(source, target)
            added += 1
    pairs = [entries[key] for key in sorted(entries)]
    return WordPairList(pairs), planted, cipher


@pytest.fixture(scope="session")
def make_planted_pairs():
    return _make_planted_pairs


def _random_model(rng, src_alphabet="abc", tgt_alphabet="xyz", shapes=DEFAULT_SHAPES, lam=0.5):
    """A model with random normalized theta over every multigram of the given alphabets."""
    segments = {
        0: [""],
        1: list(src_alphabet),
        2: [a + b for a in src_alphabet for b in src_alphabet],
    }
    targets = {
        0: [""],
        1: list(tgt_alphabet),
        2: [a + b for a in tgt_alphabet for b in tgt_alphabet],
    }
    multigrams = [Multigram(s, t) for di, dj in shapes for s in segments[di] for t in targets[dj]]
    weights = rng.random(len(multigrams)) + 0.05
    weights /= weights.sum()
    theta = {m: float(np.log(w)) for m, w in zip(multigrams, weights)}
    src_unigrams = {c: math.log(1 / len(src_alphabet)) for c in src_alphabet}
    tgt_unigrams = {c: math.log(1 / len(tgt_alphabet)) for c in tgt_alphabet}
    return TransliterationModel(theta, lam, src_unigrams, tgt_unigrams, tuple(shapes))


@pytest.fixture(scope="session")
def make_random_model():
    return _random_model
