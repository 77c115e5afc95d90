import logging
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, List, Optional

from decoding.beam_decoder import BeamConfig, transliterate
from decoding.nbest import NBestList
from decoding.ngram_lm import LanguageModel
from mining.model import TransliterationModel
from textnorm.tokenizer import SentenceLike, TokenizedSentence, as_words

from ..oov_detection import OOVOccurrence, detect_oov


@dataclass
class IntegrationResult:
    sentence: TokenizedSentence
    occurrences: List[OOVOccurrence] = field(default_factory=list)
    replaced: int = 0
    lmoov: int = 0
    warnings: List[str] = field(default_factory=list)


def as_sentence(sentence: SentenceLike) -> TokenizedSentence:
    if isinstance(sentence, TokenizedSentence):
        return sentence
    return TokenizedSentence.from_words(as_words(sentence))


class BaseIntegrator:
    """
    BaseIntegrator is the base class of the strategies that put transliterations
    of OOV words back into MT output. It owns what every strategy shares:

    - OOV detection: `detect` applies the detection rules with the optional
      target vocabulary.
    - Decoding: `nbest` runs the beam decoder on an OOV word, caching results per
      surface form so a word repeated across a batch is decoded once.
    - Failure handling: `_fail` records and logs a warning for a word the decoder
      could not transliterate; the token stays unchanged.

    Subclasses implement `integrate`, which returns an IntegrationResult whose
    sentence has the same number of tokens as the input, and differs only at
    OOV positions.
    """

    name = "base"

    def __init__(
        self,
        model: TransliterationModel,
        char_lm: LanguageModel,
        cfg: Optional[BeamConfig] = None,
        vocab: Optional[AbstractSet[str]] = None,
    ):
        self.model = model
        self.char_lm = char_lm
        self.cfg = cfg or BeamConfig()
        self.vocab = vocab
        self._cache: Dict[str, NBestList] = {}

    def detect(self, sentence: TokenizedSentence, sentence_index: int = 0) -> List[OOVOccurrence]:
        return detect_oov(sentence, self.vocab, sentence_index)

    def nbest(self, word: str) -> NBestList:
        cached = self._cache.get(word)
        if cached is None:
            cached = transliterate(self.model, self.char_lm, word, self.cfg)
            self._cache[word] = cached
        return cached

    def _fail(self, result: IntegrationResult, occurrence: OOVOccurrence) -> None:
        message = (
            f"Sentence {occurrence.sentence_index}, token {occurrence.token_index}: "
            f"no transliteration for '{occurrence.surface}'; token left unchanged."
        )
        logging.warning(f"[{self.name}_integrator] {message}")
        result.warnings.append(message)

    def integrate(self, sentence: SentenceLike, sentence_index: int = 0) -> IntegrationResult:
        """Abstract method to be implemented by subclasses."""
        raise NotImplementedError
