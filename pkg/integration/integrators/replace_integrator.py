from typing import AbstractSet, Optional

from decoding.beam_decoder import BeamConfig
from decoding.ngram_lm import LanguageModel
from mining.model import TransliterationModel
from textnorm.tokenizer import SentenceLike, TokenizedSentence

from .base_integrator import BaseIntegrator, IntegrationResult, as_sentence


class ReplaceIntegrator(BaseIntegrator):
    """Replaces every OOV token with its 1-best transliteration, ignoring context."""

    name = "replace"

    def integrate(self, sentence: SentenceLike, sentence_index: int = 0) -> IntegrationResult:
        sentence = as_sentence(sentence)
        result = IntegrationResult(sentence, self.detect(sentence, sentence_index))
        for occurrence in result.occurrences:
            nbest = self.nbest(occurrence.surface)
            if nbest.failed:
                self._fail(result, occurrence)
                continue
            result.sentence = result.sentence.replace(occurrence.token_index, nbest.best.candidate)
            result.replaced += 1
        return result


def method1_replace(
    sentence: SentenceLike,
    model: TransliterationModel,
    lm: LanguageModel,
    cfg: Optional[BeamConfig] = None,
    vocab: Optional[AbstractSet[str]] = None,
) -> TokenizedSentence:
    """
    Example:
        "I read کتاب" with 1-best("کتاب") = "kitab" gives "I read kitab".
    """
    return ReplaceIntegrator(model, lm, cfg, vocab).integrate(sentence).sentence
