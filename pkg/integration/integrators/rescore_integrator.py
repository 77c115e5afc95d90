import logging
from typing import AbstractSet, Optional

from decoding.beam_decoder import BeamConfig
from decoding.nbest import NBestItem
from decoding.ngram_lm import END, LanguageModel
from mining.model import TransliterationModel
from textnorm.tokenizer import SentenceLike, TokenizedSentence

from .base_integrator import BaseIntegrator, IntegrationResult, as_sentence


class RescoreIntegrator(BaseIntegrator):
    """
    RescoreIntegrator picks, for each OOV token, the n-best candidate that best
    fits its neighbours under a word language model.

    A candidate c between words `prev` and `next` scores, with the word model
    seeing only this one-word window on each side,

        log p(c | prev) + log p(next | prev c) + combined decoder score

    with `next` replaced by the end symbol at the end of the sentence. OOVs are
    resolved left to right, so `prev` is already transliterated. The decoder
    score enters unweighted: when the word model cannot tell candidates apart,
    the decoder's 1-best wins.
    The combined decoder score stands in for a weighted w_tm*tm term, with the
    weight fixed at 1.

    `lmoov` counts chosen candidates that the word model has never seen.
    """

    name = "rescore"

    def __init__(
        self,
        model: TransliterationModel,
        char_lm: LanguageModel,
        word_lm: LanguageModel,
        cfg: Optional[BeamConfig] = None,
        vocab: Optional[AbstractSet[str]] = None,
    ):
        super().__init__(model, char_lm, cfg, vocab)
        self.word_lm = word_lm

    def window_score(self, words, index: int, candidate: str) -> float:
        previous = words[index - 1:index]
        following = words[index + 1] if index + 1 < len(words) else END
        # the window starts the sentence only at index 0
        at_start = index == 0
        return (
            self.word_lm.logprob_next(previous, candidate, pad=at_start)
            + self.word_lm.logprob_next(previous + [candidate], following, pad=at_start)
        )

    def _choose(self, words, index: int, items) -> NBestItem:
        best, best_score = None, None
        for item in items:
            score = self.window_score(words, index, item.candidate) + item.combined
            if best is None or score > best_score:
                best, best_score = item, score
        return best

    def integrate(self, sentence: SentenceLike, sentence_index: int = 0) -> IntegrationResult:
        sentence = as_sentence(sentence)
        result = IntegrationResult(sentence, self.detect(sentence, sentence_index))
        for occurrence in result.occurrences:
            nbest = self.nbest(occurrence.surface)
            if nbest.failed:
                self._fail(result, occurrence)
                continue
            chosen = self._choose(result.sentence.words, occurrence.token_index, nbest.items)
            result.sentence = result.sentence.replace(occurrence.token_index, chosen.candidate)
            result.replaced += 1
            if not self.word_lm.in_vocab(chosen.candidate):
                result.lmoov += 1
                logging.debug(f"[rescore_integrator][{occurrence.surface}] '{chosen.candidate}' is unknown to the word LM.")
        return result


def method2_rescore(
    sentence: SentenceLike,
    model: TransliterationModel,
    lm_char: LanguageModel,
    lm_word: LanguageModel,
    cfg: Optional[BeamConfig] = None,
    vocab: Optional[AbstractSet[str]] = None,
) -> TokenizedSentence:
    result = RescoreIntegrator(model, lm_char, lm_word, cfg, vocab).integrate(sentence)
    if result.lmoov:
        logging.info(f"[rescore_integrator] LMOOV {result.lmoov}.")
    return result.sentence
