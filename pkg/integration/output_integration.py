import logging
import time
from typing import List, Sequence, Tuple

from textnorm.tokenizer import SentenceLike, TokenizedSentence
from utils.parallel import ordered_map

from .integrators.base_integrator import BaseIntegrator, IntegrationResult, as_sentence


class OutputIntegrator:
    """
    OutputIntegrator runs an integration strategy over a batch of MT output sentences.

    Integration Process:
    --------------------
    Each sentence is handled independently by the integrator the caller built with
    `IntegratorFactory`; sentences can be processed on several threads and come back
    in input order.

    - Per-sentence isolation: an exception on one sentence is recorded as an error
      and that sentence is returned unchanged; the rest of the batch proceeds.
    - Warnings: words the decoder could not transliterate are reported per sentence.

    Logging:
    --------
    - Logs the time taken, the number of sentences and replacements, the LMOOV
      total, and the number of errors and warnings.

    Returns:
    --------
    The `integrate_sentences` method returns a tuple containing:
    - sentences: The integrated sentences, one per input sentence.
    - errors: A list of error messages.
    - warnings: A list of warning messages.
    - lmoov: Total count of chosen candidates unknown to the word language model.
    """

    def __init__(self, integrator: BaseIntegrator):
        self.integrator = integrator

    def _error_message(self, exception=None, sentence_index=None):
        """Generate an error message based on the error type."""
        error_message = "An error occurred while integrating the sentence."
        if exception is not None:
            error_message += f" Exception: {str(exception)}"
        where = f"[{sentence_index}]" if sentence_index is not None else ""
        logging.error(f"[output_integration]{where} Error: {error_message}")
        return error_message

    def _integrate_one(self, indexed: Tuple[int, SentenceLike]):
        index, sentence = indexed
        try:
            return self.integrator.integrate(sentence, index), None
        except Exception as e:
            return IntegrationResult(as_sentence(sentence)), self._error_message(e, index)

    def integrate_sentences(
        self, sentences: Sequence[SentenceLike], threads: int = 1
    ) -> Tuple[List[TokenizedSentence], List[str], List[str], int]:
        """
        Integrates transliterations into every sentence of the batch.

        Example:
            >>> integrator = IntegratorFactory().get_integrator("1", model, char_lm)
            >>> sentences, errors, warnings, lmoov = OutputIntegrator(integrator).integrate_sentences(lines)
        """
        start_time = time.time()
        logging.info(f"[output_integration][{self.integrator.name}] Integrating {len(sentences)} sentences.")

        outcomes = ordered_map(self._integrate_one, list(enumerate(sentences)), threads)
        integrated, errors, warnings = [], [], []
        replaced = lmoov = 0
        for result, error in outcomes:
            integrated.append(result.sentence)
            warnings.extend(result.warnings)
            replaced += result.replaced
            lmoov += result.lmoov
            if error:
                errors.append(error)

        elapsed_time = time.time() - start_time
        logging.info(
            f"[output_integration][{self.integrator.name}] Finished integrating in {elapsed_time:.2f} seconds. "
            f"{len(integrated)} sentences. {replaced} replacements. LMOOV {lmoov}. "
            f"{len(errors)} errors. {len(warnings)} warnings."
        )
        return integrated, errors, warnings, lmoov
