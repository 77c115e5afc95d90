import logging
from typing import AbstractSet, Optional

from decoding.beam_decoder import BeamConfig
from decoding.ngram_lm import LanguageModel
from mining.model import TransliterationModel
from utils.exceptions import ConfigError

from .integrators.base_integrator import BaseIntegrator
from .integrators.replace_integrator import ReplaceIntegrator
from .integrators.rescore_integrator import RescoreIntegrator


class IntegratorFactory:
    """Factory class to create the integrator for an integration method."""

    def get_integrator(
        self,
        method: str,
        model: TransliterationModel,
        char_lm: LanguageModel,
        cfg: Optional[BeamConfig] = None,
        word_lm: Optional[LanguageModel] = None,
        vocab: Optional[AbstractSet[str]] = None,
    ) -> BaseIntegrator:
        """
        Get the integrator for a method name.

        Args:
            method (str): "1" or "replace" for 1-best replacement; "2" or "rescore"
                for word-LM rescoring of the n-best, which needs `word_lm`.

        Returns:
            BaseIntegrator: An instance of an integrator class.
        """
        logging.info(f"[integrator_factory][{method}] Creating integrator")

        method = str(method).lower()
        if method in ("1", "replace"):
            return ReplaceIntegrator(model, char_lm, cfg, vocab)
        elif method in ("2", "rescore"):
            if word_lm is None:
                raise ConfigError("Integration method 2 (rescore) requires a word language model.")
            return RescoreIntegrator(model, char_lm, word_lm, cfg, vocab)
        else:
            raise ConfigError(
                f"Unknown integration method '{method}'. Supported: {self.get_supported_methods()}."
            )

    @staticmethod
    def get_supported_methods():
        """
        Get a comma-separated list of supported integration methods.

        Method 3 is not an integrator: it exports a phrase table for an external decoder.
        """
        return ', '.join(['1', 'replace', '2', 'rescore'])
