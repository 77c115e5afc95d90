# decoding/__init__.py
from .ngram_lm import BOS, END, LanguageModel, NGramLM, train_char_lm, train_word_lm, lm_logprob
from .nbest import NBestItem, NBestList, read_nbest, write_nbest
from .beam_decoder import BeamConfig, transliterate, transliterate_words
from .oracle import exhaustive_oracle
