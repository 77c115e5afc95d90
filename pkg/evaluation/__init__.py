# evaluation/__init__.py
from .preprocessing import EvalOptions, prepare
from .bleu import bleu, bleu_from_counts, brevity_penalty, clipped_ngram_precision, sentence_bleu
from .meteor import meteor, meteor_stats, align_unigrams, count_chunks
from .ter import edit_distance, ter, ter_edits
from .prf import prf
from .report import CorpusScores, EvalReport, SentenceScores, evaluate_system, render_reports, write_sentence_scores
