# alignment/__init__.py
from .pharaoh import AlignmentLinkSet, parse_pharaoh, read_alignments, write_alignments
from .model1 import Model1Table, NULL_TOKEN, train_model1, viterbi_align
from .symmetrization import HEURISTICS, symmetrize
from .candidates import WordPair, WordPairList, extract_candidates
from .word_aligner import align_corpus
