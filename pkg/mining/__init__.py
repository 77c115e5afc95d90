# mining/__init__.py
from .em_trainer import EMConfig, EMResult, em_train
from .lattice import AlignmentLattice
from .miner import DEFAULT_THRESHOLD, mine_pairs
from .model import (
    NONTRANSLIT_FLOOR,
    TransliterationModel,
    joint_logprob,
    joint_prob,
    nontranslit_logprob,
    nontranslit_prob,
    posterior_translit,
)
from .multigrams import DEFAULT_SHAPES, Multigram, enumerate_alignments
