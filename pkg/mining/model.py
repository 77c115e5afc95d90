import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Tuple

from utils.exceptions import ModelFormatError
from utils.file_utils import atomic_write, read_lines

from .lattice import AlignmentLattice
from .multigrams import (
    DEFAULT_SHAPES,
    NEG_INF,
    Multigram,
    Shape,
    format_shapes,
    logaddexp,
    parse_shapes,
    safe_log,
)

NONTRANSLIT_FLOOR = 1e-9
_LOG_FLOOR = math.log(NONTRANSLIT_FLOOR)


@dataclass(frozen=True)
class TransliterationModel:
    """
    Mixture of a multigram transliteration model and a character unigram
    non-transliteration model. All probabilities are stored as natural logs.

    Attributes:
    -----------
    - theta (dict[Multigram, float]): log probability of each multigram.
    - lam (float): prior probability that a pair is a transliteration.
    - src_unigrams, tgt_unigrams (dict[str, float]): character log probabilities.
    - shapes (tuple): multigram shapes the lattice uses.
    - unseen_logprob (float): log probability of a multigram absent from theta;
      -inf unless smoothing mass is configured.
    """
    theta: Mapping[Multigram, float]
    lam: float
    src_unigrams: Mapping[str, float]
    tgt_unigrams: Mapping[str, float]
    shapes: Tuple[Shape, ...] = DEFAULT_SHAPES
    unseen_logprob: float = field(default=NEG_INF)

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0 or math.isnan(self.lam):
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}.")

    def multigram_logprob(self, multigram: Multigram) -> float:
        return self.theta.get(multigram, self.unseen_logprob)

    @cached_property
    def by_source_segment(self) -> Dict[str, List[Tuple[str, float]]]:
        """Finite-probability target segments per source segment, most probable first."""
        index: Dict[str, List[Tuple[str, float]]] = {}
        for (src_seg, tgt_seg), logprob in self.theta.items():
            if logprob != NEG_INF:
                index.setdefault(src_seg, []).append((tgt_seg, logprob))
        for options in index.values():
            options.sort(key=lambda item: (-item[1], item[0]))
        return index

    @property
    def target_alphabet(self) -> List[str]:
        return sorted(self.tgt_unigrams)

    def normalization_sums(self) -> Tuple[float, float, float]:
        """Probability mass of theta and of both unigram distributions."""
        return (
            math.fsum(math.exp(v) for v in self.theta.values()),
            math.fsum(math.exp(v) for v in self.src_unigrams.values()),
            math.fsum(math.exp(v) for v in self.tgt_unigrams.values()),
        )

    # Serialization

    def save(self, path: str) -> None:
        header = "\t".join([
            "H",
            f"lambda={self.lam!r}",
            f"src_alphabet={len(self.src_unigrams)}",
            f"tgt_alphabet={len(self.tgt_unigrams)}",
            f"shapes={format_shapes(self.shapes)}",
        ])
        with atomic_write(path) as handle:
            handle.write(header + "\n")
            for (src_seg, tgt_seg), logprob in sorted(self.theta.items()):
                handle.write(f"T\t{src_seg}\t{tgt_seg}\t{logprob!r}\n")
            for side, unigrams in (("src", self.src_unigrams), ("tgt", self.tgt_unigrams)):
                for char, logprob in sorted(unigrams.items()):
                    handle.write(f"U\t{side}\t{char}\t{logprob!r}\n")

    @classmethod
    def load(cls, path: str) -> "TransliterationModel":
        lines = read_lines(path)
        if not lines or not lines[0].startswith("H\t"):
            raise ModelFormatError(f"{path}: missing model header line.")
        header = {}
        for item in lines[0].split("\t")[1:]:
            key, sep, value = item.partition("=")
            if not sep:
                raise ModelFormatError(f"{path}: malformed header field '{item}'.")
            header[key] = value
        try:
            lam = float(header["lambda"])
            src_size = int(header["src_alphabet"])
            tgt_size = int(header["tgt_alphabet"])
        except (KeyError, ValueError) as e:
            raise ModelFormatError(f"{path}: invalid header: {e}")
        shapes = parse_shapes(header["shapes"]) if "shapes" in header else DEFAULT_SHAPES

        theta: Dict[Multigram, float] = {}
        unigrams: Dict[str, Dict[str, float]] = {"src": {}, "tgt": {}}
        for number, line in enumerate(lines[1:], start=2):
            fields = line.split("\t")
            try:
                if fields[0] == "T" and len(fields) == 4:
                    multigram = Multigram(fields[1], fields[2])
                    if multigram.shape not in shapes:
                        raise ValueError(f"shape {multigram.shape} not allowed")
                    theta[multigram] = float(fields[3])
                elif fields[0] == "U" and len(fields) == 4 and fields[1] in unigrams:
                    unigrams[fields[1]][fields[2]] = float(fields[3])
                else:
                    raise ValueError("unrecognized row")
            except ValueError as e:
                raise ModelFormatError(f"{path}:{number}: {e}: {line!r}")
        if len(unigrams["src"]) != src_size or len(unigrams["tgt"]) != tgt_size:
            raise ModelFormatError(f"{path}: unigram rows disagree with header alphabet sizes.")
        try:
            return cls(theta, lam, unigrams["src"], unigrams["tgt"], shapes)
        except ValueError as e:
            raise ModelFormatError(f"{path}: {e}")


def joint_logprob(model: TransliterationModel, e: str, f: str) -> float:
    """log p1(e, f): log of the summed probability of every multigram alignment of the pair."""
    lattice = AlignmentLattice(e, f, model.shapes)
    return lattice.log_joint(lattice.weights(model.multigram_logprob))


def joint_prob(model: TransliterationModel, e: str, f: str) -> float:
    """
    Joint transliteration probability p1(e, f), summed over every alignment.

    Example:
        >>> model = TransliterationModel({Multigram("a", "x"): 0.0}, 1.0, {"a": 0.0}, {"x": 0.0})
        >>> joint_prob(model, "a", "x")
        1.0
    """
    return math.exp(joint_logprob(model, e, f))


def _unigram_logprob(unigrams: Mapping[str, float], word: str) -> float:
    return math.fsum(max(unigrams.get(char, _LOG_FLOOR), _LOG_FLOOR) for char in word)


def nontranslit_logprob(model: TransliterationModel, e: str, f: str) -> float:
    return _unigram_logprob(model.src_unigrams, e) + _unigram_logprob(model.tgt_unigrams, f)


def nontranslit_prob(model: TransliterationModel, e: str, f: str) -> float:
    """
    Both words generated independently, character by character. Characters that are
    unseen or stored below 1e-9 get 1e-9.
    """
    return math.exp(nontranslit_logprob(model, e, f))


def mixture_terms(model: TransliterationModel, log_p1: float, log_pntr: float) -> Tuple[float, float, float]:
    """(log lambda*p1, log (1-lambda)*p_ntr, log of their sum)."""
    translit = safe_log(model.lam) + log_p1
    other = safe_log(1.0 - model.lam) + log_pntr
    return translit, other, logaddexp(translit, other)


def posterior_from_logs(model: TransliterationModel, log_p1: float, log_pntr: float) -> float:
    translit, _, total = mixture_terms(model, log_p1, log_pntr)
    if total == NEG_INF:
        return 0.0
    return math.exp(translit - total)


def posterior_translit(model: TransliterationModel, e: str, f: str) -> float:
    """Posterior probability that (e, f) is a transliteration pair; 0 when both sub-models give 0."""
    return posterior_from_logs(model, joint_logprob(model, e, f), nontranslit_logprob(model, e, f))
