import logging
import time
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from tabulate import tabulate

from textnorm.tokenizer import SentenceLike
from utils.exceptions import ConfigError, DataFormatError
from utils.file_utils import atomic_write
from utils.parallel import ordered_map

from .bleu import bleu_from_counts, closest_ref_length, sentence_bleu
from .meteor import MeteorStats, meteor_from_stats, meteor_stats
from .preprocessing import DEFAULT_OPTIONS, EvalOptions, clipped_counts, prepare
from .prf import overlap_counts, prf_from_counts
from .ter import ter_edits

REPORT_FORMATS = ("plain", "tsv")


@dataclass(frozen=True)
class SentenceScores:
    bleu: float
    meteor: float
    ter: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class CorpusScores:
    bleu: float
    meteor: float
    ter: float
    precision: float
    recall: float
    f1: float
    unigram_precision: float


@dataclass
class EvalReport:
    """Sentence-level and corpus-level scores of one system."""
    label: str
    corpus: CorpusScores
    sentences: List[SentenceScores] = field(default_factory=list)


@dataclass
class _SentenceStatistics:
    scores: SentenceScores
    matches: List[int]
    totals: List[int]
    hyp_length: int
    ref_length: int
    meteor: MeteorStats
    edits: int
    average_ref_length: float
    overlap: Tuple[int, int, int]


def _score_sentence(hyp: SentenceLike, refs: Sequence[SentenceLike], options: EvalOptions) -> _SentenceStatistics:
    if not refs:
        raise DataFormatError("Every hypothesis needs at least one reference.")
    hyp_words = prepare(hyp, options)
    ref_words = [prepare(r, options) for r in refs]
    prepared = _prepared_options(options)
    matches, totals = [], []
    for n in range(1, options.max_n + 1):
        m, t = clipped_counts(hyp_words, ref_words, n)
        matches.append(m)
        totals.append(t)
    # METEOR, precision and recall are single-reference measures: the first reference is used.
    meteor = meteor_stats(hyp_words, ref_words[0], prepared)
    edits, average_ref_length = ter_edits(hyp_words, ref_words, prepared)
    overlap = overlap_counts(hyp_words, ref_words[0], prepared)
    precision, recall, f1 = prf_from_counts(*overlap)
    scores = SentenceScores(
        bleu=sentence_bleu(hyp_words, ref_words, prepared),
        meteor=meteor_from_stats(meteor, options),
        ter=edits / average_ref_length,
        precision=precision,
        recall=recall,
        f1=f1,
    )
    return _SentenceStatistics(
        scores, matches, totals, len(hyp_words),
        closest_ref_length(len(hyp_words), [len(r) for r in ref_words]),
        meteor, edits, average_ref_length, overlap,
    )


def _prepared_options(options: EvalOptions) -> EvalOptions:
    """Options for token lists that already went through `prepare`."""
    return EvalOptions(
        lowercase=False,
        strip_punctuation=False,
        max_n=options.max_n,
        meteor_penalty=options.meteor_penalty,
        ter_shifts=options.ter_shifts,
    )


def evaluate_system(
    hyps: Sequence[SentenceLike],
    refs: Sequence[Sequence[SentenceLike]],
    label: str,
    options: EvalOptions = DEFAULT_OPTIONS,
    threads: int = 1,
) -> EvalReport:
    """
    Scores a system's output against references. `refs[i]` lists the references
    of `hyps[i]`.

    Corpus values aggregate sentence statistics: BLEU from summed n-gram counts and
    lengths (unsmoothed), METEOR from summed matches, lengths and chunks, TER as
    total edits over total average reference length, precision, recall and F1
    micro-averaged, and the unigram precision as total clipped unigram matches over
    total hypothesis words.
    """
    if len(hyps) != len(refs):
        raise DataFormatError(f"{len(hyps)} hypotheses but {len(refs)} reference sets.")
    if not hyps:
        raise DataFormatError("Nothing to evaluate: no hypotheses.")
    start_time = time.time()
    statistics = ordered_map(lambda pair: _score_sentence(pair[0], pair[1], options), list(zip(hyps, refs)), threads)

    matches = [sum(s.matches[k] for s in statistics) for k in range(options.max_n)]
    totals = [sum(s.totals[k] for s in statistics) for k in range(options.max_n)]
    hyp_length = sum(s.hyp_length for s in statistics)
    ref_length = sum(s.ref_length for s in statistics)
    meteor_total = MeteorStats(0, 0, 0, 0)
    for s in statistics:
        meteor_total = meteor_total + s.meteor
    common = sum(s.overlap[0] for s in statistics)
    precision, recall, f1 = prf_from_counts(
        common, sum(s.overlap[1] for s in statistics), sum(s.overlap[2] for s in statistics)
    )
    corpus = CorpusScores(
        bleu=bleu_from_counts(matches, totals, hyp_length, ref_length, smooth=False),
        meteor=meteor_from_stats(meteor_total, options),
        ter=sum(s.edits for s in statistics) / sum(s.average_ref_length for s in statistics),
        precision=precision,
        recall=recall,
        f1=f1,
        unigram_precision=matches[0] / totals[0] if totals[0] else 0.0,
    )
    elapsed_time = time.time() - start_time
    logging.info(
        f"[report][{label}] Finished evaluating {len(hyps)} sentences in {elapsed_time:.2f} seconds. "
        f"BLEU {100 * corpus.bleu:.2f}, METEOR {100 * corpus.meteor:.2f}, TER {100 * corpus.ter:.2f}."
    )
    return EvalReport(label, corpus, [s.scores for s in statistics])


def render_reports(reports: Sequence[EvalReport], fmt: str = "plain") -> str:
    """
    One row per metric, one column per system. BLEU, METEOR and TER are shown
    scaled by 100; precision, recall, F1 and unigram precision as fractions.
    """
    if fmt not in REPORT_FORMATS:
        raise ConfigError(f"Report format must be one of {REPORT_FORMATS}, got '{fmt}'.")
    rows = [
        ["BLEU"] + [f"{100 * r.corpus.bleu:.2f}" for r in reports],
        ["METEOR"] + [f"{100 * r.corpus.meteor:.2f}" for r in reports],
        ["TER"] + [f"{100 * r.corpus.ter:.2f}" for r in reports],
        ["Precision"] + [f"{r.corpus.precision:.4f}" for r in reports],
        ["Recall"] + [f"{r.corpus.recall:.4f}" for r in reports],
        ["F1"] + [f"{r.corpus.f1:.4f}" for r in reports],
        ["Unigram precision"] + [f"{r.corpus.unigram_precision:.4f}" for r in reports],
    ]
    headers = ["Evaluation Measures"] + [r.label for r in reports]
    return tabulate(rows, headers=headers, tablefmt=fmt, disable_numparse=True)


def write_sentence_scores(path: str, report: EvalReport) -> int:
    """Per-sentence TSV: sentence number (from 1), bleu, meteor, ter, precision, recall, f1."""
    with atomic_write(path) as handle:
        handle.write("sentence\tbleu\tmeteor\tter\tprecision\trecall\tf1\n")
        for number, s in enumerate(report.sentences, start=1):
            values = "\t".join(f"{v:.6f}" for v in (s.bleu, s.meteor, s.ter, s.precision, s.recall, s.f1))
            handle.write(f"{number}\t{values}\n")
    return len(report.sentences)
