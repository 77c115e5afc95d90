import logging
import os
import time
from typing import Callable, Dict, List

from alignment.candidates import WordPairList, extract_candidates
from alignment.pharaoh import write_alignments
from alignment.word_aligner import align_corpus
from decoding.beam_decoder import BeamConfig, transliterate_words
from decoding.nbest import write_nbest
from decoding.ngram_lm import NGramLM, train_char_lm, train_word_lm
from evaluation.preprocessing import EvalOptions
from evaluation.report import evaluate_system, render_reports, write_sentence_scores
from integration.integrator_factory import IntegratorFactory
from integration.oov_detection import detect_oov
from integration.output_integration import OutputIntegrator
from integration.phrase_table import export_phrase_table, write_phrase_table
from mining.em_trainer import EMConfig, em_train
from mining.miner import mine_pairs
from mining.model import TransliterationModel
from textnorm.corpus import ParallelCorpus, clean_pair, corpus_stats, render_stats
from textnorm.normalizer import NormalizationTable, normalize_text
from textnorm.tokenizer import TokenizedSentence, tokenize
from utils.exceptions import ConfigError, DataFormatError, NumericError, TranslitPipelineError
from utils.file_utils import atomic_write, get_filename, read_lines, write_lines

from .config import PipelineConfig

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

COMMANDS = (
    "normalize", "clean", "stats", "align", "mine", "train-lm",
    "transliterate", "integrate", "export-pt", "evaluate",
)


def exit_code_for(error: Exception) -> int:
    if isinstance(error, ConfigError):
        return EXIT_CONFIG
    if isinstance(error, NumericError):
        return EXIT_NUMERIC
    return EXIT_DATA


class PipelineRunner:
    """
    PipelineRunner executes one pipeline stage per call of `run`.

    Each stage reads its inputs from the configured paths or from the artifacts
    of earlier stages under `work_dir`, and writes its own artifacts atomically.
    Required inputs are checked before the stage starts.

    Exit codes: 0 success, 1 configuration or usage error, 2 data or format
    error (also any unexpected exception), 3 numeric failure.
    """

    def __init__(self, cfg: PipelineConfig):
        self.cfg = cfg
        self._stages: Dict[str, Callable[[], None]] = {
            "normalize": self.normalize,
            "clean": self.clean,
            "stats": self.stats,
            "align": self.align,
            "mine": self.mine,
            "train-lm": self.train_lm,
            "transliterate": self.transliterate,
            "integrate": self.integrate,
            "export-pt": self.export_phrase_table,
            "evaluate": self.evaluate,
        }

    # Inputs each stage needs before it can start
    def required_inputs(self, command: str) -> List[str]:
        cfg = self.cfg
        clean = [cfg.artifact("clean_source"), cfg.artifact("clean_target")]
        decoding = [cfg.artifact("model"), cfg.artifact("char_lm")]
        return {
            "normalize": [cfg.source_path, cfg.target_path],
            "clean": [cfg.artifact("normalized_source"), cfg.artifact("normalized_target")],
            "stats": clean,
            "align": clean,
            "mine": [cfg.artifact("candidates")],
            "train-lm": clean + ([] if cfg.lm_full_vocab else [cfg.artifact("mined")]),
            "transliterate": decoding + [cfg.words_path or cfg.mt_output_path],
            "integrate": decoding + [cfg.mt_output_path]
            + ([cfg.artifact("word_lm")] if cfg.method == "2" else []),
            "export-pt": decoding + [cfg.mt_output_path],
            "evaluate": PipelineConfig.split_list(cfg.hyp_paths) + PipelineConfig.split_list(cfg.ref_paths),
        }[command]

    def validate(self, command: str) -> None:
        if command not in self._stages:
            raise ConfigError(f"Unknown command '{command}'. Supported: {', '.join(COMMANDS)}.")
        for path in self.required_inputs(command):
            if not path:
                raise ConfigError(f"Stage '{command}' is missing a required input path setting.")
            if not os.path.isfile(path):
                raise ConfigError(f"Stage '{command}' input not found: {path}")
        if command == "evaluate":
            hyps = PipelineConfig.split_list(self.cfg.hyp_paths)
            labels = PipelineConfig.split_list(self.cfg.hyp_labels)
            if not hyps or not PipelineConfig.split_list(self.cfg.ref_paths):
                raise ConfigError("Stage 'evaluate' needs hyp_paths and ref_paths.")
            if labels and len(labels) != len(hyps):
                raise ConfigError(f"{len(labels)} labels for {len(hyps)} hypothesis files.")

    def run(self, command: str) -> int:
        start_time = time.time()
        try:
            self.validate(command)
            os.makedirs(self.cfg.work_dir, exist_ok=True)
            logging.info(
                f"[run_pipeline][{command}] Starting (threads={self.cfg.threads}, seed={self.cfg.seed})."
            )
            self._stages[command]()
        except TranslitPipelineError as e:
            logging.error(f"[run_pipeline][{command}] {type(e).__name__}: {e}")
            return exit_code_for(e)
        except Exception as e:
            logging.error(f"[run_pipeline][{command}] Unexpected error: {e}", exc_info=True)
            return EXIT_DATA
        elapsed_time = time.time() - start_time
        logging.info(f"[run_pipeline][{command}] Finished in {elapsed_time:.2f} seconds.")
        return EXIT_OK

    # Helpers

    def _clean_corpus(self) -> ParallelCorpus:
        sources = read_lines(self.cfg.artifact("clean_source"))
        targets = read_lines(self.cfg.artifact("clean_target"))
        if len(sources) != len(targets):
            raise DataFormatError(f"Cleaned corpus sides differ: {len(sources)} vs {len(targets)} lines.")
        return ParallelCorpus(
            [(tokenize(s), tokenize(t)) for s, t in zip(sources, targets)],
            source_lang=self.cfg.source_lang,
            target_lang=self.cfg.target_lang,
        )

    def _beam_config(self) -> BeamConfig:
        cfg = self.cfg
        return BeamConfig(beam=cfg.beam, n=cfg.nbest, w_tm=cfg.w_tm, w_lm=cfg.w_lm, max_ratio=cfg.max_ratio)

    def _vocab(self):
        if not self.cfg.vocab_path:
            return None
        return {line.strip() for line in read_lines(self.cfg.vocab_path) if line.strip()}

    def _mt_output(self) -> List[TokenizedSentence]:
        return [TokenizedSentence.from_words(line.split()) for line in read_lines(self.cfg.mt_output_path)]

    def _oov_words(self) -> List[str]:
        vocab = self._vocab()
        words, seen = [], set()
        for index, sentence in enumerate(self._mt_output()):
            for occurrence in detect_oov(sentence, vocab, index):
                if occurrence.surface not in seen:
                    seen.add(occurrence.surface)
                    words.append(occurrence.surface)
        logging.info(f"[run_pipeline] {len(words)} distinct OOV words in {get_filename(self.cfg.mt_output_path)}.")
        return words

    # Stages

    def normalize(self) -> None:
        cfg = self.cfg
        table = NormalizationTable.default()
        sources = read_lines(cfg.source_path)
        targets = read_lines(cfg.target_path)
        if len(sources) != len(targets):
            raise DataFormatError(
                f"Line count mismatch: {get_filename(cfg.source_path)} has {len(sources)} lines, "
                f"{get_filename(cfg.target_path)} has {len(targets)}."
            )
        for lines, key in ((sources, "normalized_source"), (targets, "normalized_target")):
            write_lines(cfg.artifact(key), [tokenize(normalize_text(line, table)).join() for line in lines])
        logging.info(f"[run_pipeline][normalize] Normalized {len(sources)} sentence pairs.")

    def clean(self) -> None:
        cfg = self.cfg
        sources = read_lines(cfg.artifact("normalized_source"))
        targets = read_lines(cfg.artifact("normalized_target"))
        if len(sources) != len(targets):
            raise DataFormatError(f"Normalized corpus sides differ: {len(sources)} vs {len(targets)} lines.")
        kept_sources, kept_targets = [], []
        for src_line, tgt_line in zip(sources, targets):
            if clean_pair(tokenize(src_line), tokenize(tgt_line), cfg.min_len, cfg.max_len):
                kept_sources.append(src_line)
                kept_targets.append(tgt_line)
        write_lines(cfg.artifact("clean_source"), kept_sources)
        write_lines(cfg.artifact("clean_target"), kept_targets)
        logging.info(
            f"[run_pipeline][clean] Kept {len(kept_sources)} of {len(sources)} pairs "
            f"within [{cfg.min_len}, {cfg.max_len}] tokens."
        )

    def stats(self) -> None:
        table = render_stats(corpus_stats(self._clean_corpus()))
        write_lines(self.cfg.artifact("stats"), table.split("\n"))
        print(table)

    def align(self) -> None:
        cfg = self.cfg
        corpus = self._clean_corpus()
        alignments = align_corpus(corpus, cfg.align_iterations, cfg.heuristic, cfg.threads)
        write_alignments(cfg.artifact("alignments"), alignments)
        candidates = extract_candidates(corpus, alignments, cfg.min_word_chars)
        candidates.write_candidates(cfg.artifact("candidates"))
        logging.info(f"[run_pipeline][align] {len(candidates)} candidate word pairs.")

    def mine(self) -> None:
        cfg = self.cfg
        candidates = WordPairList.read(cfg.artifact("candidates"))
        em_config = EMConfig(
            max_iterations=cfg.em_iterations,
            tolerance=cfg.em_tolerance,
            weight_by_posterior=cfg.weight_by_posterior,
            max_word_length=cfg.max_word_length,
            threads=cfg.threads,
        )
        result = em_train(candidates, em_config)
        result.model.save(cfg.artifact("model"))
        mined = mine_pairs(result.model, candidates, cfg.threshold, cfg.threads)
        mined.write_mined(cfg.artifact("mined"))

    def train_lm(self) -> None:
        cfg = self.cfg
        corpus = self._clean_corpus()
        if cfg.lm_full_vocab:
            words = sorted({w for sentence in corpus.targets for w in sentence.words})
        else:
            words = sorted({pair.target for pair in WordPairList.read(cfg.artifact("mined"), mined=True)})
        train_char_lm(words, cfg.lm_order, cfg.lm_discount).save(cfg.artifact("char_lm"))
        train_word_lm([s.words for s in corpus.targets], cfg.word_lm_order, cfg.lm_discount).save(
            cfg.artifact("word_lm")
        )

    def transliterate(self) -> None:
        cfg = self.cfg
        if cfg.words_path:
            words = list(dict.fromkeys(w.strip() for w in read_lines(cfg.words_path) if w.strip()))
        else:
            words = self._oov_words()
        model = TransliterationModel.load(cfg.artifact("model"))
        char_lm = NGramLM.load(cfg.artifact("char_lm"))
        nbest_lists = transliterate_words(model, char_lm, words, self._beam_config(), cfg.threads)
        failed = sum(1 for n in nbest_lists if n.failed)
        rows = write_nbest(cfg.artifact("nbest"), nbest_lists)
        logging.info(f"[run_pipeline][transliterate] {len(words)} words, {rows} n-best rows, {failed} failed.")

    def integrate(self) -> None:
        cfg = self.cfg
        if cfg.method == "3":
            self.export_phrase_table()
            return
        model = TransliterationModel.load(cfg.artifact("model"))
        char_lm = NGramLM.load(cfg.artifact("char_lm"))
        word_lm = NGramLM.load(cfg.artifact("word_lm")) if cfg.method == "2" else None
        integrator = IntegratorFactory().get_integrator(
            cfg.method, model, char_lm, self._beam_config(), word_lm=word_lm, vocab=self._vocab()
        )
        sentences, errors, warnings, lmoov = OutputIntegrator(integrator).integrate_sentences(
            self._mt_output(), cfg.threads
        )
        write_lines(cfg.artifact("integrated"), [s.join() for s in sentences])
        if cfg.method == "2":
            logging.info(f"[run_pipeline][integrate] LMOOV {lmoov}.")
        if errors:
            raise DataFormatError(f"{len(errors)} sentences failed to integrate; first: {errors[0]}")

    def export_phrase_table(self) -> None:
        cfg = self.cfg
        model = TransliterationModel.load(cfg.artifact("model"))
        char_lm = NGramLM.load(cfg.artifact("char_lm"))
        entries = export_phrase_table(model, char_lm, self._oov_words(), cfg.nbest, self._beam_config())
        write_phrase_table(cfg.artifact("phrase_table"), entries)

    def evaluate(self) -> None:
        cfg = self.cfg
        options = EvalOptions(
            lowercase=cfg.lowercase,
            strip_punctuation=cfg.strip_punctuation,
            max_n=cfg.max_n,
            meteor_penalty=cfg.meteor_penalty,
            ter_shifts=cfg.ter_shifts,
        )
        hyp_paths = PipelineConfig.split_list(cfg.hyp_paths)
        labels = PipelineConfig.split_list(cfg.hyp_labels) or [get_filename(p) for p in hyp_paths]
        reference_sets = [read_lines(p) for p in PipelineConfig.split_list(cfg.ref_paths)]
        refs = list(zip(*reference_sets))
        if any(len(r) != len(refs) for r in reference_sets):
            raise DataFormatError("Reference files have different line counts.")

        reports = []
        for path, label in zip(hyp_paths, labels):
            hyps = read_lines(path)
            if len(hyps) != len(refs):
                raise DataFormatError(f"{get_filename(path)} has {len(hyps)} lines for {len(refs)} references.")
            report = evaluate_system(hyps, refs, label, options, cfg.threads)
            write_sentence_scores(os.path.join(cfg.work_dir, f"scores.{label}.tsv"), report)
            reports.append(report)
        table = render_reports(reports, cfg.report_format)
        with atomic_write(cfg.artifact("report")) as handle:
            handle.write(table + "\n")
        print(table)
