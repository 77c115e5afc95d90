import functools

import numpy as np
import pytest

from evaluation import (
    EvalOptions,
    align_unigrams,
    bleu,
    brevity_penalty,
    clipped_ngram_precision,
    count_chunks,
    edit_distance,
    evaluate_system,
    meteor,
    prepare,
    prf,
    render_reports,
    sentence_bleu,
    ter,
    ter_edits,
    write_sentence_scores,
)
from evaluation.bleu import closest_ref_length
from utils.exceptions import ConfigError, DataFormatError, EmptyInputError

WORDS = ["the", "army", "weapons", "two", "weeks", "will", "give", "in", "of", "a"]


def random_sentence(rng, min_len=1, max_len=10):
    length = int(rng.integers(min_len, max_len + 1))
    return " ".join(rng.choice(WORDS, size=length))


def reference_edit_distance(hyp, ref):
    @functools.lru_cache(maxsize=None)
    def d(i, j):
        if i == 0 or j == 0:
            return i + j
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (hyp[i - 1] != ref[j - 1]))
    return d(len(hyp), len(ref))


class TestPreparation:
    def test_lowercase_and_strip(self):
        assert prepare("In two weeks Pakistan's weapons will give army .") == [
            "in", "two", "weeks", "pakistan's", "weapons", "will", "give", "army"
        ]

    def test_options_off(self):
        options = EvalOptions(lowercase=False, strip_punctuation=False)
        assert prepare("Army .", options) == ["Army", "."]

    @pytest.mark.parametrize("kwargs", [{"max_n": 0}, {"meteor_penalty": "quadratic"}])
    def test_invalid_options(self, kwargs):
        with pytest.raises(ConfigError):
            EvalOptions(**kwargs)


class TestBLEU:
    REFERENCES = [
        "The Pakistani weapons are to be handed over to the army within two weeks .",
        "The Pakistani weapons will be surrendered to the army in two weeks .",
    ]

    def test_worked_unigram_example(self):
        hyp = "In two weeks Pakistan's weapons will give army ."
        assert clipped_ngram_precision(hyp, self.REFERENCES, n=1) == pytest.approx(0.75)

    def test_clipping(self):
        assert clipped_ngram_precision("the the the", ["the cat"]) == pytest.approx(1 / 3)
        assert clipped_ngram_precision("the the", ["the cat", "the the dog"]) == 1.0

    def test_empty_hypothesis(self):
        assert clipped_ngram_precision("", ["the cat"]) == 0.0
        with pytest.raises(DataFormatError):
            clipped_ngram_precision("the", [])

    def test_identity(self):
        hyps = ["a b c d e", "the army will give weapons"]
        assert bleu(hyps, [[h] for h in hyps]) == pytest.approx(1.0)

    def test_brevity_penalty(self):
        assert bleu(["a b c d"], [["a b c d e"]]) == pytest.approx(0.7788, abs=1e-4)
        assert brevity_penalty(5, 4) == 1.0
        assert brevity_penalty(0, 4) == 0.0

    def test_closest_reference_length(self):
        assert closest_ref_length(4, [3, 5]) == 3
        assert closest_ref_length(4, [6, 5]) == 5

    def test_missing_four_grams(self):
        assert bleu(["a b c"], [["a b c"]]) == 0.0
        assert sentence_bleu("a b c", ["a b c"]) == pytest.approx(1.0)

    def test_order_sensitivity(self):
        ref = [["a b c d"]]
        assert clipped_ngram_precision("d c b a", ref[0]) == clipped_ngram_precision("a b c d", ref[0]) == 1.0
        assert bleu(["d c b a"], ref) < bleu(["a b c d"], ref)

    def test_length_mismatch(self):
        with pytest.raises(DataFormatError):
            bleu(["a"], [])

    def test_matches_sacrebleu(self):
        sacrebleu = pytest.importorskip("sacrebleu")
        rng = np.random.default_rng(2)
        for _ in range(10):
            refs, hyps = [], []
            for _ in range(20):
                ref = random_sentence(rng, 5, 12).split()
                hyp = list(ref)
                for k in range(len(hyp)):
                    if rng.random() < 0.2:
                        hyp[k] = str(rng.choice(WORDS))
                if rng.random() < 0.3:
                    hyp = hyp[:-1]
                refs.append(" ".join(ref))
                hyps.append(" ".join(hyp))
            expected = sacrebleu.corpus_bleu(hyps, [refs], smooth_method="none", tokenize="none").score
            assert 100 * bleu(hyps, [[r] for r in refs]) == pytest.approx(expected, rel=1e-9, abs=1e-9)


class TestMETEOR:
    def test_identity(self):
        assert meteor("a b c d e", "a b c d e") == pytest.approx(0.9)
        for text in ("a", "a b", "the army will give weapons in two weeks"):
            assert meteor(text, text) == pytest.approx(1 - 0.5 / len(text.split()))

    def test_fragmented(self):
        assert meteor("a b x y", "a b c d") == pytest.approx(0.375)

    def test_no_matches(self):
        assert meteor("x y", "a b") == 0.0

    def test_cubic_penalty(self):
        options = EvalOptions(meteor_penalty="cubic")
        assert meteor("a b x y", "a b c d", options) == pytest.approx(0.5 * (1 - 0.5 * 0.125))

    def test_alignment_prefers_continuation(self):
        assert align_unigrams(["a", "b"], ["b", "a", "b"]) == [1, 2]
        assert count_chunks([1, 2]) == 1
        assert count_chunks([0, None, 2, 1]) == 3


class TestTER:
    def test_single_substitution(self):
        assert ter("a b c", "a x c") == pytest.approx(1 / 3)

    def test_identity(self):
        assert ter("the army will give", "the army will give") == 0.0

    def test_empty_reference(self):
        with pytest.raises(EmptyInputError):
            ter("a b", "")
        with pytest.raises(EmptyInputError):
            ter_edits("a b", [])

    def test_matches_reference_dynamic_program(self):
        rng = np.random.default_rng(13)
        for _ in range(300):
            hyp = random_sentence(rng, 0, 8).split()
            ref = random_sentence(rng, 1, 8).split()
            assert edit_distance(hyp, ref) == reference_edit_distance(tuple(hyp), tuple(ref))
            edits, _ = ter_edits(hyp, [ref])
            assert edits <= max(len(hyp), len(ref))

    def test_shifts_never_cost_more(self):
        rng = np.random.default_rng(21)
        shifted = EvalOptions(ter_shifts=True)
        for _ in range(100):
            hyp, ref = random_sentence(rng, 1, 8), random_sentence(rng, 1, 8)
            assert ter(hyp, ref, shifted) <= ter(hyp, ref)

    def test_block_shift(self):
        hyp, ref = "d e f a b c", "a b c d e f"
        assert ter(hyp, ref) == pytest.approx(1.0)
        assert ter(hyp, ref, EvalOptions(ter_shifts=True)) == pytest.approx(1 / 6)

    def test_best_of_references(self):
        edits, average = ter_edits("a b c", ["a x c", "a b c d e"])
        assert (edits, average) == (1, 4.0)


class TestPRF:
    def test_sets(self):
        assert prf("a b c", "a b d") == pytest.approx((2 / 3, 2 / 3, 2 / 3))

    def test_multisets(self):
        precision, recall, _ = prf("a a b", "a b b")
        assert (precision, recall) == pytest.approx((2 / 3, 2 / 3))

    def test_identity_and_empty(self):
        assert prf("a b", "a b") == (1.0, 1.0, 1.0)
        assert prf("", "a b") == (0.0, 0.0, 0.0)


class TestBounds:
    def test_random_pairs(self):
        rng = np.random.default_rng(5)
        cubic = EvalOptions(meteor_penalty="cubic")
        for _ in range(300):
            hyp, ref = random_sentence(rng, 0, 10), random_sentence(rng, 1, 10)
            assert 0.0 <= bleu([hyp], [[ref]]) <= 1.0
            assert 0.0 <= sentence_bleu(hyp, [ref]) <= 1.0
            assert 0.0 <= meteor(hyp, ref) <= 1.0
            assert 0.0 <= meteor(hyp, ref, cubic) <= 1.0
            assert ter(hyp, ref) >= 0.0
            assert all(0.0 <= v <= 1.0 for v in prf(hyp, ref))


class TestReport:
    HYPS = ["In two weeks Pakistan's weapons will give army .", "the army will give weapons"]
    REFS = [TestBLEU.REFERENCES, ["the army will give weapons"]]

    def test_evaluate_and_render(self):
        baseline = evaluate_system(self.HYPS, self.REFS, "baseline")
        perfect = evaluate_system(self.REFS[1] * 2, [self.REFS[1]] * 2, "with transliteration")
        assert len(baseline.sentences) == 2
        assert baseline.corpus.unigram_precision == pytest.approx(11 / 13)
        assert perfect.corpus.bleu == pytest.approx(1.0)
        assert perfect.corpus.ter == 0.0
        table = render_reports([baseline, perfect])
        assert "Evaluation Measures" in table
        assert "baseline" in table and "with transliteration" in table
        assert "100.00" in table
        tsv = render_reports([baseline], fmt="tsv")
        assert tsv.splitlines()[0].split("\t")[0].strip() == "Evaluation Measures"

    def test_unknown_format(self):
        report = evaluate_system(self.HYPS[1:], self.REFS[1:], "baseline")
        with pytest.raises(ConfigError):
            render_reports([report], fmt="latex")

    def test_threads_give_same_report(self):
        assert evaluate_system(self.HYPS, self.REFS, "x", threads=1) == evaluate_system(
            self.HYPS, self.REFS, "x", threads=2
        )

    def test_sentence_scores_file(self, tmp_path):
        report = evaluate_system(self.HYPS, self.REFS, "baseline")
        path = tmp_path / "scores.tsv"
        assert write_sentence_scores(str(path), report) == 2
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "sentence\tbleu\tmeteor\tter\tprecision\trecall\tf1"
        assert lines[2].startswith("2\t1.000000\t")

    def test_mismatched_lengths(self):
        with pytest.raises(DataFormatError):
            evaluate_system(self.HYPS, self.REFS[:1], "baseline")
