import math

import numpy as np
import pytest

from decoding import (
    BOS,
    END,
    BeamConfig,
    NBestItem,
    NBestList,
    NGramLM,
    exhaustive_oracle,
    lm_logprob,
    read_nbest,
    train_char_lm,
    train_word_lm,
    transliterate,
    transliterate_words,
    write_nbest,
)
from mining import Multigram, TransliterationModel
from utils.exceptions import ConfigError, EmptyInputError, ModelFormatError


def random_word(rng, alphabet, min_len, max_len):
    length = int(rng.integers(min_len, max_len + 1))
    return "".join(alphabet[int(k)] for k in rng.integers(0, len(alphabet), size=length))


def one_to_one_model(pairs):
    theta = {Multigram(s, t): math.log(1.0 / len(pairs)) for s, t in pairs}
    return TransliterationModel(theta, 0.5, {}, {})


class TestNGramLM:
    def test_unsmoothed_bigram(self):
        lm = train_char_lm(["ab", "ab", "ac"], order=2, discount=0.0)
        assert lm.prob_next("a", "b") == pytest.approx(2 / 3)

    def test_discounted_bigram(self):
        lm = train_char_lm(["ab", "ab", "ac"], order=2, discount=0.75)
        assert lm.prob_next("a", "b") == pytest.approx(31 / 60)

    def test_distributions_sum_to_one(self):
        rng = np.random.default_rng(8)
        for order in (1, 2, 3, 4):
            words = [random_word(rng, "abcde", 1, 7) for _ in range(60)]
            lm = train_char_lm(words, order=order, discount=0.6)
            symbols = sorted(lm.alphabet) + [END]
            contexts = lm.contexts() + [tuple(random_word(rng, "abcde", order - 1, order - 1))]
            for context in contexts:
                total = math.fsum(lm.prob_next(list(context), s) for s in symbols)
                assert total == pytest.approx(1.0, abs=1e-8)

    def test_unseen_symbols_have_mass(self):
        lm = train_char_lm(["ab", "ab", "ac"], order=3, discount=0.75)
        assert lm.prob_next("a", "a") > 0.0
        assert lm.prob_next("a", "z") == pytest.approx(1e-9)
        assert not lm.in_vocab("z")
        assert lm.in_vocab("a")

    def test_word_probability(self):
        lm = train_char_lm(["ab", "ab", "ac"], order=2, discount=0.0)
        assert lm_logprob(lm, "ab") == pytest.approx(math.log(2 / 3))
        smoothed = train_char_lm(["ab", "ab", "ac"], order=2, discount=0.75)
        assert lm_logprob(smoothed, "") == smoothed.logprob_next("", END)

    def test_prefix_score_never_increases(self):
        rng = np.random.default_rng(12)
        lm = train_char_lm([random_word(rng, "abcd", 1, 6) for _ in range(40)], order=3)
        for _ in range(200):
            s = random_word(rng, "abcd", 0, 6)
            for c in "abcd":
                assert lm_logprob(lm, s + c, include_end=False) <= lm_logprob(lm, s, include_end=False)

    def test_short_history_without_padding(self):
        lm = train_word_lm([["name", "is", "umar", "."]] * 5, order=3)
        assert math.exp(lm.logprob_next(["is"], "umar", pad=False)) == pytest.approx(0.4)
        assert lm.prob_next(["name"], "is") == pytest.approx(0.91)
        assert math.exp(lm.logprob_next(["name"], "is", pad=False)) == pytest.approx(0.4)

    def test_save_and_load(self, tmp_path):
        lm = train_char_lm(["kitab", "kitaben", "umar"], order=3, discount=0.5)
        path = str(tmp_path / "char.lm")
        lm.save(path)
        loaded = NGramLM.load(path)
        assert (loaded.order, loaded.discount, loaded.kind) == (3, 0.5, "char")
        for word in ("kitab", "umar", "zzz", ""):
            assert lm_logprob(loaded, word) == lm_logprob(lm, word)

    @pytest.mark.parametrize(
        "content",
        ["", "G\t1\ta\tb\n", "N\torder=2\tdiscount=0.5\nG\t1\ta\n", "N\torder=2\tdiscount=0.5\nG\tx\ta\tb\n"],
    )
    def test_load_rejects_malformed(self, tmp_path, content):
        path = tmp_path / "bad.lm"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(ModelFormatError):
            NGramLM.load(str(path))

    def test_training_errors(self):
        with pytest.raises(EmptyInputError):
            train_char_lm([])
        with pytest.raises(ConfigError):
            train_char_lm(["ab"], order=0)
        with pytest.raises(ConfigError):
            NGramLM(2, 1.5, {(BOS, "a"): 1})


class TestBeamDecoder:
    def test_one_path(self, uniform_lm):
        model = one_to_one_model([("a", "x"), ("b", "y"), ("c", "z")])
        nbest = transliterate(model, uniform_lm, "abc", BeamConfig())
        assert nbest.best.candidate == "xyz"
        assert len(nbest) == 1
        assert not nbest.failed

    def test_nbest_contract(self, make_random_model):
        rng = np.random.default_rng(31)
        for _ in range(20):
            model = make_random_model(rng)
            lm = train_char_lm([random_word(rng, "xyz", 1, 5) for _ in range(30)])
            cfg = BeamConfig(beam=8, n=5)
            src = random_word(rng, "abc", 1, 4)
            nbest = transliterate(model, lm, src, cfg)
            assert 1 <= len(nbest) <= cfg.n
            keys = [item.sort_key() for item in nbest]
            assert keys == sorted(keys)
            assert len(set(nbest.candidates())) == len(nbest)
            for item in nbest:
                assert 0 < len(item.candidate) <= cfg.max_output_length(len(src))
                assert item.combined == pytest.approx(cfg.combine(item.tm_score, item.lm_score))

    def test_untranslatable_word_fails(self, uniform_lm):
        model = one_to_one_model([("a", "x")])
        nbest = transliterate(model, uniform_lm, "ab", BeamConfig())
        assert nbest.failed
        assert len(nbest) == 0

    def test_empty_word_rejected(self, uniform_lm):
        with pytest.raises(ConfigError):
            transliterate(one_to_one_model([("a", "x")]), uniform_lm, "", BeamConfig())

    @pytest.mark.parametrize(
        "kwargs", [{"beam": 0}, {"n": 0}, {"w_tm": -1.0}, {"max_ratio": 0.0}]
    )
    def test_invalid_config(self, kwargs):
        with pytest.raises(ConfigError):
            BeamConfig(**kwargs)

    def test_words_decoded_in_order_on_threads(self, make_random_model):
        rng = np.random.default_rng(4)
        model = make_random_model(rng)
        lm = train_char_lm([random_word(rng, "xyz", 1, 5) for _ in range(30)])
        words = [random_word(rng, "abc", 1, 4) for _ in range(12)]
        single = transliterate_words(model, lm, words, BeamConfig(beam=4, n=3), threads=1)
        multi = transliterate_words(model, lm, words, BeamConfig(beam=4, n=3), threads=4)
        assert single == multi
        assert [nbest.source for nbest in single] == words


class TestOracle:
    @pytest.mark.parametrize("max_ratio, max_src_len, instances", [(1.5, 4, 30), (3.0, 3, 20)])
    def test_wide_beam_matches_exhaustive_search(self, make_random_model, max_ratio, max_src_len, instances):
        rng = np.random.default_rng(99)
        cfg = BeamConfig(beam=1024, n=5, max_ratio=max_ratio)
        for _ in range(instances):
            model = make_random_model(rng)
            lm = train_char_lm([random_word(rng, "xyz", 1, 6) for _ in range(25)])
            src = random_word(rng, "abc", 1, max_src_len)
            oracle = exhaustive_oracle(model, lm, src, cfg.max_output_length(len(src)), cfg)
            best = transliterate(model, lm, src, cfg).best
            assert best.candidate == oracle[0]
            assert best.combined == pytest.approx(oracle[1], rel=1e-12, abs=1e-12)

    def test_narrow_beam_never_beats_oracle(self, make_random_model):
        rng = np.random.default_rng(100)
        cfg = BeamConfig(beam=2, n=3)
        for _ in range(30):
            model = make_random_model(rng)
            lm = train_char_lm([random_word(rng, "xyz", 1, 6) for _ in range(25)])
            src = random_word(rng, "abc", 1, 3)
            oracle = exhaustive_oracle(model, lm, src, cfg.max_output_length(len(src)), cfg)
            assert transliterate(model, lm, src, cfg).best.combined <= oracle[1] + 1e-12

    def test_no_alignment(self, uniform_lm):
        assert exhaustive_oracle(one_to_one_model([("a", "x")]), uniform_lm, "b", 3) is None

    def test_limits(self, uniform_lm):
        wide = one_to_one_model([("a", c) for c in "vwxyz"])
        with pytest.raises(ConfigError):
            exhaustive_oracle(wide, uniform_lm, "a", 3)
        with pytest.raises(ConfigError):
            exhaustive_oracle(one_to_one_model([("a", "x")]), uniform_lm, "a", 13)


class TestNBest:
    @staticmethod
    def nbest_list():
        return NBestList.from_items(
            "عمر",
            [NBestItem("umar", -1.0, -2.0, -2.0), NBestItem("omar", -1.5, -2.0, -2.5), NBestItem("umar", -3.0, -2.0, -4.0)],
            capacity=10,
        )

    def test_from_items_deduplicates(self):
        nbest = self.nbest_list()
        assert nbest.candidates() == ["umar", "omar"]
        assert nbest.best.combined == -2.0

    def test_ties_prefer_shorter_then_lexicographic(self):
        nbest = NBestList.from_items(
            "x", [NBestItem("bb", 0, 0, -1.0), NBestItem("ab", 0, 0, -1.0), NBestItem("c", 0, 0, -1.0)], 10
        )
        assert nbest.candidates() == ["c", "ab", "bb"]

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            NBestList("x", (NBestItem("a", 0, 0, -2.0), NBestItem("b", 0, 0, -1.0)))
        with pytest.raises(ValueError):
            NBestList("x", (NBestItem("a", 0, 0, -1.0), NBestItem("a", 0, 0, -2.0)))
        with pytest.raises(ValueError):
            NBestList("x", (NBestItem("a", 0, 0, -1.0), NBestItem("b", 0, 0, -2.0)), capacity=1)

    def test_file_round_trip(self, tmp_path):
        path = str(tmp_path / "nbest.tsv")
        nbest = self.nbest_list()
        assert write_nbest(path, [nbest, NBestList.failure("کتاب", 10)]) == 2
        loaded = read_nbest(path)
        assert list(loaded) == ["عمر"]
        assert loaded["عمر"].items == nbest.items
