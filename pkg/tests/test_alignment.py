import numpy as np
import pytest

from alignment.candidates import WordPair, WordPairList, extract_candidates
from alignment.model1 import NULL_TOKEN, Model1Table, train_model1, viterbi_align
from alignment.pharaoh import AlignmentLinkSet, parse_pharaoh, read_alignments, write_alignments
from alignment.symmetrization import HEURISTICS, symmetrize
from alignment.word_aligner import align_corpus
from textnorm.corpus import ParallelCorpus
from textnorm.tokenizer import TokenizedSentence
from utils.exceptions import (AlignmentRangeError, ConfigError, DataFormatError, EmptyInputError,
                              PharaohParseError)


def links(*pairs, src_len=3, tgt_len=3):
    return AlignmentLinkSet(frozenset(pairs), src_len, tgt_len)


class TestPharaoh:
    def test_parse(self):
        assert parse_pharaoh("0-0 1-2", 2, 3).links == {(0, 0), (1, 2)}

    def test_empty_line(self):
        assert len(parse_pharaoh("", 2, 2)) == 0

    def test_out_of_range(self):
        with pytest.raises(AlignmentRangeError):
            parse_pharaoh("2-5", 3, 3)

    @pytest.mark.parametrize("token", ["0-", "a-b", "0_1", "1-2-3", "-1-0"])
    def test_malformed_token(self, token):
        with pytest.raises(PharaohParseError) as error:
            parse_pharaoh(f"0-0 {token}", 3, 3)
        assert error.value.token == token

    def test_canonical_order(self):
        assert parse_pharaoh("1-2 0-1 0-0", 2, 3).to_pharaoh() == "0-0 0-1 1-2"

    def test_file_round_trip(self, tmp_path):
        corpus = ParallelCorpus.from_strings([("a b", "x y z"), ("c", "w")])
        path = str(tmp_path / "aligned.txt")
        alignments = [links((0, 0), (1, 2), src_len=2, tgt_len=3), links(src_len=1, tgt_len=1)]
        assert write_alignments(path, alignments) == 2
        assert read_alignments(path, corpus) == alignments

    def test_file_line_count_must_match(self, tmp_path):
        corpus = ParallelCorpus.from_strings([("a b", "x y z"), ("c", "w")])
        path = tmp_path / "aligned.txt"
        path.write_text("0-0\n", encoding="utf-8")
        with pytest.raises(DataFormatError):
            read_alignments(str(path), corpus)


class TestModel1:
    def test_single_pair(self):
        table = train_model1(ParallelCorpus.from_strings([("a", "x")]), iterations=5)
        assert table.prob("x", "a") == pytest.approx(1.0)

    def test_learns_cooccurrence(self):
        corpus = ParallelCorpus.from_strings([("a b", "x y"), ("a", "x")])
        table = train_model1(corpus, iterations=5)
        assert table.prob("x", "a") > table.prob("y", "a")

    def test_rows_normalized_and_likelihood_monotone(self):
        rng = np.random.default_rng(3)
        src_vocab = [f"s{k}" for k in range(6)]
        tgt_vocab = [f"t{k}" for k in range(6)]
        for _ in range(10):
            pairs = []
            for _ in range(20):
                n = int(rng.integers(1, 6))
                m = int(rng.integers(1, 6))
                pairs.append((
                    " ".join(rng.choice(src_vocab, size=n)),
                    " ".join(rng.choice(tgt_vocab, size=m)),
                ))
            table = train_model1(ParallelCorpus.from_strings(pairs), iterations=8)
            for total in table.row_sums().values():
                assert total == pytest.approx(1.0, abs=1e-9)
            lls = table.log_likelihoods
            for before, after in zip(lls, lls[1:]):
                assert after >= before - 1e-9 * max(1.0, abs(before))

    def test_rejects_zero_iterations(self):
        with pytest.raises(ConfigError):
            train_model1(ParallelCorpus.from_strings([("a", "x")]), iterations=0)

    def test_rejects_empty_corpus(self):
        with pytest.raises(EmptyInputError):
            train_model1(ParallelCorpus([]))

    def test_threads_do_not_change_result(self):
        corpus = ParallelCorpus.from_strings([("a b c", "x y z"), ("a c", "x z"), ("b", "y")] * 4)
        assert train_model1(corpus, 4, threads=1) == train_model1(corpus, 4, threads=3)


class TestViterbi:
    @staticmethod
    def sentences(src, tgt):
        return TokenizedSentence.from_words(src.split()), TokenizedSentence.from_words(tgt.split())

    def test_ties_go_to_smaller_index(self):
        table = Model1Table({"a": {"x": 0.5}, "b": {"x": 0.5}})
        assert viterbi_align(table, *self.sentences("a b", "x")).links == {(0, 0)}

    def test_null_wins_only_when_strictly_better(self):
        src, tgt = self.sentences("a", "x y")
        table = Model1Table({"a": {"x": 0.4, "y": 0.5}, NULL_TOKEN: {"x": 0.6, "y": 0.5}})
        assert viterbi_align(table, src, tgt).links == {(0, 1)}

    def test_unknown_word_unlinked(self):
        table = Model1Table({"a": {"x": 1.0}})
        assert viterbi_align(table, *self.sentences("a", "q x")).links == {(0, 1)}


class TestSymmetrization:
    def test_identical_directions(self):
        alignment = links((0, 0), (1, 2))
        for heuristic in HEURISTICS:
            assert symmetrize(alignment, alignment, heuristic) == alignment

    def test_grow_diag_adds_neighbor(self):
        forward = links((0, 0), (1, 1), src_len=2)
        backward = links((0, 0), (1, 1), (1, 2), src_len=2)
        assert symmetrize(forward, backward, "grow-diag").links == {(0, 0), (1, 1), (1, 2)}

    def test_none_and_union(self):
        forward = links((0, 0), (1, 1))
        backward = links((0, 0), (2, 2))
        assert symmetrize(forward, backward, "none").links == {(0, 0)}
        assert symmetrize(forward, backward, "union").links == {(0, 0), (1, 1), (2, 2)}

    def test_between_intersection_and_union(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n, m = int(rng.integers(1, 7)), int(rng.integers(1, 7))
            grid = [(i, j) for i in range(n) for j in range(m)]

            def sample():
                mask = rng.random(len(grid)) < 0.3
                return AlignmentLinkSet(frozenset(g for g, keep in zip(grid, mask) if keep), n, m)

            forward, backward = sample(), sample()
            for heuristic in HEURISTICS:
                result = symmetrize(forward, backward, heuristic).links
                assert forward.links & backward.links <= result <= forward.links | backward.links

    def test_unknown_heuristic(self):
        with pytest.raises(ConfigError):
            symmetrize(links(), links(), "intersect-final")


class TestCandidates:
    def test_one_to_one_link(self):
        corpus = ParallelCorpus.from_strings([("میرا نام عمر ہے", "my name is Umar")])
        alignments = [parse_pharaoh("2-3", 4, 4)]
        candidates = extract_candidates(corpus, alignments)
        assert candidates.pairs() == [("عمر", "Umar")]
        assert candidates[0].count == 1

    def test_one_to_many_excluded(self):
        corpus = ParallelCorpus.from_strings([("aa bb", "xx yy")])
        assert len(extract_candidates(corpus, [parse_pharaoh("0-0 0-1", 2, 2)])) == 0

    def test_counts_aggregate(self):
        corpus = ParallelCorpus.from_strings([("عمر ہے", "Umar is")] * 3)
        alignments = [parse_pharaoh("0-0 1-1", 2, 2)] * 3
        candidates = extract_candidates(corpus, alignments)
        assert [(e.source, e.target, e.count) for e in candidates] == [
            ("عمر", "Umar", 3),
            ("ہے", "is", 3),
        ]

    def test_punctuation_and_short_words_skipped(self):
        corpus = ParallelCorpus.from_strings([("ہے ? a", "is . x")])
        candidates = extract_candidates(corpus, [parse_pharaoh("0-0 1-1 2-2", 3, 3)])
        assert candidates.pairs() == [("ہے", "is")]

    def test_alignment_count_must_match(self):
        corpus = ParallelCorpus.from_strings([("aa", "xx")])
        with pytest.raises(DataFormatError):
            extract_candidates(corpus, [])

    def test_file_round_trip(self, tmp_path):
        pairs = WordPairList([WordPair("عمر", "Umar", 3), WordPair("لاہور", "Lahore", 1)])
        path = str(tmp_path / "candidates.tsv")
        assert pairs.write_candidates(path) == 2
        assert WordPairList.read(path).entries == pairs.entries

    def test_bad_count_field(self, tmp_path):
        path = tmp_path / "candidates.tsv"
        path.write_text("a\tb\tmany\n", encoding="utf-8")
        with pytest.raises(DataFormatError):
            WordPairList.read(str(path))


class TestWordAligner:
    def test_aligns_repeated_pairs(self):
        corpus = ParallelCorpus.from_strings(
            [("aa bb", "xx yy"), ("aa cc", "xx zz"), ("bb cc", "yy zz"), ("aa", "xx")]
        )
        alignments = align_corpus(corpus, iterations=10)
        assert len(alignments) == len(corpus)
        assert (0, 0) in alignments[3]
        assert (0, 0) in alignments[0]
