import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from petdetect.collocation import (
    NEG_INF,
    NgramCounts,
    PhrasedCorpus,
    PhraserModel,
    count_ngrams,
    score_bigram,
    train_phraser,
    train_two_pass,
)
from petdetect.corpus import Sentence
from petdetect.errors import CorpusError


def sent(*tokens: str) -> Sentence:
    return Sentence(tokens=tuple(tokens), raw=" ".join(tokens))


def corpus_of(token_lists: list[list[str]]) -> list[Sentence]:
    return [sent(*tokens) for tokens in token_lists]


def brute_force_accepted(
    token_lists: list[list[str]], min_count: int, threshold: float
) -> set[tuple[str, str]]:
    """Reference implementation: exhaustive counts, formula applied inline."""
    uni: dict[str, int] = {}
    bi: dict[tuple[str, str], int] = {}
    for tokens in token_lists:
        for t in tokens:
            uni[t] = uni.get(t, 0) + 1
        for i in range(len(tokens) - 1):
            pair = (tokens[i], tokens[i + 1])
            bi[pair] = bi.get(pair, 0) + 1
    vocab = sum(1 for c in uni.values() if c >= min_count)
    accepted = set()
    for (a, b), cab in bi.items():
        if uni[a] < min_count or uni[b] < min_count or cab < min_count:
            continue
        score = (cab - min_count) * vocab / (uni[a] * uni[b])
        if score > threshold:
            accepted.add((a, b))
    return accepted


class TestCounts:
    def test_unigram_bigram_tallies(self):
        counts = count_ngrams(corpus_of([["a", "b", "a"], ["b", "a"]]), min_count=1)
        assert counts.unigram == {"a": 3, "b": 2}
        assert counts.bigram == {("a", "b"): 1, ("b", "a"): 2}
        assert counts.total_words == 5

    def test_pairs_do_not_cross_sentences(self):
        counts = count_ngrams(corpus_of([["a"], ["b"]]), min_count=1)
        assert counts.bigram == {}

    def test_vocab_size_counts_only_frequent(self):
        counts = count_ngrams(corpus_of([["a", "a", "b"]]), min_count=2)
        assert counts.vocab_size == 1

    def test_min_count_validation(self):
        with pytest.raises(ValueError):
            count_ngrams([], min_count=0)


class TestScore:
    def test_formula_exact(self):
        # 10 sentences "x y": c(x)=c(y)=c(xy)=10, vocab=2
        counts = count_ngrams(corpus_of([["x", "y"]] * 10), min_count=5)
        assert score_bigram(counts, "x", "y", 5) == (10 - 5) * 2 / (10 * 10)

    def test_below_min_count_is_neg_inf(self):
        counts = count_ngrams(corpus_of([["x", "y"]] * 4), min_count=5)
        assert score_bigram(counts, "x", "y", 5) == NEG_INF

    def test_unknown_token_is_neg_inf(self):
        counts = count_ngrams(corpus_of([["x", "y"]] * 10), min_count=5)
        assert score_bigram(counts, "x", "zzz", 5) == NEG_INF
        assert score_bigram(counts, "zzz", "y", 5) == NEG_INF

    def test_frequent_words_rare_pair_is_neg_inf(self):
        # x and y common, but the pair occurs just once
        lists = [["x", "q"]] * 9 + [["q", "y"]] * 9 + [["x", "y"]]
        counts = count_ngrams(corpus_of(lists), min_count=5)
        assert score_bigram(counts, "x", "y", 5) == NEG_INF

    def test_score_at_exact_min_count_is_zero(self):
        counts = count_ngrams(corpus_of([["x", "y"]] * 5), min_count=5)
        assert score_bigram(counts, "x", "y", 5) == 0.0


class TestApply:
    def make_model(self, accepted: set[tuple[str, str]]) -> PhraserModel:
        # Hand-built counts: exactly `accepted` pairs clear the threshold,
        # every other pair is unseen and scores -inf.
        words = sorted({w for pair in accepted for w in pair})
        counts = NgramCounts(
            unigram={w: 1 for w in words},
            bigram={pair: 1000 for pair in accepted},
            total_words=1000,
            vocab_size=max(1, len(words)),
        )
        model = PhraserModel(counts=counts, min_count=1, threshold=1.0)
        for pair in accepted:
            assert model.accepts(*pair), "fixture construction broke"
        return model

    def test_merges_accepted_pair(self):
        model = self.make_model({("new", "york")})
        merged = model.apply(sent("in", "new", "york", "city"))
        assert merged.tokens == ("in", "new_york", "city")

    def test_greedy_left_to_right_no_overlap(self):
        model = self.make_model({("a", "b"), ("b", "c")})
        assert model.apply(sent("a", "b", "c")).tokens == ("a_b", "c")

    def test_consecutive_merges_skip_merged_token(self):
        model = self.make_model({("a", "a")})
        assert model.apply(sent("a", "a", "a")).tokens == ("a_a", "a")
        assert model.apply(sent("a", "a", "a", "a")).tokens == ("a_a", "a_a")

    def test_threshold_is_strict(self):
        counts = count_ngrams(corpus_of([["x", "y"]] * 10), min_count=5)
        score = score_bigram(counts, "x", "y", 5)
        at = PhraserModel(counts=counts, min_count=5, threshold=score)
        below = PhraserModel(counts=counts, min_count=5, threshold=score * 0.999)
        assert not at.accepts("x", "y")
        assert below.accepts("x", "y")

    def test_empty_sentence(self):
        model = self.make_model({("a", "b")})
        assert model.apply(sent()).tokens == ()


class TestTwoPass:
    def test_trigram_built_across_passes(self):
        # "alpha beta" merges in pass one; "alpha_beta gamma" in pass two.
        lists = [["alpha", "beta", "gamma"]] * 12
        corpus = corpus_of(lists)
        first, second = train_two_pass(corpus, min_count=2, threshold=0.1)
        assert first.accepts("alpha", "beta")
        assert second.accepts("alpha_beta", "gamma")
        merged = second.apply(first.apply(sent("alpha", "beta", "gamma")))
        assert merged.tokens == ("alpha_beta_gamma",)

    def test_phrased_corpus_applies_both_passes(self):
        lists = [["alpha", "beta", "gamma"]] * 12
        corpus = corpus_of(lists)
        first, second = train_two_pass(corpus, min_count=2, threshold=0.1)
        phrased = PhrasedCorpus(corpus, first, second)
        assert all(s.tokens == ("alpha_beta_gamma",) for s in phrased)
        # re-iterable
        assert len(list(phrased)) == len(list(phrased)) == 12

    def test_four_token_merge_blocked_by_threshold_band(self):
        # Both pairs of "w x y z" merge in pass one. The pass-two score
        # for (w_x, y_z) is half the pass-one pair score (vocab 2 vs 4),
        # so a threshold in between stops the four-word merge.
        lists = [["w", "x", "y", "z"]] * 10
        corpus = corpus_of(lists)
        s1 = (10 - 5) * 4 / (10 * 10)  # pass-one pair score: 0.2
        s2 = (10 - 5) * 2 / (10 * 10)  # pass-two merged-pair score: 0.1
        threshold = (s1 + s2) / 2
        first, second = train_two_pass(corpus, min_count=5, threshold=threshold)
        assert first.accepts("w", "x") and first.accepts("y", "z")
        assert not second.accepts("w_x", "y_z")
        merged = second.apply(first.apply(sent("w", "x", "y", "z")))
        assert merged.tokens == ("w_x", "y_z")

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            train_phraser([], min_count=5, threshold=0.0)


class TestPersistence:
    def test_round_trip_preserves_scores(self, tmp_path):
        lists = [["a", "b", "c"]] * 7 + [["b", "c"]] * 3
        model = train_phraser(corpus_of(lists), min_count=2, threshold=0.5)
        path = tmp_path / "phraser.tsv"
        model.save(str(path))
        loaded = PhraserModel.load(str(path))
        assert loaded.min_count == model.min_count
        assert loaded.threshold == model.threshold
        assert loaded.counts.unigram == model.counts.unigram
        assert loaded.counts.bigram == model.counts.bigram
        assert loaded.counts.vocab_size == model.counts.vocab_size
        assert loaded.accepted_bigrams() == model.accepted_bigrams()

    def test_resave_is_byte_identical(self, tmp_path):
        lists = [["a", "b"]] * 9
        model = train_phraser(corpus_of(lists), min_count=2, threshold=0.5)
        p1, p2 = tmp_path / "m1.tsv", tmp_path / "m2.tsv"
        model.save(str(p1))
        PhraserModel.load(str(p1)).save(str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_load_rejects_malformed_header(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("not a header\n")
        with pytest.raises(CorpusError, match=":1"):
            PhraserModel.load(str(path))

    def test_load_rejects_malformed_row(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text(
            "min_count\t5\tthreshold\t10.0\tvocab_size\t1\ttotal_words\t5\n"
            "u\ta\t5\n"
            "x\tjunk\n"
        )
        with pytest.raises(CorpusError, match=":3"):
            PhraserModel.load(str(path))

    def test_load_missing_file(self):
        with pytest.raises(CorpusError):
            PhraserModel.load("/nonexistent/m.tsv")


@st.composite
def toy_corpora(draw):
    vocab_n = draw(st.integers(min_value=2, max_value=12))
    vocab = [f"w{i}" for i in range(vocab_n)]
    n_sent = draw(st.integers(min_value=1, max_value=30))
    lists = [
        draw(st.lists(st.sampled_from(vocab), min_size=1, max_size=12))
        for _ in range(n_sent)
    ]
    min_count = draw(st.integers(min_value=1, max_value=4))
    threshold = draw(st.floats(min_value=0.01, max_value=20.0, allow_nan=False))
    return lists, min_count, threshold


@settings(max_examples=60, deadline=None)
@given(toy_corpora())
def test_accepted_set_matches_brute_force(case):
    lists, min_count, threshold = case
    model = train_phraser(corpus_of(lists), min_count=min_count, threshold=threshold)
    assert model.accepted_bigrams() == brute_force_accepted(lists, min_count, threshold)


@settings(max_examples=40, deadline=None)
@given(toy_corpora())
def test_merged_tokens_round_trip_to_original(case):
    """Splitting merged tokens on the joiner recovers the input sentence."""
    lists, min_count, threshold = case
    model = train_phraser(corpus_of(lists), min_count=min_count, threshold=threshold)
    for tokens in lists:
        merged = model.apply(sent(*tokens))
        flat = [part for token in merged.tokens for part in token.split("_")]
        assert flat == tokens


def test_random_corpora_against_oracle_is_fast():
    rng = random.Random(99)
    for _ in range(20):
        vocab = [f"v{i}" for i in range(rng.randint(2, 30))]
        lists = [
            [rng.choice(vocab) for _ in range(rng.randint(1, 10))]
            for _ in range(rng.randint(1, 50))
        ]
        min_count = rng.randint(1, 5)
        threshold = rng.uniform(0.05, 15.0)
        model = train_phraser(corpus_of(lists), min_count=min_count, threshold=threshold)
        assert model.accepted_bigrams() == brute_force_accepted(
            lists, min_count, threshold
        )
