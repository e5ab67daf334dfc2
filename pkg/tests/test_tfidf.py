import math

import numpy as np
import pytest

from simfuse.corpus import BINARY, Dataset, LabeledPair, Sentence
from simfuse.errors import EmptyCorpus
from simfuse.tfidf import (CorpusStats, TfIdfVector, build_stats, cosine_sim,
                           idf, term_frequency, tfidf_vector)


def _pair(pid, a, b, label=1.0):
    return LabeledPair(id=pid, a=Sentence.from_surfaces(a),
                       b=Sentence.from_surfaces(b), label=label)


@pytest.fixture()
def four_pair_corpus():
    # term "a" in pair 1 only; "b" in pairs 1 and 2; everything else unique
    pairs = (
        _pair("1", ["a", "b", "c"], ["a", "b", "d"]),
        _pair("2", ["b", "e"], ["f", "g"]),
        _pair("3", ["h", "i"], ["j", "k"]),
        _pair("4", ["l", "m"], ["n", "o"]),
    )
    return Dataset(pairs=pairs, label_kind=BINARY)


class TestBuildStats:
    def test_counts(self, four_pair_corpus):
        stats = build_stats(four_pair_corpus)
        assert stats.total_pairs == 4
        assert stats.doc_freq("a") == 1
        assert stats.doc_freq("b") == 2

    def test_term_in_both_sentences_counted_once(self, four_pair_corpus):
        stats = build_stats(four_pair_corpus)
        assert stats.doc_freq("a") == 1  # present in both sides of pair 1

    def test_absent_term_is_zero(self, four_pair_corpus):
        assert build_stats(four_pair_corpus).doc_freq("zzz") == 0

    def test_empty_dataset(self):
        with pytest.raises(EmptyCorpus):
            build_stats(Dataset(pairs=(), label_kind=BINARY))


class TestTermFrequency:
    def test_shared_term(self):
        pair = _pair("1", ["a", "b", "c"], ["a", "b", "d"])
        assert term_frequency("a", pair) == 0.5  # 2 occurrences / union of 4

    def test_absent_term(self):
        pair = _pair("1", ["a", "b", "c"], ["a", "b", "d"])
        assert term_frequency("zzz", pair) == 0.0

    def test_can_exceed_one(self):
        pair = _pair("1", ["x"], ["x"])
        assert term_frequency("x", pair) == 2.0


class TestIdf:
    def test_direct_value(self, four_pair_corpus):
        stats = build_stats(four_pair_corpus)
        assert idf("a", stats) == pytest.approx(math.log(2.0), abs=1e-12)

    def test_floor_at_zero(self):
        stats = CorpusStats(total_pairs=4, pair_doc_freq={"w": 4})
        assert idf("w", stats) == 0.0

    def test_unseen_term(self, four_pair_corpus):
        stats = build_stats(four_pair_corpus)
        assert idf("zzz", stats) == pytest.approx(math.log(4.0), abs=1e-12)

    def test_monotone_in_doc_freq(self):
        values = [
            idf("w", CorpusStats(total_pairs=10, pair_doc_freq={"w": df}))
            for df in range(11)
        ]
        assert all(x >= y for x, y in zip(values, values[1:]))
        assert values[-1] == 0.0


class TestTfIdfVector:
    def test_frozen_weights(self, four_pair_corpus):
        stats = build_stats(four_pair_corpus)
        pair = four_pair_corpus.pairs[0]
        vec = tfidf_vector(pair.a, pair, stats)
        ln2 = math.log(2.0)
        ln43 = math.log(4.0 / 3.0)
        assert vec.weights == pytest.approx(
            {"a": 0.5 * ln2, "b": 0.5 * ln43, "c": 0.25 * ln2})

    def test_all_floored_gives_empty_vector(self):
        stats = CorpusStats(total_pairs=2, pair_doc_freq={"x": 2, "y": 2})
        pair = _pair("1", ["x", "y"], ["x"])
        assert tfidf_vector(pair.a, pair, stats).weights == {}

    def test_support_subset_of_sentence(self, four_pair_corpus):
        stats = build_stats(four_pair_corpus)
        pair = four_pair_corpus.pairs[0]
        vec = tfidf_vector(pair.b, pair, stats)
        assert set(vec.weights) <= set(pair.b.surfaces())

    def test_disjoint_sentences_disjoint_support(self, four_pair_corpus):
        stats = build_stats(four_pair_corpus)
        pair = four_pair_corpus.pairs[2]
        u = tfidf_vector(pair.a, pair, stats)
        v = tfidf_vector(pair.b, pair, stats)
        assert not (u.weights.keys() & v.weights.keys())

    def test_rejects_stored_zero(self):
        with pytest.raises(ValueError):
            TfIdfVector(weights={"a": 0.0})


class TestCosineSim:
    def test_self_similarity(self):
        v = TfIdfVector(weights={"a": 0.3, "b": 1.2})
        assert cosine_sim(v, v) == pytest.approx(1.0)

    def test_disjoint_support(self):
        u = TfIdfVector(weights={"a": 1.0})
        v = TfIdfVector(weights={"b": 1.0})
        assert cosine_sim(u, v) == 0.0

    def test_hand_value(self):
        u = TfIdfVector(weights={"a": 1.0, "b": 1.0})
        v = TfIdfVector(weights={"a": 1.0})
        assert cosine_sim(u, v) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)

    def test_empty_vector_gives_zero(self):
        assert cosine_sim(TfIdfVector(), TfIdfVector(weights={"a": 1.0})) == 0.0

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(11)
        terms = list("abcdefgh")
        for _ in range(200):
            u = TfIdfVector(weights={
                t: float(rng.uniform(0.01, 2.0))
                for t in rng.choice(terms, size=rng.integers(1, 6), replace=False)
            })
            v = TfIdfVector(weights={
                t: float(rng.uniform(0.01, 2.0))
                for t in rng.choice(terms, size=rng.integers(1, 6), replace=False)
            })
            s = cosine_sim(u, v)
            assert s == cosine_sim(v, u)
            assert 0.0 <= s <= 1.0

    def test_never_exceeds_one_on_near_identical(self):
        # rounding in the norm product can push the raw ratio past 1
        weights = {f"t{i}": 0.1 + 0.07 * i for i in range(9)}
        v = TfIdfVector(weights=weights)
        assert cosine_sim(v, v) <= 1.0
