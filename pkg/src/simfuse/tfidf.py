"""Pair-scoped TF-IDF vectors and cosine similarity.

The "document" unit is a sentence pair: term frequency is counted over
both sentences of the pair and normalized by the size of their combined
vocabulary, inverse document frequency over the number of pairs in the
corpus that contain the term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .corpus import Dataset, LabeledPair, Sentence
from .errors import EmptyCorpus


@dataclass(frozen=True)
class CorpusStats:
    """Pair-level document frequencies for a dataset."""

    total_pairs: int
    pair_doc_freq: Mapping[str, int]

    def __post_init__(self):
        if self.total_pairs < 1:
            raise EmptyCorpus("corpus statistics require at least one pair")
        bad = [t for t, df in self.pair_doc_freq.items() if df > self.total_pairs or df < 0]
        if bad:
            raise ValueError(f"document frequency out of range for {bad[:3]}")

    def doc_freq(self, term: str) -> int:
        return self.pair_doc_freq.get(term, 0)


@dataclass(frozen=True)
class TfIdfVector:
    """Sparse term -> weight mapping; zero weights are never stored."""

    weights: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if any(w <= 0.0 for w in self.weights.values()):
            raise ValueError("TF-IDF weights must be positive (zeros omitted)")

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights.values()))


def build_stats(dataset: Dataset) -> CorpusStats:
    """Count, for every term, the number of pairs containing it.

    A term present in both sentences of a pair is counted once for that
    pair.  Raises EmptyCorpus on an empty dataset.
    """
    if len(dataset) == 0:
        raise EmptyCorpus("cannot build statistics for an empty dataset")
    freq: dict[str, int] = {}
    for pair in dataset:
        for term in set(pair.a.surfaces()) | set(pair.b.surfaces()):
            freq[term] = freq.get(term, 0) + 1
    return CorpusStats(total_pairs=len(dataset), pair_doc_freq=freq)


def term_frequency(term: str, pair: LabeledPair) -> float:
    """Occurrences of ``term`` across both sentences, over the size of
    the union of the two surface sets.  May exceed 1 for repeated terms.
    """
    occurrences = pair.a.surfaces().count(term) + pair.b.surfaces().count(term)
    union = set(pair.a.surfaces()) | set(pair.b.surfaces())
    return occurrences / len(union)


def idf(term: str, stats: CorpusStats) -> float:
    """Natural-log inverse pair frequency, floored at zero.

    The floor keeps downstream cosine similarities in [0, 1]: a term
    present in every pair would otherwise get a negative weight.
    """
    value = math.log(stats.total_pairs / (1 + stats.doc_freq(term)))
    return max(0.0, value)


def tfidf_vector(s: Sentence, pair: LabeledPair, stats: CorpusStats) -> TfIdfVector:
    """TF-IDF weights for the distinct surfaces of ``s`` within ``pair``.

    Terms are stored in sorted order so later float summations are
    independent of the process's string-hash seed.
    """
    weights = {}
    for term in sorted(set(s.surfaces())):
        w = term_frequency(term, pair) * idf(term, stats)
        if w > 0.0:
            weights[term] = w
    return TfIdfVector(weights=weights)


def cosine_sim(u: TfIdfVector, v: TfIdfVector) -> float:
    """Cosine similarity of two sparse vectors; 0.0 if either has norm 0.

    Weights are non-negative, so the true value lies in [0, 1]; the result
    is capped at 1.0 against float rounding (identical vectors can land a
    hair above it).
    """
    nu, nv = u.norm(), v.norm()
    if nu == 0.0 or nv == 0.0:
        return 0.0
    # canonical summation order: exact symmetry in (u, v) and identical
    # results regardless of the process's string-hash seed
    shared = sorted(u.weights.keys() & v.weights.keys())
    dot = sum(u.weights[t] * v.weights[t] for t in shared)
    return min(1.0, dot / (nu * nv))
