"""Multi-feature attention weights for sentence pairs.

Token weights come from two signals: summed cross-sentence cosine
similarities (how much a token resonates with the other sentence) and an
edit-distance position term at co-occurrence positions (how much the word
at the mirrored position differs).  Both are added and softmax-normalized,
then used to rescale the sentence's embedding matrix row by row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Sentence
from .embedding import EmbeddingTable, SentenceMatrix, embed_sentence
from .errors import DimensionError


@dataclass(frozen=True)
class SimilarityGrid:
    """n x m matrix of token-vector cosines over true tokens only."""

    values: np.ndarray
    n: int
    m: int


@dataclass(frozen=True)
class AttentionVectors:
    """Post-softmax token weights; each vector sums to 1, entries > 0."""

    row_weights: np.ndarray  # length n, for the first sentence
    col_weights: np.ndarray  # length m, for the second sentence


def cosine_matrix(a: SentenceMatrix, b: SentenceMatrix) -> SimilarityGrid:
    """Pairwise cosine similarities between the true rows of two matrices.

    Zero-norm rows contribute 0 entries.  Raises DimensionError when the
    embedding dimensions differ.
    """
    if a.dim != b.dim:
        raise DimensionError(f"embedding dims differ: {a.dim} vs {b.dim}")
    rows_a = a.true_rows()
    rows_b = b.true_rows()
    norms_a = np.linalg.norm(rows_a, axis=1)
    norms_b = np.linalg.norm(rows_b, axis=1)
    grid = rows_a @ rows_b.T
    denom = np.outer(norms_a, norms_b)
    with np.errstate(invalid="ignore", divide="ignore"):
        grid = np.where(denom > 0.0, grid / np.where(denom > 0.0, denom, 1.0), 0.0)
    return SimilarityGrid(values=grid, n=a.true_length, m=b.true_length)


def marginal_sums(grid: SimilarityGrid) -> tuple[np.ndarray, np.ndarray]:
    """Row sums (one per first-sentence token) and column sums."""
    return grid.values.sum(axis=1), grid.values.sum(axis=0)


def edit_distance(u: str, v: str) -> int:
    """Character-level Levenshtein distance (unit-cost edits)."""
    if u == v:
        return 0
    if not u:
        return len(v)
    if not v:
        return len(u)
    previous = list(range(len(v) + 1))
    for i, cu in enumerate(u, start=1):
        current = [i]
        for j, cv in enumerate(v, start=1):
            cost = 0 if cu == cv else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def position_weights(a: Sentence, b: Sentence) -> tuple[np.ndarray, np.ndarray]:
    """Edit-distance position terms at co-occurrence positions.

    For every word present in both sentences, its first-occurrence index p
    in one sentence selects the token at the same index in the other
    sentence; the scaled edit distance 2*dist/min(n, m) is written at
    index p of the owning sentence's vector.  Indices past the other
    sentence's length, and all non-co-occurrence positions, stay 0.
    """
    surfaces_a = a.surfaces()
    surfaces_b = b.surfaces()
    n, m = len(surfaces_a), len(surfaces_b)
    pos_row = np.zeros(n, dtype=np.float64)
    pos_col = np.zeros(m, dtype=np.float64)
    scale = min(n, m)
    for word in set(surfaces_a) & set(surfaces_b):
        p = surfaces_a.index(word)
        if p < m:
            pos_row[p] = 2.0 * edit_distance(word, surfaces_b[p]) / scale
        q = surfaces_b.index(word)
        if q < n:
            pos_col[q] = 2.0 * edit_distance(word, surfaces_a[q]) / scale
    return pos_row, pos_col


def _softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - np.max(x)
    e = np.exp(shifted)
    return e / e.sum()


def attention_weights(row_vec: np.ndarray, pos_row: np.ndarray,
                      col_vec: np.ndarray, pos_col: np.ndarray) -> AttentionVectors:
    """Softmax over the summed similarity and position signals."""
    if row_vec.shape != pos_row.shape:
        raise DimensionError(f"row vector lengths differ: {row_vec.shape} vs {pos_row.shape}")
    if col_vec.shape != pos_col.shape:
        raise DimensionError(f"column vector lengths differ: {col_vec.shape} vs {pos_col.shape}")
    return AttentionVectors(
        row_weights=_softmax(np.asarray(row_vec, dtype=np.float64) + pos_row),
        col_weights=_softmax(np.asarray(col_vec, dtype=np.float64) + pos_col),
    )


def apply_attention(matrix: SentenceMatrix, weights: np.ndarray) -> SentenceMatrix:
    """Scale each true row by its weight; padding rows stay zero."""
    if weights.shape != (matrix.true_length,):
        raise DimensionError(
            f"expected {matrix.true_length} weights, got {weights.shape}"
        )
    rows = matrix.rows.copy()
    rows[: matrix.true_length] *= weights[:, np.newaxis]
    return SentenceMatrix(rows=rows, mask=matrix.mask.copy(), true_length=matrix.true_length)


def weighted_pair_matrices(a: Sentence, b: Sentence, table: EmbeddingTable,
                           n_max: int) -> tuple[SentenceMatrix, SentenceMatrix]:
    """Full attention pipeline for one pair: embed both sentences, build the
    cosine grid and position terms, softmax, and weight the matrices.

    Sentences are truncated to ``n_max`` tokens up front so the similarity
    grid, position vectors and matrices all agree on token counts.
    """
    a = a.truncated(n_max)
    b = b.truncated(n_max)
    mat_a = embed_sentence(table, a, n_max)
    mat_b = embed_sentence(table, b, n_max)
    grid = cosine_matrix(mat_a, mat_b)
    row_vec, col_vec = marginal_sums(grid)
    pos_row, pos_col = position_weights(a, b)
    att = attention_weights(row_vec, pos_row, col_vec, pos_col)
    return apply_attention(mat_a, att.row_weights), apply_attention(mat_b, att.col_weights)
