"""Vocabulary construction and TF / TF-IDF weighting.

TF is the token count divided by the largest count in the same document and
IDF is ``ln(N / df)``. Weights that come out as exactly zero (tokens present in
every training document, under TF-IDF) are not stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp


class VocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    index: dict[str, int]
    df: dict[str, int]
    n_docs: int

    def __len__(self):
        return len(self.index)

    def __contains__(self, token):
        return token in self.index

    @cached_property
    def idf_values(self) -> np.ndarray:
        """IDF of every column, indexed by column id."""
        df = np.empty(len(self.index))
        for tok, col in self.index.items():
            df[col] = self.df[tok]
        return np.log(self.n_docs / df)

    def dump(self, path) -> None:
        """Write ``token<TAB>column<TAB>df`` lines in column order."""
        with open(path, "w", encoding="utf-8") as fh:
            for tok, col in sorted(self.index.items(), key=lambda kv: kv[1]):
                fh.write(f"{tok}\t{col}\t{self.df[tok]}\n")


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray
    weights: np.ndarray

    @classmethod
    def empty(cls) -> "SparseVector":
        return cls(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.float64))

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.weights.tolist()))

    def __len__(self):
        return len(self.indices)

    def scale(self, factor: float) -> "SparseVector":
        return SparseVector(self.indices, self.weights * factor)


def build_vocabulary(bags: Sequence[Mapping[str, int]]) -> Vocabulary:
    df: dict[str, int] = {}
    for bag in bags:
        for tok in bag:
            df[tok] = df.get(tok, 0) + 1
    if not df:
        raise VocabularyError("empty vocabulary")
    index = {tok: i for i, tok in enumerate(sorted(df))}
    return Vocabulary(index=index, df=df, n_docs=len(bags))


def term_frequency(bag: Mapping[str, int]) -> dict[str, float]:
    if not bag:
        return {}
    top = max(bag.values())
    return {tok: c / top for tok, c in bag.items()}


def idf(vocab: Vocabulary, token: str) -> float:
    try:
        df = vocab.df[token]
    except KeyError:
        raise VocabularyError(f"out-of-vocabulary token: {token!r}") from None
    return math.log(vocab.n_docs / df)


def vectorize(bag: Mapping[str, int], vocab: Vocabulary, use_tfidf: bool) -> SparseVector:
    if not bag:
        return SparseVector.empty()
    # TF is normalized by the document's own maximum, counting tokens the
    # vocabulary does not know; those are dropped afterwards.
    top = max(bag.values())
    index = vocab.index
    known = [(index[tok], c) for tok, c in bag.items() if tok in index]
    if not known:
        return SparseVector.empty()
    known.sort()
    cols_, counts = zip(*known)
    cols = np.array(cols_, dtype=np.int64)
    weights = np.array(counts, dtype=np.float64) / top
    if use_tfidf:
        weights *= vocab.idf_values[cols]
        keep = weights != 0.0
        if not keep.all():
            cols, weights = cols[keep], weights[keep]
    return SparseVector(cols, weights)


def vectorize_all(bags: Iterable[Mapping[str, int]], vocab: Vocabulary,
                  use_tfidf: bool) -> list[SparseVector]:
    return [vectorize(b, vocab, use_tfidf) for b in bags]


def to_csr(vectors: Sequence[SparseVector], dim: int) -> sp.csr_matrix:
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        indptr[i + 1] = indptr[i] + len(v)
    indices = np.concatenate([v.indices for v in vectors]) if vectors else np.zeros(0, np.int64)
    data = np.concatenate([v.weights for v in vectors]) if vectors else np.zeros(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), dim))


class BagMatrix:
    """Token counts of a document collection as a CSR matrix whose columns are
    the lexicographically sorted union of all tokens.

    Because a fold's vocabulary is a subset of these columns taken in the same
    order, per-fold vectorization reduces to array operations. The result is
    the same as ``build_vocabulary`` + ``vectorize`` on the bags.
    """

    def __init__(self, tokens: list[str], counts: sp.csr_matrix):
        self.tokens = tokens
        self.counts = counts
        self.row_max = (counts.max(axis=1).toarray().ravel() if counts.shape[1]
                        else np.zeros(counts.shape[0]))

    @classmethod
    def from_bags(cls, bags: Sequence[Mapping[str, int]]) -> "BagMatrix":
        tokens = sorted(set().union(*bags)) if bags else []
        col = {t: i for i, t in enumerate(tokens)}
        indptr = [0]
        indices: list[int] = []
        data: list[int] = []
        for bag in bags:
            for tok, c in bag.items():
                indices.append(col[tok])
                data.append(c)
            indptr.append(len(indices))
        m = sp.csr_matrix((np.array(data, dtype=np.float64), np.array(indices, dtype=np.int64),
                           np.array(indptr, dtype=np.int64)), shape=(len(bags), len(tokens)))
        m.sort_indices()
        return cls(tokens, m)

    @classmethod
    def hstack(cls, parts: Sequence["BagMatrix"]) -> "BagMatrix":
        """Join column blocks; the caller passes them in token order."""
        if len(parts) == 1:
            return parts[0]
        tokens = [t for p in parts for t in p.tokens]
        return cls(tokens, sp.hstack([p.counts for p in parts], format="csr"))

    def __len__(self):
        return self.counts.shape[0]

    def vocabulary(self, rows: Sequence[int]) -> Vocabulary:
        df = np.bincount(self.counts[rows].indices, minlength=len(self.tokens))
        present = np.flatnonzero(df)
        if present.size == 0:
            raise VocabularyError("empty vocabulary")
        index = {self.tokens[g]: i for i, g in enumerate(present.tolist())}
        return Vocabulary(index, {self.tokens[g]: int(df[g]) for g in present.tolist()}, len(rows))

    def fold(self, train_rows: Sequence[int], test_rows: Sequence[int],
             use_tfidf: bool) -> tuple[sp.csr_matrix, sp.csr_matrix, int]:
        """(train matrix, test matrix, vocabulary size) for one split."""
        train_rows = np.asarray(train_rows, dtype=np.int64)
        df = np.bincount(self.counts[train_rows].indices, minlength=len(self.tokens))
        present = np.flatnonzero(df)
        if present.size == 0:
            raise VocabularyError("empty vocabulary")
        colmap = np.full(len(self.tokens), -1, dtype=np.int64)
        colmap[present] = np.arange(present.size)
        idf = np.log(len(train_rows) / df[present]) if use_tfidf else None
        return (self._weights(train_rows, colmap, idf, present.size),
                self._weights(np.asarray(test_rows, dtype=np.int64), colmap, idf, present.size),
                int(present.size))

    def _weights(self, rows, colmap, idf, dim) -> sp.csr_matrix:
        m = self.counts[rows]
        per_row = np.diff(m.indptr)
        r = np.repeat(np.arange(len(rows)), per_row)
        tf = m.data / np.repeat(self.row_max[rows], per_row)
        cols = colmap[m.indices]
        keep = cols >= 0
        w = tf[keep]
        cols, r = cols[keep], r[keep]
        if idf is not None:
            w = w * idf[cols]
            nz = w != 0.0
            w, cols, r = w[nz], cols[nz], r[nz]
        out = sp.csr_matrix((w, (r, cols)), shape=(len(rows), dim))
        out.sort_indices()
        return out
