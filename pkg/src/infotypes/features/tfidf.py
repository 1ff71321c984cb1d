"""TF-IDF over word n-grams with smoothed idf and L2-normalized rows."""

from __future__ import annotations

import math
from collections import Counter

import numpy as np
import scipy.sparse as sp


def ngrams(tokens, lo: int, hi: int) -> list[str]:
    out = []
    for n in range(lo, hi + 1):
        out.extend(" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1))
    return out


class TfidfVectorizer:
    """Fitted TF-IDF vocabulary.

    Columns are the n-grams seen in training, in lexicographic order, and
    ``idf[t] = ln((1 + N) / (1 + df[t])) + 1``.
    """

    def __init__(self, ngram_range: tuple[int, int], vocabulary: dict[str, int], idf: np.ndarray, n_docs: int):
        self.ngram_range = tuple(ngram_range)
        self.vocabulary = vocabulary
        self.idf = np.asarray(idf, dtype=np.float64)
        self.n_docs = n_docs

    @property
    def width(self) -> int:
        return len(self.vocabulary)

    @classmethod
    def fit(cls, docs, ngram_range=(1, 1)) -> "TfidfVectorizer":
        lo, hi = ngram_range
        if lo != 1 or hi not in (1, 2):
            raise ValueError(f"unsupported ngram_range {ngram_range}")
        docs = list(docs)
        if not docs:
            raise ValueError("cannot fit a vectorizer on an empty training set")
        df: Counter = Counter()
        for tokens in docs:
            df.update(set(ngrams(list(tokens), lo, hi)))
        terms = sorted(df)
        n = len(docs)
        idf = np.array([math.log((1 + n) / (1 + df[t])) + 1.0 for t in terms])
        return cls((lo, hi), {t: i for i, t in enumerate(terms)}, idf, n)

    def transform(self, docs) -> sp.csr_matrix:
        lo, hi = self.ngram_range
        indptr, indices, data = [0], [], []
        for tokens in docs:
            counts = Counter(g for g in ngrams(list(tokens), lo, hi) if g in self.vocabulary)
            cols = sorted(self.vocabulary[g] for g in counts)
            inv = {self.vocabulary[g]: c for g, c in counts.items()}
            values = np.array([inv[c] for c in cols], dtype=np.float64) * self.idf[cols]
            norm = float(np.sqrt(values @ values)) if len(values) else 0.0
            if norm > 0:
                values = values / norm
            indices.extend(cols)
            data.extend(values.tolist())
            indptr.append(len(indices))
        return sp.csr_matrix(
            (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
            shape=(len(indptr) - 1, self.width),
        )

    def transform_one(self, tokens) -> sp.csr_matrix:
        return self.transform([tokens])

    def to_dict(self) -> dict:
        terms = sorted(self.vocabulary, key=self.vocabulary.__getitem__)
        return {
            "ngram_range": list(self.ngram_range),
            "vocabulary": terms,
            "idf": self.idf.tolist(),
            "n_docs": self.n_docs,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TfidfVectorizer":
        vocab = {t: i for i, t in enumerate(obj["vocabulary"])}
        return cls(tuple(obj["ngram_range"]), vocab, np.array(obj["idf"], dtype=np.float64), obj["n_docs"])


def fit_vectorizer(train_sentences, ngram_range=(1, 1)) -> TfidfVectorizer:
    return TfidfVectorizer.fit(train_sentences, ngram_range)


def transform_textual(vec: TfidfVectorizer, tokens) -> sp.csr_matrix:
    """One sentence as a 1 x V sparse row."""
    return vec.transform_one(tokens)
