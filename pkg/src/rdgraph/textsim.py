"""Deterministic TF-IDF cosine similarity over a fixed corpus.

This is the default similarity provider behind topic clustering, similar
edges, and the validation checks.  Scores are corpus-dependent and fully
reproducible; anything smarter (embeddings, learned relatedness) can be
swapped in through the :class:`SimilarityProvider` protocol.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Protocol

_TOKEN_RE = re.compile(r"[a-z0-9_]+")

DEFAULT_STOPWORDS = frozenset()


class SimilarityProvider(Protocol):
    """Anything that scores two texts symmetrically into [0, 1]."""

    def score(self, text_a: str, text_b: str) -> float:  # pragma: no cover
        ...


def tokenize(text: str, stopwords: frozenset[str] = DEFAULT_STOPWORDS) -> list[str]:
    """Lowercase tokens split on non-alphanumerics (keeping ``_``).

    Single-character tokens and stopwords are dropped; no stemming.
    """
    tokens = _TOKEN_RE.findall(text.lower())
    return [t for t in tokens if len(t) > 1 and t not in stopwords]


@dataclass(frozen=True)
class TfIdfModel:
    """Vocabulary, smoothed idf weights, and the document count behind them.

    idf(t) = ln((doc_count + 1) / (df(t) + 1)) + 1, which is strictly
    positive for every vocabulary token.
    """

    vocabulary: dict[str, int]
    idf: tuple[float, ...]
    doc_count: int
    stopwords: frozenset[str] = DEFAULT_STOPWORDS


def build_model(
    docs: Iterable[str], stopwords: frozenset[str] = DEFAULT_STOPWORDS
) -> TfIdfModel:
    """Fit vocabulary and idf over a corpus; the corpus must be non-empty."""
    doc_list = list(docs)
    if not doc_list:
        raise ValueError("cannot build a similarity model over an empty corpus")
    df: dict[str, int] = {}
    for doc in doc_list:
        for token in set(tokenize(doc, stopwords)):
            df[token] = df.get(token, 0) + 1
    vocabulary = {token: i for i, token in enumerate(sorted(df))}
    n = len(doc_list)
    idf = tuple(
        math.log((n + 1) / (df[token] + 1)) + 1.0 for token in sorted(df)
    )
    return TfIdfModel(
        vocabulary=vocabulary, idf=idf, doc_count=n, stopwords=stopwords
    )


def vectorize(model: TfIdfModel, text: str) -> dict[int, float]:
    """Sparse tf·idf vector (raw counts times idf); unseen tokens are ignored."""
    counts: dict[int, int] = {}
    for token in tokenize(text, model.stopwords):
        index = model.vocabulary.get(token)
        if index is not None:
            counts[index] = counts.get(index, 0) + 1
    return {i: c * model.idf[i] for i, c in counts.items()}


def similarity(model: TfIdfModel, text_a: str, text_b: str) -> float:
    """Cosine of the L2-normalized tf·idf vectors, in [0, 1].

    Either vector empty gives 0; equal vectors give exactly 1.
    """
    va = vectorize(model, text_a)
    vb = vectorize(model, text_b)
    if not va or not vb:
        return 0.0
    if va == vb:
        return 1.0
    dot = 0.0
    for index in sorted(va.keys() & vb.keys()):
        dot += va[index] * vb[index]
    norm_a = math.sqrt(sum(w * w for _, w in sorted(va.items())))
    norm_b = math.sqrt(sum(w * w for _, w in sorted(vb.items())))
    value = dot / (norm_a * norm_b)
    return min(1.0, max(0.0, value))


class TfIdfProvider:
    """SimilarityProvider backed by a fixed TfIdfModel."""

    def __init__(self, model: TfIdfModel):
        self.model = model

    def score(self, text_a: str, text_b: str) -> float:
        return similarity(self.model, text_a, text_b)
