"""Sampling corpora from the LDA generative process."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from ..dtm import COUNT, DOCUMENT, DocTermMatrix, Vocabulary
from ..errors import DomainError


@dataclass(eq=False)
class SyntheticCorpus:
    dtm: DocTermMatrix
    true_beta: np.ndarray
    true_theta: np.ndarray
    true_assignments: list[np.ndarray]


def sample_corpus(k: int, V: int, M: int, doc_len, alpha: float, delta: float,
                  seed: int, support: Sequence[Sequence[int]] | None = None) -> SyntheticCorpus:
    """Draw a corpus: beta_t ~ Dir(delta), theta_d ~ Dir(alpha), z ~ theta, w ~ beta_z.

    ``doc_len`` is one length for every document or a sequence of M lengths.
    ``support`` optionally restricts topic ``t`` to the term ids in
    ``support[t]`` (the Dirichlet draw is then over those terms only).
    Topic ids in ``true_assignments`` are 0-based.
    """
    if min(k, V, M) < 1:
        raise DomainError("k, V and M must be >= 1")
    if not (alpha > 0 and delta > 0):
        raise DomainError("alpha and delta must be positive")
    lengths = np.full(M, doc_len, dtype=np.int64) if np.ndim(doc_len) == 0 else np.asarray(doc_len, dtype=np.int64)
    if lengths.shape != (M,) or lengths.min() < 1:
        raise DomainError("doc_len must be >= 1 for every document")
    if support is not None and len(support) != k:
        raise DomainError("support needs one term set per topic")

    rng = np.random.default_rng(seed)
    beta = np.zeros((k, V))
    for t in range(k):
        cols = np.arange(V) if support is None else np.asarray(support[t])
        beta[t, cols] = rng.dirichlet(np.full(len(cols), delta))
    theta = rng.dirichlet(np.full(k, alpha), size=M)
    # the small-alpha sampler can miss 1 by an ulp; k=1 must give exactly 1
    beta /= beta.sum(axis=1, keepdims=True)
    theta /= theta.sum(axis=1, keepdims=True)

    return _draw_corpus(beta, theta, lengths, rng)


def sample_block_corpus(n_topics: int, block_size: int, M: int, doc_len, alpha: float,
                        seed: int) -> SyntheticCorpus:
    """Corpus whose topics are uniform over disjoint blocks of terms.

    Topic ``t`` puts mass ``1/block_size`` on terms
    ``t*block_size .. (t+1)*block_size - 1``; mixtures are Dir(alpha).
    """
    if min(n_topics, block_size, M) < 1 or not alpha > 0:
        raise DomainError("dimensions must be >= 1 and alpha positive")
    V = n_topics * block_size
    lengths = np.full(M, doc_len, dtype=np.int64) if np.ndim(doc_len) == 0 else np.asarray(doc_len, dtype=np.int64)
    beta = np.zeros((n_topics, V))
    for t in range(n_topics):
        beta[t, t * block_size:(t + 1) * block_size] = 1.0 / block_size
    rng = np.random.default_rng(seed)
    theta = rng.dirichlet(np.full(n_topics, alpha), size=M)
    theta /= theta.sum(axis=1, keepdims=True)
    return _draw_corpus(beta, theta, lengths, rng)


def _draw_corpus(beta, theta, lengths, rng) -> SyntheticCorpus:
    k, V = beta.shape
    M = len(lengths)
    counts = np.zeros((M, V), dtype=np.int64)
    assignments = []
    for d in range(M):
        z = rng.choice(k, size=lengths[d], p=theta[d])
        w = np.empty(lengths[d], dtype=np.int64)
        for t in range(k):
            mask = z == t
            n = int(mask.sum())
            if n:
                w[mask] = rng.choice(V, size=n, p=beta[t])
        counts[d] = np.bincount(w, minlength=V)
        assignments.append(z)

    width = max(4, len(str(max(M, V))))
    rows = tuple(f"doc{d + 1:0{width}d}" for d in range(M))
    vocab = Vocabulary(f"w{j + 1:0{width}d}" for j in range(V))
    dtm = DocTermMatrix(rows, vocab, sp.csr_matrix(counts), COUNT, DOCUMENT)
    return SyntheticCorpus(dtm, beta, theta, assignments)
