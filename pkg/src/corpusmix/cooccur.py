"""Term association by the log-likelihood ratio over boolean contexts."""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dtm import BOOLEAN, SENTENCE, DocTermMatrix, build_dtm
from .errors import DomainError, UnknownTermError
from .textprep import TokenizedDoc


@dataclass(frozen=True)
class ContingencyCounts:
    m_total: int
    m_i: int
    m_j: int
    m_ij: int

    def check(self):
        M, a, b, ab = self.m_total, self.m_i, self.m_j, self.m_ij
        if min(M, a, b, ab) < 0:
            raise DomainError(f"negative count in {self}")
        if a > M or b > M:
            raise DomainError(f"document frequency exceeds m_total in {self}")
        if ab > min(a, b):
            raise DomainError(f"m_ij exceeds min(m_i, m_j) in {self}")
        if a + b - ab > M:
            raise DomainError(f"m_i + m_j - m_ij exceeds m_total in {self}")
        return self

    @property
    def expected_ij(self) -> float:
        return self.m_i * self.m_j / self.m_total if self.m_total else 0.0


def _xlogx(x):
    x = np.asarray(x, dtype=np.longdouble)
    safe = np.where(x > 0, x, 1)
    return np.where(x > 0, x * np.log(safe), 0)


def llr_array(m_total, m_i, m_j, m_ij) -> np.ndarray:
    """Vectorised LLR; 0 * log 0 is taken as 0.

    Evaluated in extended precision: the ten terms are of order M log M and
    cancel down to the statistic. Exact integer independence
    (m_ij * M == m_i * m_j) returns exactly 0.
    """
    M, a, b, ab = (np.asarray(v, dtype=np.int64) for v in (m_total, m_i, m_j, m_ij))
    # canonical operand order makes the result exactly symmetric in (a, b)
    a, b = np.minimum(a, b), np.maximum(a, b)
    s = (
        _xlogx(M) - _xlogx(a) - _xlogx(b) + _xlogx(ab)
        + _xlogx(M - a - b + ab)
        + _xlogx(a - ab) + _xlogx(b - ab)
        - _xlogx(M - a) - _xlogx(M - b)
    )
    return np.where(ab * M == a * b, 0.0, np.asarray(2 * s, dtype=np.float64))


def llr(c: ContingencyCounts) -> float:
    c.check()
    return float(llr_array(c.m_total, c.m_i, c.m_j, c.m_ij))


def build_boolean_contexts(corpus: Sequence[TokenizedDoc], context: str = SENTENCE) -> DocTermMatrix:
    return build_dtm(corpus, weighting=BOOLEAN, context=context)


@dataclass(frozen=True)
class Association:
    term: str
    llr: float
    m_i: int
    m_j: int
    m_ij: int


def _focal_column(bdtm: DocTermMatrix, focal: str) -> int:
    if bdtm.weighting != BOOLEAN:
        raise DomainError("co-occurrence analysis needs a boolean matrix")
    if focal not in bdtm.vocab:
        raise UnknownTermError(focal, difflib.get_close_matches(focal, bdtm.vocab.terms, n=5))
    return bdtm.vocab.index[focal]


def associations(bdtm: DocTermMatrix, focal: str) -> list[Association]:
    """All positively associated terms of *focal*, strongest first.

    A term qualifies when it shares at least one context with *focal* and
    co-occurs more often than independence predicts. Ties break on the term.
    """
    f = _focal_column(bdtm, focal)
    X = bdtm.matrix.tocsc()
    M = X.shape[0]
    df = np.asarray(X.sum(axis=0)).ravel()
    joint = np.asarray((X[:, f].T @ X).todense()).ravel()
    cand = np.flatnonzero((joint >= 1) & (joint * M > df[f] * df))
    cand = cand[cand != f]
    scores = llr_array(M, df[f], df[cand], joint[cand])
    out = [
        Association(bdtm.vocab.terms[j], float(s), int(df[f]), int(df[j]), int(joint[j]))
        for j, s in zip(cand, scores)
    ]
    out.sort(key=lambda a: (-a.llr, a.term))
    return out


def cooccurring_terms(bdtm: DocTermMatrix, focal: str, top_n: int) -> list[tuple[str, float]]:
    return [(a.term, a.llr) for a in associations(bdtm, focal)[:max(top_n, 0)]]


@dataclass
class EgoNetwork:
    focal: str
    nodes: list[tuple[str, int]]
    edges: list[tuple[str, str, float]]
    depth: int

    def degree(self, term) -> int:
        return dict(self.nodes)[term]


def pair_counts(bdtm: DocTermMatrix, a: str, b: str) -> ContingencyCounts:
    X = bdtm.matrix.tocsc()
    ia, ib = bdtm.vocab.index[a], bdtm.vocab.index[b]
    ca, cb = X[:, ia].toarray().ravel(), X[:, ib].toarray().ravel()
    return ContingencyCounts(X.shape[0], int(ca.sum()), int(cb.sum()), int((ca & cb).sum()))


def ego_network(bdtm: DocTermMatrix, focal: str, top_n: int = 10, depth: int = 1,
                llr_threshold: float = 0.0, fanout: int = 5) -> EgoNetwork:
    """Star of *focal* and its top associates, optionally with a second ring.

    The first ring is the focal term's ``top_n`` associates. With ``depth=2``
    each ring term adds up to ``fanout`` of its own associates, and ring
    terms are linked to each other. Every edge needs an LLR of at least
    ``llr_threshold``. Node degree counts incident edges. Edge and node
    order is deterministic.
    """
    if depth not in (1, 2):
        raise DomainError("depth must be 1 or 2")
    if llr_threshold < 0:
        raise DomainError("llr_threshold must be >= 0")
    ring = [a for a in associations(bdtm, focal) if a.llr >= llr_threshold][:max(top_n, 0)]
    edges: dict[frozenset, tuple[str, str, float]] = {}
    order = [focal]

    def add_edge(a, b, value):
        key = frozenset((a, b))
        if key not in edges:
            edges[key] = (a, b, value)
        for t in (a, b):
            if t not in order:
                order.append(t)

    for a in ring:
        add_edge(focal, a.term, a.llr)
    if depth == 2:
        ring_terms = [a.term for a in ring]
        ring_set = set(ring_terms)
        for term in ring_terms:
            assoc = [x for x in associations(bdtm, term)
                     if x.term != focal and x.llr >= llr_threshold]
            for x in assoc:
                if x.term in ring_set:
                    add_edge(term, x.term, x.llr)
            branches = [x for x in assoc if x.term not in ring_set][:fanout]
            for x in branches:
                add_edge(term, x.term, x.llr)

    degree = {t: 0 for t in order}
    for a, b, _ in edges.values():
        degree[a] += 1
        degree[b] += 1
    return EgoNetwork(focal, [(t, degree[t]) for t in order], list(edges.values()), depth)
