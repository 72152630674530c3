"""Frequency tables, word-cloud sizing and the top-N term network."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dtm import DocTermMatrix, top_terms


@dataclass(frozen=True)
class WordCloudDatum:
    term: str
    frequency: int
    size: float


def wordcloud_data(freqs: Sequence[tuple[str, int]], max_terms: int = 100,
                   min_size: float = 1.0, max_size: float = 5.0) -> list[WordCloudDatum]:
    """Linear map of frequency onto [min_size, max_size] for the top terms."""
    if not freqs:
        raise ValueError("no frequencies given")
    if not min_size < max_size:
        raise ValueError("min_size must be below max_size")
    ranked = sorted(freqs, key=lambda tf: (-tf[1], tf[0]))[:max_terms]
    hi = max(f for _, f in ranked)
    lo = min(f for _, f in ranked)
    out = []
    for term, f in ranked:
        size = max_size if hi == lo else min_size + (max_size - min_size) * (f - lo) / (hi - lo)
        out.append(WordCloudDatum(term, int(f), float(size)))
    return out


@dataclass
class TermNetwork:
    nodes: list[tuple[str, int]]
    edges: list[tuple[str, str, int]]


def term_network(dtm: DocTermMatrix, top_n: int) -> TermNetwork:
    """Network of the *top_n* most frequent terms.

    Node weight is total frequency; the edge weight of a pair is the number
    of rows (contexts) of *dtm* containing both. Zero-weight pairs are left
    out and edges are ordered by (term_a, term_b) with term_a < term_b.
    """
    nodes = top_terms(dtm, top_n)
    cols = [dtm.vocab.index[t] for t, _ in nodes]
    presence = (dtm.matrix[:, cols] > 0).astype(np.int64)
    joint = (presence.T @ presence).toarray()
    edges = []
    for x in range(len(cols)):
        for y in range(x + 1, len(cols)):
            if joint[x, y] > 0:
                a, b = sorted((nodes[x][0], nodes[y][0]))
                edges.append((a, b, int(joint[x, y])))
    edges.sort()
    return TermNetwork(nodes, edges)
