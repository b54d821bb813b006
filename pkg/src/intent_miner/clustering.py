"""Phrase-summary vectorization and group-average agglomerative clustering.

A thread's vector is the bag of its summary-phrase words, each weighted
by count times the word's composite TF-IDF score, then L2-normalized.
Clustering is UPGMA over cosine similarity: repeatedly merge the pair of
clusters with the highest average pairwise similarity until k remain.
Zero vectors (empty or all-OOV summaries) sit out the merge loop and are
assigned afterward.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .scoring import SummaryPhrase, TfIdfModel

_CLUSTERS_FORMAT = "intent-miner-clusters"

LINKAGES = ("upgma",)


@dataclass(frozen=True)
class PhraseVector:
    thread_id: str
    weights: dict[str, float]  # word -> weight; L2-normalized; {} when zero
    norm: float  # Euclidean norm of the stored weights: 1.0, or 0.0 if zero

    @property
    def is_zero(self) -> bool:
        return self.norm == 0.0


@dataclass(frozen=True)
class ClusterAssignment:
    k: int
    labels: dict[str, int]  # thread_id -> cluster id in [0, k)
    method_tag: str
    merge_similarities: tuple[float, ...] = ()  # UPGMA merge trace, non-increasing


def vectorize_summary(thread_id: str, phrases: Sequence[SummaryPhrase], model: TfIdfModel) -> PhraseVector:
    """Bag of summary words weighted by composite score, L2-normalized.

    Out-of-vocabulary words weigh zero and drop out of the sparse map; a
    summary with no in-vocabulary words yields a flagged zero vector.
    """
    bag: Counter[str] = Counter()
    for phrase in phrases:
        bag.update(phrase.words)
    raw = {word: count * model.ti(word) for word, count in bag.items()}
    raw = {word: value for word, value in raw.items() if value > 0.0}
    norm = float(np.sqrt(sum(v * v for v in raw.values())))
    if norm == 0.0:
        return PhraseVector(thread_id=thread_id, weights={}, norm=0.0)
    return PhraseVector(
        thread_id=thread_id,
        weights={word: value / norm for word, value in sorted(raw.items())},
        norm=1.0,
    )


def cosine(u: PhraseVector, v: PhraseVector) -> float:
    """Dot product; exactly cosine similarity since vectors are unit or zero."""
    if len(u.weights) > len(v.weights):
        u, v = v, u
    return sum(value * v.weights.get(word, 0.0) for word, value in u.weights.items())


def dense_matrix(vectors: Sequence[PhraseVector]) -> tuple[np.ndarray, list[str]]:
    """Vectors as a dense matrix over the union of their words (sorted)."""
    dims = sorted({word for vec in vectors for word in vec.weights})
    index = {word: i for i, word in enumerate(dims)}
    matrix = np.zeros((len(vectors), max(len(dims), 1)))
    for row, vec in enumerate(vectors):
        for word, value in vec.weights.items():
            matrix[row, index[word]] = value
    return matrix, dims


def _upgma(sim: np.ndarray, k: int) -> tuple[list[list[int]], list[float]]:
    """Group-average merging on a similarity matrix down to k clusters.

    Cluster ids are the smallest original row index they contain; each
    merge folds the higher id into the lower. Ties on similarity pick the
    lexicographically lowest (id, id) pair. Returns member lists and the
    merge-similarity trace.
    """
    members: dict[int, list[int]] = {i: [i] for i in range(sim.shape[0])}
    sim = sim.copy()
    trace: list[float] = []
    while len(members) > k:
        active = sorted(members)
        sub = sim[np.ix_(active, active)]
        rows, cols = np.triu_indices(len(active), k=1)
        # argmax returns the first maximum in row-major order, which is the
        # lexicographically lowest (id, id) pair over the sorted active ids.
        pos = int(np.argmax(sub[rows, cols]))
        a, b = active[rows[pos]], active[cols[pos]]
        trace.append(float(sim[a, b]))
        size_a, size_b = len(members[a]), len(members[b])
        rest = np.array([c for c in active if c != a and c != b], dtype=int)
        if rest.size:
            merged = (size_a * sim[a, rest] + size_b * sim[b, rest]) / (size_a + size_b)
            sim[a, rest] = merged
            sim[rest, a] = merged
        members[a].extend(members[b])
        del members[b]
    return [members[cid] for cid in sorted(members)], trace


def agglomerative_cluster(
    vectors: Sequence[PhraseVector],
    k: int,
    method_tag: str,
    linkage: str = "upgma",
) -> ClusterAssignment:
    """Cluster thread vectors into exactly k non-empty clusters.

    Non-zero vectors go through UPGMA; clusters are then labeled 0..k-1 by
    their smallest input index. Zero vectors have similarity 0 to every
    centroid and are assigned to cluster 0, except when fewer than k
    non-zero vectors exist: then leading zero vectors become singleton
    clusters until k is reached.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unsupported linkage {linkage!r}; expected one of {LINKAGES}")
    n = len(vectors)
    if n == 0:
        raise ValueError("no vectors to cluster")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    ids = [v.thread_id for v in vectors]
    if len(set(ids)) != n:
        raise ValueError("duplicate thread ids among vectors")

    nonzero = [i for i, v in enumerate(vectors) if not v.is_zero]
    zero = [i for i, v in enumerate(vectors) if v.is_zero]

    trace: list[float] = []
    clusters: list[list[int]] = []  # member input indices
    if nonzero:
        k_eff = min(k, len(nonzero))
        matrix, _ = dense_matrix([vectors[i] for i in nonzero])
        groups, trace = _upgma(matrix @ matrix.T, k_eff)
        clusters = [[nonzero[pos] for pos in group] for group in groups]
        clusters.sort(key=min)

    shortfall = k - len(clusters)
    clusters.extend([idx] for idx in zero[:shortfall])
    leftover = zero[shortfall:] if shortfall > 0 else zero
    if leftover:
        clusters[0].extend(leftover)

    labels = {ids[idx]: cid for cid, group in enumerate(clusters) for idx in group}
    return ClusterAssignment(k=k, labels=labels, method_tag=method_tag, merge_similarities=tuple(trace))


def save_clusters(
    assignment: ClusterAssignment,
    vectors: Sequence[PhraseVector],
    linkage: str,
    sink: IO[str],
) -> None:
    """Persist an assignment with its vectors, so metrics need no model."""
    payload = {
        "format": _CLUSTERS_FORMAT,
        "method": assignment.method_tag,
        "k": assignment.k,
        "linkage": linkage,
        "labels": dict(sorted(assignment.labels.items())),
        "vectors": {v.thread_id: v.weights for v in sorted(vectors, key=lambda v: v.thread_id)},
    }
    json.dump(payload, sink, sort_keys=True)
    sink.write("\n")


def load_clusters(source: IO[str]) -> tuple[ClusterAssignment, list[PhraseVector]]:
    payload = json.load(source)
    if not isinstance(payload, dict) or payload.get("format") != _CLUSTERS_FORMAT:
        raise ValueError("not an intent-miner clusters file")
    assignment = ClusterAssignment(
        k=payload["k"],
        labels=payload["labels"],
        method_tag=payload["method"],
    )
    vectors = [
        PhraseVector(thread_id=tid, weights=weights, norm=1.0 if weights else 0.0)
        for tid, weights in payload["vectors"].items()
    ]
    return assignment, vectors
