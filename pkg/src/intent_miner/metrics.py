"""Cluster-quality metrics and phrase-context metrics.

Cluster quality: Silhouette over cosine distance, Calinski-Harabasz and
Davies-Bouldin over Euclidean geometry, all on the normalized summary
vectors. Degenerate geometry (zero within-cluster dispersion, coincident
centroids) yields an infinity sentinel rather than an exception.

Context metrics measure how much relational context a cluster's phrases
carry: unique words, adjacent noun-noun chunks, and action-object word
pairs (verb or adjective with a noun within three positions), counted
inside phrases only and averaged over clusters.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .clustering import ClusterAssignment, PhraseVector, dense_matrix
from .scoring import SummaryPhrase

AO_WINDOW = 3
_ACTION_TAGS = frozenset({"VERB", "ADJ"})

CONTEXT_METRICS = ("unique_words", "noun_chunks", "ao_pairs")


@dataclass(frozen=True)
class ContextStats:
    per_cluster: tuple[int, ...]  # indexed by cluster id
    mean: float
    sd: float  # population standard deviation


@dataclass(frozen=True)
class MetricsReport:
    method: str
    k: int
    silhouette: float
    calinski_harabasz: float  # may be inf
    davies_bouldin: float  # may be inf
    unique_words: ContextStats
    noun_chunks: ContextStats
    ao_pairs: ContextStats

    def context(self, name: str) -> ContextStats:
        if name not in CONTEXT_METRICS:
            raise ValueError(f"unknown context metric {name!r}")
        return getattr(self, name)


def _check_labels(labels: np.ndarray, n: int) -> int:
    if len(labels) != n:
        raise ValueError("labels and vectors disagree in length")
    k = len(set(labels.tolist()))
    return k


def silhouette(matrix: np.ndarray, labels: Sequence[int]) -> float:
    """Mean silhouette with cosine distance (1 - dot on normalized rows).

    Points in singleton clusters contribute 0; a point with a == b == 0
    contributes 0 by convention.
    """
    labels = np.asarray(labels)
    n = matrix.shape[0]
    k = _check_labels(labels, n)
    if k < 2:
        raise ValueError("silhouette needs at least 2 clusters")
    distance = 1.0 - matrix @ matrix.T
    values = []
    for i in range(n):
        own = (labels == labels[i]) & (np.arange(n) != i)
        if not own.any():
            values.append(0.0)
            continue
        a = float(distance[i, own].mean())
        b = min(
            float(distance[i, labels == other].mean())
            for other in set(labels.tolist())
            if other != labels[i]
        )
        top = max(a, b)
        values.append(0.0 if top == 0.0 else (b - a) / top)
    return float(np.mean(values))


def calinski_harabasz(matrix: np.ndarray, labels: Sequence[int]) -> float:
    """Between/within dispersion ratio, Euclidean; inf when within is zero."""
    labels = np.asarray(labels)
    n = matrix.shape[0]
    k = _check_labels(labels, n)
    if k < 2:
        raise ValueError("calinski_harabasz needs at least 2 clusters")
    if n <= k:
        raise ValueError("calinski_harabasz needs more points than clusters")
    grand = matrix.mean(axis=0)
    between = 0.0
    within = 0.0
    for cluster in sorted(set(labels.tolist())):
        rows = matrix[labels == cluster]
        centroid = rows.mean(axis=0)
        between += len(rows) * float(((centroid - grand) ** 2).sum())
        within += float(((rows - centroid) ** 2).sum())
    if within == 0.0:
        return float("inf")
    return (between / (k - 1)) / (within / (n - k))


def davies_bouldin(matrix: np.ndarray, labels: Sequence[int]) -> float:
    """Mean over clusters of the worst (sigma_i + sigma_j) / centroid distance.

    sigma is the mean Euclidean distance of members to their centroid.
    Any coincident centroid pair makes the index infinity.
    """
    labels = np.asarray(labels)
    n = matrix.shape[0]
    k = _check_labels(labels, n)
    if k < 2:
        raise ValueError("davies_bouldin needs at least 2 clusters")
    clusters = sorted(set(labels.tolist()))
    centroids = np.vstack([matrix[labels == c].mean(axis=0) for c in clusters])
    sigmas = np.array([
        float(np.linalg.norm(matrix[labels == c] - centroids[i], axis=1).mean())
        for i, c in enumerate(clusters)
    ])
    worst = []
    for i in range(len(clusters)):
        ratios = []
        for j in range(len(clusters)):
            if i == j:
                continue
            d = float(np.linalg.norm(centroids[i] - centroids[j]))
            ratios.append(float("inf") if d == 0.0 else (sigmas[i] + sigmas[j]) / d)
        worst.append(max(ratios))
    return float(np.mean(worst)) if all(np.isfinite(worst)) else float("inf")


def phrase_noun_chunks(pos: Sequence[str]) -> int:
    """Adjacent NOUN,NOUN pairs inside one phrase."""
    return sum(1 for i in range(len(pos) - 1) if pos[i] == "NOUN" and pos[i + 1] == "NOUN")


def phrase_ao_pairs(pos: Sequence[str]) -> int:
    """Unordered word pairs within 3 positions pairing VERB-or-ADJ with NOUN."""
    count = 0
    for i in range(len(pos)):
        for j in range(i + 1, min(len(pos), i + AO_WINDOW + 1)):
            one, two = pos[i], pos[j]
            if (one in _ACTION_TAGS and two == "NOUN") or (two in _ACTION_TAGS and one == "NOUN"):
                count += 1
    return count


def context_metrics(
    labels: dict[str, int],
    summaries: dict[str, list[SummaryPhrase]],
    k: int,
) -> dict[str, ContextStats]:
    """Per-cluster context counts plus their mean and population SD.

    A cluster's phrase list is the concatenation of its member threads'
    summaries; unique_words uses set semantics over all their words, the
    other two metrics sum per-phrase counts. Counting never crosses a
    phrase boundary.
    """
    unique = [0] * k
    chunks = [0] * k
    pairs = [0] * k
    words: list[set[str]] = [set() for _ in range(k)]
    for thread_id, cluster in labels.items():
        for phrase in summaries.get(thread_id, []):
            words[cluster].update(phrase.words)
            chunks[cluster] += phrase_noun_chunks(phrase.pos)
            pairs[cluster] += phrase_ao_pairs(phrase.pos)
    for cid in range(k):
        unique[cid] = len(words[cid])

    def stats(values: list[int]) -> ContextStats:
        return ContextStats(
            per_cluster=tuple(values),
            mean=statistics.fmean(values),
            sd=statistics.pstdev(values),
        )

    return {"unique_words": stats(unique), "noun_chunks": stats(chunks), "ao_pairs": stats(pairs)}


def compute_report(
    assignment: ClusterAssignment,
    vectors: Sequence[PhraseVector],
    summaries: dict[str, list[SummaryPhrase]],
) -> MetricsReport:
    """Full metric set for one clustering over its own summaries."""
    matrix, _ = dense_matrix(vectors)
    labels = np.array([assignment.labels[v.thread_id] for v in vectors])
    context = context_metrics(assignment.labels, summaries, assignment.k)
    return MetricsReport(
        method=assignment.method_tag,
        k=assignment.k,
        silhouette=silhouette(matrix, labels),
        calinski_harabasz=calinski_harabasz(matrix, labels),
        davies_bouldin=davies_bouldin(matrix, labels),
        unique_words=context["unique_words"],
        noun_chunks=context["noun_chunks"],
        ao_pairs=context["ao_pairs"],
    )


def _finite(value: float) -> float | str:
    """JSON cannot carry IEEE infinities; use a string sentinel."""
    return "inf" if value == float("inf") else float(value)


def report_to_dict(report: MetricsReport) -> dict:
    payload: dict = {
        "method": report.method,
        "k": report.k,
        "silhouette": float(report.silhouette),
        "calinski_harabasz": _finite(report.calinski_harabasz),
        "davies_bouldin": _finite(report.davies_bouldin),
        "context": {},
    }
    for name in CONTEXT_METRICS:
        stats = report.context(name)
        payload["context"][name] = {
            "per_cluster": list(stats.per_cluster),
            "mean": float(stats.mean),
            "sd": float(stats.sd),
        }
    return payload


def write_hist_csv(reports: Sequence[MetricsReport], sink: IO[str]) -> None:
    """Per-cluster context metric rows: method, k, cluster_id, metric, value."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["method", "k", "cluster_id", "metric", "value"])
    for report in reports:
        for name in CONTEXT_METRICS:
            for cid, value in enumerate(report.context(name).per_cluster):
                writer.writerow([report.method, report.k, cid, name, value])


def format_table(reports: Sequence[MetricsReport]) -> str:
    """Plain-text comparison table, one row per (method, k)."""
    headers = ["method", "k", "silhouette", "CH", "DBI",
               "unique_words", "noun_chunks", "ao_pairs"]
    rows = [headers]
    for report in reports:
        def pm(stats: ContextStats) -> str:
            return f"{stats.mean:.2f} +/- {stats.sd:.2f}"

        rows.append([
            report.method,
            str(report.k),
            f"{report.silhouette:.4f}",
            "inf" if report.calinski_harabasz == float("inf") else f"{report.calinski_harabasz:.4f}",
            "inf" if report.davies_bouldin == float("inf") else f"{report.davies_bouldin:.4f}",
            pm(report.unique_words),
            pm(report.noun_chunks),
            pm(report.ao_pairs),
        ])
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(headers))))
    return "\n".join(lines)
