"""Statistical keyword extraction baseline (YAKE-style, implemented here).

Single-document, unsupervised: every term gets five statistical features
(casing, position, frequency normalization, relatedness to context,
sentence dispersion) combined into a term score where lower means more
important. Candidate n-grams are scored from their terms, sorted
ascending, and filtered by sequential edit-similarity deduplication.

This follows the published YAKE formulation in its plain form: no special
casing for stopwords inside candidates, and candidates never start or end
with a stopword. Matching any specific third-party package bit-for-bit is
a non-goal.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

from .corpus import Thread
from .textutil import split_sentences, tokenize


def load_default_stopwords() -> frozenset[str]:
    text = resources.files("intent_miner.data").joinpath("stopwords.txt").read_text(encoding="utf-8")
    return frozenset(
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


@dataclass(frozen=True)
class YakeConfig:
    ngram_sizes: tuple[int, ...] = (2, 3)
    top_k: int = 10
    dedup_threshold: float = 0.9
    window: int = 1  # co-occurrence distance on each side
    stopwords: frozenset[str] = field(default_factory=load_default_stopwords)

    def __post_init__(self) -> None:
        if not self.ngram_sizes or not set(self.ngram_sizes) <= set(range(1, 6)):
            raise ValueError("ngram_sizes must be a non-empty subset of 1..5")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not 0 < self.dedup_threshold <= 1:
            raise ValueError("dedup_threshold must be in (0, 1]")
        if self.window < 1:
            raise ValueError("window must be >= 1")


@dataclass(frozen=True)
class YakeKeyword:
    text: str  # lowercase n-gram
    score: float  # positive; lower = more important


@dataclass
class _TermStats:
    tf: int = 0
    tf_upper: int = 0  # capitalized occurrences not at sentence start
    tf_acronym: int = 0  # all-caps occurrences, length >= 2
    sentence_indices: list[int] = field(default_factory=list)
    sentences: set[int] = field(default_factory=set)
    left: Counter[str] = field(default_factory=Counter)
    right: Counter[str] = field(default_factory=Counter)


def thread_text(thread: Thread) -> str:
    """Baseline input text: the comment bodies joined by sentence breaks."""
    return "\n".join(c.body for c in thread.comments)


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ch_a in enumerate(a, start=1):
        current = [i]
        for j, ch_b in enumerate(b, start=1):
            cost = 0 if ch_a == ch_b else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def edit_similarity(a: str, b: str) -> float:
    """Normalized edit similarity: 1 - distance / max length."""
    if not a and not b:
        return 1.0
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def _collect_term_stats(sentences: list[list[str]], window: int) -> dict[str, _TermStats]:
    stats: dict[str, _TermStats] = {}
    for si, tokens in enumerate(sentences):
        lowered = [t.lower() for t in tokens]
        for p, tok in enumerate(tokens):
            term = lowered[p]
            st = stats.setdefault(term, _TermStats())
            st.tf += 1
            st.sentence_indices.append(si)
            st.sentences.add(si)
            if tok.isupper() and len(tok) >= 2:
                st.tf_acronym += 1
            elif tok[0].isupper() and p > 0:
                st.tf_upper += 1
            for q in range(max(0, p - window), p):
                st.left[lowered[q]] += 1
            for q in range(p + 1, min(len(tokens), p + window + 1)):
                st.right[lowered[q]] += 1
    return stats


def _term_scores(stats: dict[str, _TermStats], n_sentences: int, stopwords: frozenset[str]) -> dict[str, float]:
    max_tf = max(st.tf for st in stats.values())
    content_tfs = [st.tf for term, st in stats.items() if term not in stopwords]
    if not content_tfs:  # degenerate all-stopword text
        content_tfs = [st.tf for st in stats.values()]
    mean_tf = statistics.fmean(content_tfs)
    std_tf = statistics.pstdev(content_tfs)

    scores: dict[str, float] = {}
    for term, st in stats.items():
        tcase = max(st.tf_upper, st.tf_acronym) / (1.0 + math.log(st.tf))
        tpos = math.log(math.log(3.0 + statistics.median(st.sentence_indices)))
        tfnorm = st.tf / (mean_tf + std_tf)
        dl = len(st.left) / sum(st.left.values()) if st.left else 0.0
        dr = len(st.right) / sum(st.right.values()) if st.right else 0.0
        trel = 1.0 + (dl + dr) * st.tf / max_tf
        tsent = len(st.sentences) / n_sentences
        scores[term] = (trel * tpos) / (tcase + tfnorm / trel + tsent / trel)
    return scores


def _collect_candidates(sentences: list[list[str]], config: YakeConfig) -> dict[str, tuple[tuple[str, ...], int]]:
    """Candidate n-grams keyed by lowercase text -> (terms, occurrence count).

    Candidates are contiguous, never start or end with a stopword, and
    never contain a pure-digit token.
    """
    candidates: dict[str, tuple[tuple[str, ...], int]] = {}
    for tokens in sentences:
        lowered = [t.lower() for t in tokens]
        for n in sorted(config.ngram_sizes):
            for start in range(len(tokens) - n + 1):
                gram = lowered[start:start + n]
                if gram[0] in config.stopwords or gram[-1] in config.stopwords:
                    continue
                if any(t.isdigit() for t in gram):
                    continue
                text = " ".join(gram)
                if text in candidates:
                    terms, count = candidates[text]
                    candidates[text] = (terms, count + 1)
                else:
                    candidates[text] = (tuple(gram), 1)
    return candidates


def extract_keywords(text: str, config: YakeConfig | None = None) -> list[YakeKeyword]:
    """Top keywords of one document, sorted ascending by score.

    Sequential deduplication walks the ascending-score candidate list and
    drops any candidate whose normalized edit similarity to an already
    kept phrase exceeds the threshold, until top_k survive.
    """
    config = config or YakeConfig()
    sentences = [tokenize(s) for s in split_sentences(text)]
    sentences = [s for s in sentences if s]
    if not sentences:
        return []

    stats = _collect_term_stats(sentences, config.window)
    term_scores = _term_scores(stats, len(sentences), config.stopwords)
    candidates = _collect_candidates(sentences, config)

    scored: list[YakeKeyword] = []
    for text_key, (terms, count) in candidates.items():
        product = math.prod(term_scores[t] for t in terms)
        total = sum(term_scores[t] for t in terms)
        scored.append(YakeKeyword(text=text_key, score=product / (count * (1.0 + total))))
    scored.sort(key=lambda kw: (kw.score, kw.text))

    kept: list[YakeKeyword] = []
    for kw in scored:
        if any(edit_similarity(kw.text, k.text) > config.dedup_threshold for k in kept):
            continue
        kept.append(kw)
        if len(kept) == config.top_k:
            break
    return kept
