"""Lexicon-based comment sentiment and aspect-level aggregation.

A comment's score is the mean valence of its lexicon-matched lemmas, with
a sign flip when a negator appears within the three preceding tokens. An
aspect (an intent phrase pooled across all extraction rules) aggregates
the scores of exactly the comments that contain all of its lemmas, giving
a mean, a population variance, and an occurrence count. Rankings order
aspects by mean (positive, negative) or variance (variant); the ten most
variant aspects form the VR representation of a thread.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable, Sequence

from .annotation import Sentence
from .corpus import Thread
from .extraction import NEGATOR_LEMMAS, ActionObjectPair
from .scoring import SummaryPhrase
from .textutil import lower_tokens

logger = logging.getLogger(__name__)

NEGATION_WINDOW = 3  # tokens looked back for a negator
VR_TOP = 10

RANK_MODES = ("positive", "variant", "negative")


@dataclass(frozen=True)
class SentimentLexicon:
    valence: dict[str, float]  # lemma -> [-1, 1]
    negators: frozenset[str] = NEGATOR_LEMMAS


@dataclass(frozen=True)
class CommentSentiment:
    comment_id: str
    score: float  # in [-1, 1]


@dataclass(frozen=True)
class AspectScore:
    pair: ActionObjectPair
    mean: float
    variance: float  # population variance, 0 for singletons
    n_occurrences: int

    @property
    def text(self) -> str:
        return self.pair.text


def load_lexicon(source: Iterable[str], negators: frozenset[str] = NEGATOR_LEMMAS) -> SentimentLexicon:
    """Read a TSV lexicon: lemma<TAB>valence, valence within [-1, 1]."""
    valence: dict[str, float] = {}
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"lexicon line {line_no}: expected lemma<TAB>valence")
        lemma, value_text = parts
        value = float(value_text)
        if not -1.0 <= value <= 1.0:
            raise ValueError(f"lexicon line {line_no}: valence {value} outside [-1, 1]")
        valence[lemma.lower()] = value
    return SentimentLexicon(valence=valence, negators=negators)


def load_default_lexicon() -> SentimentLexicon:
    """The bundled general-purpose English valence lexicon."""
    text = resources.files("intent_miner.data").joinpath("lexicon.tsv").read_text(encoding="utf-8")
    return load_lexicon(text.splitlines())


def score_comment(lemmas: Sequence[str], lexicon: SentimentLexicon) -> float:
    """Mean valence of matched lemmas with negation flip, clamped to [-1, 1].

    A matched lemma's valence is negated when any negator occupies one of
    the NEGATION_WINDOW positions before it. No matches scores 0.0.
    """
    values = []
    for i, lemma in enumerate(lemmas):
        valence = lexicon.valence.get(lemma)
        if valence is None:
            continue
        window = lemmas[max(0, i - NEGATION_WINDOW):i]
        if any(tok in lexicon.negators for tok in window):
            valence = -valence
        values.append(valence)
    if not values:
        return 0.0
    return max(-1.0, min(1.0, sum(values) / len(values)))


def score_comments(comment_lemmas: dict[str, list[str]], lexicon: SentimentLexicon) -> list[CommentSentiment]:
    """Score a batch of comments, keyed output order following input order."""
    return [CommentSentiment(cid, score_comment(lemmas, lexicon)) for cid, lemmas in comment_lemmas.items()]


def build_comment_lemmas(threads: Sequence[Thread], annotations: dict[str, tuple[Sentence, ...]] | None = None) -> dict[str, list[str]]:
    """Lemma stream per comment: annotation lemmas when available,
    lowercased surface tokens otherwise."""
    out: dict[str, list[str]] = {}
    for thread in threads:
        for comment in thread.comments:
            sentences = (annotations or {}).get(comment.id)
            if sentences:
                out[comment.id] = [t.lemma for s in sentences for t in s.tokens]
            else:
                out[comment.id] = lower_tokens(comment.body)
    return out


def matches_comment(pair: ActionObjectPair, comment_lemmas: Sequence[str], match_window: int | None = None) -> bool:
    """Aspect occurrence test.

    Default: bag containment, every pair lemma (with multiplicity) occurs
    in the comment. With match_window N, the containment must hold within
    at least one window of N consecutive comment lemmas.
    """
    needed = Counter(pair.lemmas)
    if match_window is None:
        available = Counter(comment_lemmas)
        return all(available[w] >= c for w, c in needed.items())
    if match_window < len(pair.lemmas):
        return False
    for start in range(max(1, len(comment_lemmas) - match_window + 1)):
        window = Counter(comment_lemmas[start:start + match_window])
        if all(window[w] >= c for w, c in needed.items()):
            return True
    return False


def score_aspect(
    pair: ActionObjectPair,
    comment_lemmas: dict[str, list[str]],
    comment_scores: dict[str, float],
    match_window: int | None = None,
) -> AspectScore | None:
    """Aggregate sentiment over the comments containing the aspect.

    Returns None when no comment matches; such aspects are excluded from
    every ranking rather than treated as errors.
    """
    matched = [
        comment_scores[cid]
        for cid, lemmas in comment_lemmas.items()
        if matches_comment(pair, lemmas, match_window)
    ]
    if not matched:
        return None
    n = len(matched)
    mean = sum(matched) / n
    variance = sum((s - mean) ** 2 for s in matched) / n
    return AspectScore(pair=pair, mean=mean, variance=variance, n_occurrences=n)


def pool_aspects(pairs: Sequence[ActionObjectPair]) -> list[ActionObjectPair]:
    """Pool pairs across all rules into aspect candidates.

    Aspects are rule-free: pairs sharing (action, objects) collapse to the
    earliest occurrence regardless of which rule produced them.
    """
    seen: dict[tuple[str, tuple[str, ...]], ActionObjectPair] = {}
    for pair in pairs:
        seen.setdefault((pair.action_lemma, pair.object_lemmas), pair)
    return list(seen.values())


def rank_aspects(aspects: Sequence[AspectScore], mode: str) -> list[AspectScore]:
    """Order aspects for one ranking mode.

    positive: mean descending; variant: variance descending; negative:
    mean ascending. Ties prefer more occurrences, then phrase text.
    """
    if mode == "positive":
        key = lambda a: (-a.mean, -a.n_occurrences, a.text)
    elif mode == "variant":
        key = lambda a: (-a.variance, -a.n_occurrences, a.text)
    elif mode == "negative":
        key = lambda a: (a.mean, -a.n_occurrences, a.text)
    else:
        raise ValueError(f"unknown ranking mode {mode!r}; expected one of {RANK_MODES}")
    return sorted(aspects, key=key)


def variant_summary(aspects: Sequence[AspectScore]) -> list[SummaryPhrase]:
    """VR representation: the top ten most-variant aspects as phrases.

    The phrase score slot carries the sentiment variance.
    """
    ranked = rank_aspects(aspects, "variant")[:VR_TOP]
    return [
        SummaryPhrase(
            text=a.text,
            score=a.variance,
            pos=(a.pair.action_upos, *a.pair.object_upos),
        )
        for a in ranked
    ]


def thread_aspects(
    thread_id: str,
    pairs: Sequence[ActionObjectPair],
    comment_lemmas: dict[str, list[str]],
    lexicon: SentimentLexicon,
    match_window: int | None = None,
) -> list[AspectScore]:
    """Score every pooled aspect of one thread against its own comments."""
    scores = {cid: score_comment(lemmas, lexicon) for cid, lemmas in comment_lemmas.items()}
    out = []
    for pair in pool_aspects(pairs):
        scored = score_aspect(pair, comment_lemmas, scores, match_window)
        if scored is not None:
            out.append(scored)
    return out


def write_aspects_jsonl(rows: Iterable[tuple[str, AspectScore]], sink: IO[str]) -> None:
    for thread_id, aspect in rows:
        sink.write(json.dumps({
            "thread_id": thread_id,
            "text": aspect.text,
            "rule": aspect.pair.rule,
            "mean": aspect.mean,
            "variance": aspect.variance,
            "n_occurrences": aspect.n_occurrences,
        }, sort_keys=True) + "\n")
