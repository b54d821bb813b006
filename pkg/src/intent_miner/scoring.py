"""Composite TF-IDF fitting and intent-phrase scoring.

The model assigns every corpus word a composite score: the sum of its
tf-idf weights over all documents (one document = one comment's lemma
sequence). A phrase scores the mean of its distinct words' composite
scores; out-of-vocabulary words contribute zero to the sum but still
count in the denominator, so an all-unknown phrase scores exactly zero.
"""

from __future__ import annotations

import json
import math
import pickle
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .extraction import RULES, ActionObjectPair

_MODEL_FORMAT = "intent-miner-tfidf"
_MODEL_VERSION = 1

TOP_M = 10  # phrases kept per rule in a thread summary


@dataclass(frozen=True)
class TfIdfModel:
    vocabulary: dict[str, int]  # word -> dense id in [0, |V|)
    composite: tuple[float, ...]  # id -> TI_w, all >= 0
    n_docs: int

    def ti(self, word: str) -> float:
        """Composite score for a word; 0.0 when out of vocabulary."""
        idx = self.vocabulary.get(word)
        return 0.0 if idx is None else self.composite[idx]


@dataclass(frozen=True)
class ScoredPhrase:
    pair: ActionObjectPair
    score: float


@dataclass(frozen=True)
class ThreadSummary:
    thread_id: str
    per_rule: dict[str, tuple[ScoredPhrase, ...]]  # every rule present, <= 10 each


@dataclass(frozen=True)
class SummaryPhrase:
    """Serialized phrase form shared by all summary producers.

    Dependency-rule summaries carry extraction POS tags; keyword-baseline
    summaries tag words via the corpus majority-tag table. Clustering and
    context metrics consume only this shape.
    """

    text: str
    score: float
    pos: tuple[str, ...]

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self.text.split())


def fit_tfidf(documents: Sequence[Sequence[str]]) -> TfIdfModel:
    """Fit the composite model on tokenized documents.

    tf is the raw in-document count; idf(w) = ln((1 + n)/(1 + df(w))) + 1;
    the composite score TI_w sums tf(w, d) * idf(w) over documents, which
    reduces to total_count(w) * idf(w).
    """
    if not documents or all(len(d) == 0 for d in documents):
        raise ValueError("fit_tfidf needs at least one non-empty document")
    n_docs = len(documents)
    df: Counter[str] = Counter()
    total: Counter[str] = Counter()
    for doc in documents:
        counts = Counter(doc)
        total.update(counts)
        df.update(counts.keys())
    vocabulary = {word: i for i, word in enumerate(sorted(df))}
    composite = [0.0] * len(vocabulary)
    for word, idx in vocabulary.items():
        idf = math.log((1 + n_docs) / (1 + df[word])) + 1.0
        composite[idx] = total[word] * idf
    return TfIdfModel(vocabulary=vocabulary, composite=tuple(composite), n_docs=n_docs)


def phrase_words(pair: ActionObjectPair) -> tuple[str, ...]:
    """Distinct words of a phrase: {action} union objects, first-seen order."""
    return tuple(dict.fromkeys(pair.lemmas))


def score_phrase(pair: ActionObjectPair, model: TfIdfModel) -> float:
    """Intent score: mean composite score over the phrase's distinct words."""
    words = phrase_words(pair)
    return sum(model.ti(w) for w in words) / len(words)


def summarize_thread(thread_id: str, pairs: Sequence[ActionObjectPair], model: TfIdfModel) -> ThreadSummary:
    """Top phrases per rule, scored by the model.

    Per rule: descending score, ties broken by earlier sentence, then
    action lemma, then phrase text; truncated to the top ten. Every rule
    is present in the result, possibly empty.
    """
    per_rule: dict[str, tuple[ScoredPhrase, ...]] = {}
    for rule in RULES:
        scored = [ScoredPhrase(p, score_phrase(p, model)) for p in pairs if p.rule == rule]
        scored.sort(key=lambda sp: (-sp.score, sp.pair.sentence_ordinal, sp.pair.action_lemma, sp.pair.text))
        per_rule[rule] = tuple(scored[:TOP_M])
    return ThreadSummary(thread_id=thread_id, per_rule=per_rule)


def to_summary_phrase(scored: ScoredPhrase) -> SummaryPhrase:
    pair = scored.pair
    return SummaryPhrase(
        text=pair.text,
        score=scored.score,
        pos=(pair.action_upos, *pair.object_upos),
    )


def write_summaries_jsonl(rows: Iterable[tuple[str, str, Sequence[SummaryPhrase]]], sink: IO[str]) -> None:
    """Write (thread_id, rule, phrases) rows, one JSON object per line."""
    for thread_id, rule, phrases in rows:
        sink.write(json.dumps({
            "thread_id": thread_id,
            "rule": rule,
            "phrases": [
                {"text": p.text, "score": p.score, "pos": list(p.pos)}
                for p in phrases
            ],
        }, sort_keys=True) + "\n")


def summary_rows(summary: ThreadSummary) -> list[tuple[str, str, list[SummaryPhrase]]]:
    return [
        (summary.thread_id, rule, [to_summary_phrase(sp) for sp in summary.per_rule[rule]])
        for rule in RULES
    ]


def read_summaries_jsonl(source: Iterable[str]) -> dict[str, dict[str, list[SummaryPhrase]]]:
    """Read summaries as rule -> thread_id -> phrases, insertion-ordered."""
    out: dict[str, dict[str, list[SummaryPhrase]]] = {}
    for line in source:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        phrases = [
            SummaryPhrase(text=p["text"], score=p["score"], pos=tuple(p.get("pos", ())))
            for p in obj["phrases"]
        ]
        out.setdefault(obj["rule"], {})[obj["thread_id"]] = phrases
    return out


def save_model(model: TfIdfModel, path: str) -> None:
    with open(path, "wb") as fh:
        pickle.dump({
            "format": _MODEL_FORMAT,
            "version": _MODEL_VERSION,
            "vocabulary": model.vocabulary,
            "composite": model.composite,
            "n_docs": model.n_docs,
        }, fh)


def load_model(path: str) -> TfIdfModel:
    with open(path, "rb") as fh:
        try:
            payload = pickle.load(fh)
        except Exception as exc:
            raise ValueError(f"{path} is not an intent-miner tf-idf model") from exc
    if not isinstance(payload, dict) or payload.get("format") != _MODEL_FORMAT:
        raise ValueError(f"{path} is not an intent-miner tf-idf model")
    if payload.get("version") != _MODEL_VERSION:
        raise ValueError(f"unsupported model version {payload.get('version')!r}")
    return TfIdfModel(
        vocabulary=payload["vocabulary"],
        composite=tuple(payload["composite"]),
        n_docs=payload["n_docs"],
    )
