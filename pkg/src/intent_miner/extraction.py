"""Action-object pair extraction from dependency-annotated sentences.

Six grammar rules produce candidate intent phrases:

  VN  verb near a noun (proximity only, dependency-confirmed objects excluded)
  AN  adjective near a noun
  CN  compound-noun chunk (first noun = action slot, rest = object slot)
  VO  verb with a direct object, object expanded to its compound chunk
  AP  adjectival complement with a prepositional object
  NEG re-emission of any pair above whose context is negated

Proximity means the 1-based token indices differ by at most three; pairs
never cross sentence boundaries.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from typing import IO, Iterable, Sequence

from .annotation import Sentence, Token, is_nominal, normalize_upos
from .corpus import Thread

logger = logging.getLogger(__name__)

RULES = ("VN", "AN", "CN", "VO", "AP", "NEG")
_RULE_ORDER = {rule: i for i, rule in enumerate(RULES)}

PROXIMITY_WINDOW = 3
NEGATOR_LEMMAS = frozenset({"not", "n't", "never", "no"})
_OBJECT_DEPRELS = frozenset({"obj", "dobj"})


@dataclass(frozen=True)
class ActionObjectPair:
    rule: str
    action_lemma: str
    object_lemmas: tuple[str, ...]
    action_upos: str
    object_upos: tuple[str, ...]
    comment_id: str
    sentence_ordinal: int
    token_distance: int
    count: int = 1

    @property
    def lemmas(self) -> tuple[str, ...]:
        return (self.action_lemma, *self.object_lemmas)

    @property
    def text(self) -> str:
        return " ".join(self.lemmas)


@dataclass(frozen=True)
class _Candidate:
    """Internal pre-serialization form keeping token positions for sorting."""

    rule: str
    action: Token
    objects: tuple[Token, ...]
    distance: int


def _chunkable(token: Token) -> bool:
    return is_nominal(token.upos) or token.deprel == "compound"


def _compound_chunk(sentence: Sentence, head: Token) -> tuple[Token, ...]:
    """The token plus its transitive compound dependents, in surface order."""
    members = {head.index}
    changed = True
    while changed:
        changed = False
        for t in sentence.tokens:
            if t.deprel == "compound" and t.head in members and t.index not in members:
                members.add(t.index)
                changed = True
    return tuple(sentence.token(i) for i in sorted(members))


def _sentence_candidates(sentence: Sentence) -> list[_Candidate]:
    toks = sentence.tokens
    out: list[_Candidate] = []

    # VO first: its (verb, object) index pairs suppress the matching VN pairs.
    claimed: set[tuple[int, int]] = set()
    for tok in toks:
        if tok.deprel not in _OBJECT_DEPRELS or tok.head == 0:
            continue
        head = sentence.token(tok.head)
        if head.upos != "VERB":
            continue
        distance = abs(head.index - tok.index)
        if distance > PROXIMITY_WINDOW:
            continue
        chunk = _compound_chunk(sentence, tok)
        out.append(_Candidate("VO", head, chunk, distance))
        claimed.add((head.index, tok.index))

    for verb in toks:
        if verb.upos != "VERB":
            continue
        for noun in toks:
            if not is_nominal(noun.upos):
                continue
            distance = abs(verb.index - noun.index)
            if distance == 0 or distance > PROXIMITY_WINDOW:
                continue
            if (verb.index, noun.index) in claimed:
                continue
            out.append(_Candidate("VN", verb, (noun,), distance))

    for adj in toks:
        if adj.upos != "ADJ":
            continue
        for noun in toks:
            if not is_nominal(noun.upos):
                continue
            distance = abs(adj.index - noun.index)
            if distance == 0 or distance > PROXIMITY_WINDOW:
                continue
            out.append(_Candidate("AN", adj, (noun,), distance))

    # CN: maximal runs of >=2 consecutive chunkable tokens.
    run: list[Token] = []
    for tok in (*toks, None):
        if tok is not None and _chunkable(tok):
            run.append(tok)
            continue
        if len(run) >= 2:
            out.append(_Candidate("CN", run[0], tuple(run[1:]), 1))
        run = []

    for acomp in toks:
        if acomp.deprel != "acomp":
            continue
        anchor = {acomp.index, acomp.head}
        for pobj in toks:
            if pobj.deprel != "pobj" or pobj.head == 0:
                continue
            prep = sentence.token(pobj.head)
            if prep.deprel != "prep" or prep.head not in anchor:
                continue
            distance = abs(acomp.index - pobj.index)
            if distance > PROXIMITY_WINDOW:
                continue
            out.append(_Candidate("AP", acomp, (pobj,), distance))

    out.extend(_negated_reemissions(sentence, out))
    out.sort(key=lambda c: (c.action.index, _RULE_ORDER[c.rule], c.objects[0].index))
    return out


def _negated_reemissions(sentence: Sentence, candidates: list[_Candidate]) -> list[_Candidate]:
    """NEG copies of candidates whose action or object carries negation.

    A pair is negated when the action or an object token has a direct
    dependent with relation `neg`, or a negator lemma sits within the
    proximity window of the action token. Every negated candidate is
    re-emitted; thread-level dedup collapses identical signatures.
    """
    neg_heads = {t.head for t in sentence.tokens if t.deprel == "neg"}
    negator_positions = [t.index for t in sentence.tokens if t.lemma in NEGATOR_LEMMAS]

    def negated(cand: _Candidate) -> bool:
        if cand.action.index in neg_heads:
            return True
        if any(obj.index in neg_heads for obj in cand.objects):
            return True
        return any(abs(pos - cand.action.index) <= PROXIMITY_WINDOW for pos in negator_positions)

    return [replace(cand, rule="NEG") for cand in candidates if negated(cand)]


def _to_pair(cand: _Candidate, comment_id: str, ordinal: int) -> ActionObjectPair:
    return ActionObjectPair(
        rule=cand.rule,
        action_lemma=cand.action.lemma,
        object_lemmas=tuple(o.lemma for o in cand.objects),
        action_upos=normalize_upos(cand.action.upos),
        object_upos=tuple(normalize_upos(o.upos) for o in cand.objects),
        comment_id=comment_id,
        sentence_ordinal=ordinal,
        token_distance=cand.distance,
    )


def extract_pairs(comment_id: str, sentences: Sequence[Sentence], start_ordinal: int = 0) -> list[ActionObjectPair]:
    """All pairs for one comment, sentences numbered from start_ordinal."""
    pairs = []
    for offset, sentence in enumerate(sentences):
        ordinal = start_ordinal + offset
        pairs.extend(_to_pair(c, comment_id, ordinal) for c in _sentence_candidates(sentence))
    return pairs


def extract_thread_pairs(thread: Thread, annotations: dict[str, tuple[Sentence, ...]]) -> list[ActionObjectPair]:
    """Deduplicated pairs for a whole thread.

    Comments run in thread order with a thread-wide sentence numbering, so
    pair order (and therefore dedup's earliest-wins choice) is stable.
    Comments without annotations are skipped.
    """
    pairs: list[ActionObjectPair] = []
    ordinal = 0
    for comment in thread.comments:
        sentences = annotations.get(comment.id, ())
        pairs.extend(extract_pairs(comment.id, sentences, start_ordinal=ordinal))
        ordinal += len(sentences)
    return dedup_pairs(pairs)


def dedup_pairs(pairs: list[ActionObjectPair]) -> list[ActionObjectPair]:
    """Collapse pairs sharing (rule, action, objects); earliest survives.

    The survivor's count field totals the occurrences it absorbed.
    """
    counts: dict[tuple[str, str, tuple[str, ...]], int] = {}
    first: dict[tuple[str, str, tuple[str, ...]], ActionObjectPair] = {}
    for pair in pairs:
        key = (pair.rule, pair.action_lemma, pair.object_lemmas)
        counts[key] = counts.get(key, 0) + pair.count
        first.setdefault(key, pair)
    return [replace(first[key], count=counts[key]) for key in first]


def write_pairs_jsonl(thread_pairs: dict[str, list[ActionObjectPair]], sink: IO[str]) -> None:
    for thread_id, pairs in thread_pairs.items():
        for p in pairs:
            sink.write(json.dumps({
                "thread_id": thread_id,
                "rule": p.rule,
                "action_lemma": p.action_lemma,
                "object_lemmas": list(p.object_lemmas),
                "action_upos": p.action_upos,
                "object_upos": list(p.object_upos),
                "comment_id": p.comment_id,
                "sentence_ordinal": p.sentence_ordinal,
                "token_distance": p.token_distance,
                "count": p.count,
            }, sort_keys=True) + "\n")


def read_pairs_jsonl(source: Iterable[str]) -> dict[str, list[ActionObjectPair]]:
    out: dict[str, list[ActionObjectPair]] = {}
    for line in source:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        pair = ActionObjectPair(
            rule=obj["rule"],
            action_lemma=obj["action_lemma"],
            object_lemmas=tuple(obj["object_lemmas"]),
            action_upos=obj["action_upos"],
            object_upos=tuple(obj["object_upos"]),
            comment_id=obj["comment_id"],
            sentence_ordinal=obj["sentence_ordinal"],
            token_distance=obj["token_distance"],
            count=obj["count"],
        )
        out.setdefault(obj["thread_id"], []).append(pair)
    return out
