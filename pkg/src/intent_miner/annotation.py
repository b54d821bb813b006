"""CoNLL-U dependency annotations and their alignment to a corpus.

Comments are annotated externally; each sentence block carries a
``# comment_id = <id>`` line tying it back to the comment it came from.
Parsing validates tree structure (single root, heads in range, every
token reachable) so the extraction rules can assume well-formed input.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .corpus import Thread

logger = logging.getLogger(__name__)

# Tags are the universal POS inventory. Proper nouns behave like common
# nouns for every rule in this package, so downstream code normalizes.
_NOMINAL_TAGS = frozenset({"NOUN", "PROPN"})


class AnnotationError(ValueError):
    """Raised for structurally invalid CoNLL-U input."""


@dataclass(frozen=True)
class Token:
    index: int  # 1-based position within the sentence
    form: str
    lemma: str  # lowercased at parse time
    upos: str
    head: int  # 0 for the root
    deprel: str  # lowercased at parse time


@dataclass(frozen=True)
class Sentence:
    comment_id: str
    tokens: tuple[Token, ...]

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]


@dataclass(frozen=True)
class ParseResult:
    sentences: tuple[Sentence, ...]
    rejects: tuple[str, ...]  # one diagnostic per rejected sentence


@dataclass(frozen=True)
class AlignedCorpus:
    threads: list[Thread]
    annotations: dict[str, tuple[Sentence, ...]]  # comment_id -> sentences
    coverage: float
    missing_ids: tuple[str, ...]  # comments with no annotation
    unknown_ids: tuple[str, ...]  # annotated ids absent from the corpus


def normalize_upos(tag: str) -> str:
    """Collapse PROPN into NOUN; other tags pass through."""
    return "NOUN" if tag == "PROPN" else tag


def is_nominal(tag: str) -> bool:
    return tag in _NOMINAL_TAGS


def parse_conllu(source: Iterable[str] | IO[str]) -> ParseResult:
    """Parse CoNLL-U text into validated sentences.

    Multiword-token range lines (id ``3-4``) and empty nodes (id ``3.1``)
    are skipped; remaining ids must run 1..n. Each sentence needs exactly
    one root (head 0) whose relation is ``root``, all heads in range, and
    no cycles. A sentence failing validation (or lacking a comment_id) is
    rejected with a diagnostic; parsing continues with the next sentence.
    """
    sentences: list[Sentence] = []
    rejects: list[str] = []
    comment_id: str | None = None
    rows: list[tuple[int, str]] = []  # (line_no, line)

    def flush(at_line: int) -> None:
        nonlocal comment_id, rows
        if rows:
            try:
                if comment_id is None:
                    raise AnnotationError(f"sentence ending at line {at_line} has no comment_id metadata")
                tokens = _build_tokens(rows)
                _validate_tree(tokens, at_line)
                sentences.append(Sentence(comment_id=comment_id, tokens=tokens))
            except AnnotationError as exc:
                logger.warning("rejected sentence: %s", exc)
                rejects.append(str(exc))
        comment_id = None
        rows = []

    line_no = 0
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            flush(line_no)
            continue
        if line.startswith("#"):
            meta = line[1:].strip()
            if "=" in meta:
                key, _, value = meta.partition("=")
                if key.strip() == "comment_id":
                    comment_id = value.strip()
            continue
        rows.append((line_no, line))
    flush(line_no + 1)
    return ParseResult(sentences=tuple(sentences), rejects=tuple(rejects))


def _build_tokens(rows: list[tuple[int, str]]) -> tuple[Token, ...]:
    tokens: list[Token] = []
    for line_no, line in rows:
        cols = line.split("\t")
        if len(cols) != 10:
            raise AnnotationError(f"line {line_no}: expected 10 tab-separated columns, got {len(cols)}")
        tid, form, lemma, upos, _xpos, _feats, head, deprel, _deps, _misc = cols
        if "-" in tid:  # multiword token range; surface only
            continue
        if "." in tid:  # empty node from enhanced dependencies
            continue
        try:
            index = int(tid)
        except ValueError as exc:
            raise AnnotationError(f"line {line_no}: bad token id {tid!r}") from exc
        try:
            head_idx = int(head)
        except ValueError as exc:
            raise AnnotationError(f"line {line_no}: bad head {head!r}") from exc
        if index != len(tokens) + 1:
            raise AnnotationError(f"line {line_no}: token ids must be sequential, got {index}")
        tokens.append(Token(
            index=index,
            form=form,
            lemma=lemma.lower(),
            upos=upos,
            head=head_idx,
            deprel=deprel.lower(),
        ))
    if not tokens:
        raise AnnotationError(f"line {rows[0][0]}: sentence has no syntactic tokens")
    return tuple(tokens)


def _validate_tree(tokens: tuple[Token, ...], at_line: int) -> None:
    n = len(tokens)
    roots = [t for t in tokens if t.head == 0]
    if len(roots) != 1:
        raise AnnotationError(f"sentence ending at line {at_line}: expected exactly one root, got {len(roots)}")
    if roots[0].deprel != "root":
        raise AnnotationError(f"sentence ending at line {at_line}: root token has relation {roots[0].deprel!r}")
    for t in tokens:
        if not (0 <= t.head <= n):
            raise AnnotationError(f"sentence ending at line {at_line}: token {t.index} head {t.head} out of range")
        if t.head == t.index:
            raise AnnotationError(f"sentence ending at line {at_line}: token {t.index} is its own head")
    # Reachability from the root covers both cycles and disconnected parts.
    children: dict[int, list[int]] = {}
    for t in tokens:
        children.setdefault(t.head, []).append(t.index)
    seen: set[int] = set()
    stack = [roots[0].index]
    while stack:
        node = stack.pop()
        if node in seen:
            raise AnnotationError(f"sentence ending at line {at_line}: cycle involving token {node}")
        seen.add(node)
        stack.extend(children.get(node, []))
    if len(seen) != n:
        orphans = sorted(set(range(1, n + 1)) - seen)
        raise AnnotationError(f"sentence ending at line {at_line}: tokens {orphans} unreachable from root")


def write_conllu(sentences: Iterable[Sentence], sink: IO[str]) -> None:
    """Serialize sentences back to CoNLL-U with comment_id metadata."""
    for sent in sentences:
        sink.write(f"# comment_id = {sent.comment_id}\n")
        for t in sent.tokens:
            sink.write("\t".join([
                str(t.index), t.form, t.lemma, t.upos, "_", "_",
                str(t.head), t.deprel, "_", "_",
            ]) + "\n")
        sink.write("\n")


def majority_upos(sentences: Sequence[Sentence]) -> dict[str, str]:
    """Most frequent normalized UPOS per lowercased surface form.

    Frequency ties break alphabetically on the tag. Used to assign POS to
    words of summaries that did not come through extraction (the keyword
    baseline); callers default unknown words to NOUN.
    """
    counts: dict[str, dict[str, int]] = {}
    for sent in sentences:
        for tok in sent.tokens:
            tags = counts.setdefault(tok.form.lower(), {})
            tag = normalize_upos(tok.upos)
            tags[tag] = tags.get(tag, 0) + 1
    return {form: min(tags, key=lambda t: (-tags[t], t)) for form, tags in counts.items()}


def align(threads: list[Thread], sentences: Sequence[Sentence]) -> AlignedCorpus:
    """Match sentences to corpus comments by comment_id.

    Coverage is the fraction of corpus comments holding at least one
    annotated sentence; an empty corpus counts as fully covered. Sentence
    order within a comment follows file order.
    """
    annotations: dict[str, list[Sentence]] = {}
    for sent in sentences:
        annotations.setdefault(sent.comment_id, []).append(sent)

    comment_ids = [c.id for t in threads for c in t.comments]
    known = set(comment_ids)
    missing = tuple(cid for cid in comment_ids if cid not in annotations)
    unknown = tuple(sorted(cid for cid in annotations if cid not in known))
    coverage = 1.0 if not comment_ids else (len(known & annotations.keys())) / len(comment_ids)
    if unknown:
        logger.warning("%d annotated comment ids not present in the corpus", len(unknown))

    return AlignedCorpus(
        threads=threads,
        annotations={cid: tuple(sents) for cid, sents in annotations.items()},
        coverage=coverage,
        missing_ids=missing,
        unknown_ids=unknown,
    )
