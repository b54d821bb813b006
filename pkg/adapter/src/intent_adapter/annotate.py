"""Annotate corpus comments into CoNLL-U keyed by comment id.

Reads a thread JSONL file, runs a tokenizer/tagger/dependency parser
over every comment body, and writes one CoNLL-U block per sentence with
a ``# comment_id = <id>`` line so the core package can align sentences
back to their comments. A statistical parser (spaCy's small English
model) is preferred when importable; otherwise the bundled rule-based
annotator takes over. Comments with no alphanumeric content are skipped
with a log entry and counted against the reported coverage.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Iterator

from intent_miner.annotation import Sentence, Token, write_conllu

from . import heuristic

logger = logging.getLogger(__name__)

# One sentence: (form, lemma, upos, head, deprel) per token.
SentenceRows = list[tuple[str, str, str, int, str]]
Annotator = Callable[[str], Iterator[SentenceRows]]


def _spacy_annotator() -> Annotator:  # pragma: no cover - needs the model
    import spacy

    nlp = spacy.load("en_core_web_sm")

    def annotate(text: str) -> Iterator[SentenceRows]:
        for sent in nlp(text).sents:
            words = [t for t in sent if not t.is_space]
            if not words:
                continue
            index = {t.i: pos for pos, t in enumerate(words, start=1)}
            rows: SentenceRows = []
            for t in words:
                head = 0 if t.head is t else index.get(t.head.i, 0)
                rel = "root" if head == 0 else t.dep_.lower()
                rows.append((t.text, t.lemma_.lower(), t.pos_, head, rel))
            yield rows

    return annotate


def load_annotator() -> tuple[str, Annotator]:
    """Best available annotator and a label naming it."""
    try:
        annotator = _spacy_annotator()
    except Exception as exc:
        logger.info("statistical parser unavailable (%s); using bundled rules", exc)
        return "heuristic", heuristic.annotate_text
    return "spacy:en_core_web_sm", annotator  # pragma: no cover - needs the model


def annotate_file(in_path: Path, out_path: Path) -> tuple[int, int]:
    """Annotate every comment in a thread JSONL file.

    Returns (annotated, total) comment counts; comments yielding no
    tokens are skipped and logged.
    """
    name, annotate = load_annotator()
    logger.info("annotating %s with %s", in_path, name)

    with open(in_path, encoding="utf-8") as fh:
        rows = [json.loads(line) for line in fh if line.strip()]

    sentences: list[Sentence] = []
    total = annotated = 0
    for obj in rows:
        if obj.get("kind") != "comment":
            continue
        total += 1
        parsed = [
            Sentence(
                comment_id=obj["id"],
                tokens=tuple(
                    Token(index=idx, form=form, lemma=lemma, upos=upos,
                          head=head, deprel=rel)
                    for idx, (form, lemma, upos, head, rel)
                    in enumerate(sent_rows, start=1)
                ),
            )
            for sent_rows in annotate(obj["body"])
        ]
        if parsed:
            sentences.extend(parsed)
            annotated += 1
        else:
            logger.info("comment %s produced no tokens; skipped", obj["id"])

    with open(out_path, "w", encoding="utf-8") as sink:
        write_conllu(sentences, sink)
    return annotated, total


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intent-adapter-annotate",
        description="Annotate thread JSONL comments into CoNLL-U.",
    )
    parser.add_argument("--in", dest="in_path", type=Path, required=True,
                        help="thread JSONL to read")
    parser.add_argument("--out", dest="out_path", type=Path, required=True,
                        help="CoNLL-U file to write")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        annotated, total = annotate_file(args.in_path, args.out_path)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    coverage = 1.0 if total == 0 else annotated / total
    print(f"annotated {annotated}/{total} comments (coverage {coverage:.3f}) -> {args.out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
