"""Shared low-level text helpers.

One tokenizer for every word count and fallback lemmatization path in the
package, so statistics, TF-IDF fallback documents, and sentiment windows
agree on what a word is.
"""

from __future__ import annotations

import re

# Words are runs of alphanumerics joined by internal apostrophes or
# hyphens: "don't" and "e-mail" stay single tokens, punctuation drops out.
_WORD_RE = re.compile(r"[A-Za-z0-9_]+(?:['’-][A-Za-z0-9_]+)*")


def tokenize(text: str) -> list[str]:
    """Split raw text into word tokens, punctuation excluded."""
    return _WORD_RE.findall(text)


def lower_tokens(text: str) -> list[str]:
    """Lowercased tokens; the fallback 'lemma' stream for raw text."""
    return [t.lower() for t in tokenize(text)]


def split_sentences(text: str) -> list[str]:
    """Split text into sentences on ., !, ? and newlines.

    Intentionally simple: abbreviation handling is out of scope, and the
    keyword statistics that consume this only need stable, deterministic
    boundaries.
    """
    parts = re.split(r"(?<=[.!?])\s+|\n+", text)
    return [p.strip() for p in parts if p.strip()]
