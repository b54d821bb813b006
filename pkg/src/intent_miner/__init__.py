"""Unsupervised intent-phrase summarization for threaded discussions.

The pipeline: ingest threads, align dependency annotations, extract
action-object phrases with six grammar rules, score them with corpus
TF-IDF, rank aspects by sentiment, cluster threads by their phrase
summaries, and report clustering plus phrase-context metrics against a
keyword-extraction baseline.
"""

from __future__ import annotations

__version__ = "0.1.0"
