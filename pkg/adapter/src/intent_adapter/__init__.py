"""Boundary scripts around the intent-miner package.

The adapter owns everything with external dependencies — HTTP access to
the Reddit public JSON listings and the tokenizer/tagger/parser used to
annotate comment text — and communicates with the core package purely
through its documented file formats: the thread JSONL schema and
CoNLL-U annotations keyed by comment id.
"""

__all__ = ["annotate", "fetch", "heuristic"]
