"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from intent_miner.annotation import Sentence, Token, align, parse_conllu
from intent_miner.corpus import ingest_threads, preprocess

FIXTURES = Path(__file__).parent / "fixtures"

UPOS_POOL = ["VERB", "NOUN", "PROPN", "ADJ", "AUX", "ADP", "PRON", "DET", "ADV", "PART"]
DEPREL_POOL = ["nsubj", "obj", "dobj", "amod", "compound", "prep", "pobj", "acomp", "neg", "det", "advmod", "conj"]
LEMMA_POOL = ["fee", "card", "open", "waive", "bonus", "account", "good", "not", "never", "bank", "app", "it"]


def make_token(index, form=None, lemma=None, upos="NOUN", head=0, deprel="root"):
    lemma = lemma if lemma is not None else (form or f"w{index}")
    form = form if form is not None else lemma
    return Token(index=index, form=form, lemma=lemma, upos=upos, head=head, deprel=deprel)


def make_sentence(comment_id, specs):
    """Build a Sentence from (lemma, upos, head, deprel) tuples, 1-indexed."""
    tokens = tuple(
        make_token(i + 1, lemma=lemma, upos=upos, head=head, deprel=deprel)
        for i, (lemma, upos, head, deprel) in enumerate(specs)
    )
    return Sentence(comment_id=comment_id, tokens=tokens)


def random_sentence(rng: random.Random, comment_id: str = "c", max_tokens: int = 10) -> Sentence:
    """A random sentence whose head links form a valid single-root tree."""
    n = rng.randint(1, max_tokens)
    root = rng.randrange(1, n + 1)
    attached = [root]
    heads = {root: 0}
    for i in range(1, n + 1):
        if i == root:
            continue
        heads[i] = rng.choice(attached)
        attached.append(i)
    tokens = []
    for i in range(1, n + 1):
        deprel = "root" if i == root else rng.choice(DEPREL_POOL)
        tokens.append(make_token(
            i,
            lemma=rng.choice(LEMMA_POOL),
            upos=rng.choice(UPOS_POOL),
            head=heads[i],
            deprel=deprel,
        ))
    return Sentence(comment_id=comment_id, tokens=tuple(tokens))


def pair_key(pair):
    return (pair.rule, pair.action_lemma, pair.object_lemmas,
            pair.action_upos, pair.object_upos, pair.token_distance)


@pytest.fixture(scope="session")
def banking_paths():
    return FIXTURES / "banking" / "thread.jsonl", FIXTURES / "banking" / "thread.conllu"


@pytest.fixture(scope="session")
def banking_corpus(banking_paths):
    threads_path, conllu_path = banking_paths
    with open(threads_path, encoding="utf-8") as fh:
        threads, issues = ingest_threads(fh)
    assert not issues
    return preprocess(threads)


@pytest.fixture(scope="session")
def banking_parse(banking_paths):
    _, conllu_path = banking_paths
    with open(conllu_path, encoding="utf-8") as fh:
        result = parse_conllu(fh)
    assert not result.rejects
    return result


@pytest.fixture(scope="session")
def banking_aligned(banking_corpus, banking_parse):
    aligned = align(banking_corpus, banking_parse.sentences)
    assert aligned.coverage == 1.0
    return aligned


@pytest.fixture(scope="session")
def synthetic_paths():
    return FIXTURES / "synthetic" / "threads.jsonl", FIXTURES / "synthetic" / "anns.conllu"


@pytest.fixture(scope="session")
def demo_paths():
    return FIXTURES / "demo" / "threads.jsonl", FIXTURES / "demo" / "anns.conllu"


@pytest.fixture(scope="session")
def yake_fixture_text():
    return (FIXTURES / "yake" / "fixture.txt").read_text(encoding="utf-8")
