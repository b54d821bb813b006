"""Lexicon loading, comment sentiment, and aspect rankings."""

from __future__ import annotations

import io
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intent_miner.corpus import Comment, Post, Thread
from intent_miner.extraction import ActionObjectPair
from intent_miner.sentiment import (
    AspectScore,
    VR_TOP,
    build_comment_lemmas,
    load_default_lexicon,
    load_lexicon,
    matches_comment,
    pool_aspects,
    rank_aspects,
    score_aspect,
    score_comment,
    thread_aspects,
    variant_summary,
    write_aspects_jsonl,
)

from conftest import make_sentence
from oracles.brute import brute_aspect_matches

LEXICON_TSV = [
    "# test lexicon",
    "great\t0.8",
    "bad\t-0.6",
    "fee\t-0.2",
    "bonus\t0.5",
    "perfect\t1.0",
]


def make_pair(action, objects, rule="VN"):
    return ActionObjectPair(
        rule=rule,
        action_lemma=action,
        object_lemmas=tuple(objects),
        action_upos="VERB",
        object_upos=tuple("NOUN" for _ in objects),
        comment_id="c1",
        sentence_ordinal=0,
        token_distance=1,
    )


@pytest.fixture()
def lexicon():
    return load_lexicon(LEXICON_TSV)


class TestLexicon:
    def test_load(self, lexicon):
        assert lexicon.valence["great"] == 0.8
        assert lexicon.valence["fee"] == -0.2
        assert "not" in lexicon.negators

    def test_comments_and_blanks_skipped(self):
        lex = load_lexicon(["", "# note", "good\t0.5"])
        assert lex.valence == {"good": 0.5}

    def test_out_of_range_valence_rejected(self):
        with pytest.raises(ValueError):
            load_lexicon(["great\t1.5"])

    def test_non_numeric_valence_rejected(self):
        with pytest.raises(ValueError):
            load_lexicon(["great\thigh"])

    def test_bad_column_count_rejected(self):
        with pytest.raises(ValueError):
            load_lexicon(["great"])

    def test_default_lexicon_is_sane(self):
        lex = load_default_lexicon()
        assert len(lex.valence) > 100
        assert all(-1.0 <= v <= 1.0 for v in lex.valence.values())
        assert lex.valence["great"] > 0
        assert lex.valence["scam"] < 0


class TestCommentSentiment:
    def test_mean_of_matches(self, lexicon):
        assert score_comment(["the", "fee", "be", "great"], lexicon) == pytest.approx(0.3)

    def test_no_match_is_zero(self, lexicon):
        assert score_comment(["the", "account"], lexicon) == 0.0

    def test_negation_flips(self, lexicon):
        assert score_comment(["not", "great"], lexicon) == pytest.approx(-0.8)

    def test_negation_window_is_three_preceding(self, lexicon):
        assert score_comment(["not", "x", "y", "great"], lexicon) == pytest.approx(-0.8)
        assert score_comment(["not", "x", "y", "z", "great"], lexicon) == pytest.approx(0.8)

    def test_negator_after_word_does_not_flip(self, lexicon):
        assert score_comment(["great", "not"], lexicon) == pytest.approx(0.8)

    def test_extremes_stay_in_range(self, lexicon):
        assert score_comment(["perfect", "perfect"], lexicon) == 1.0
        assert score_comment(["not", "perfect"], lexicon) == -1.0


class TestAspectMatching:
    def test_bag_containment(self):
        pair = make_pair("waive", ["fee"])
        assert matches_comment(pair, ["they", "waive", "the", "fee"])
        assert not matches_comment(pair, ["they", "waive", "it"])

    def test_multiplicity_required(self):
        pair = make_pair("fee", ["fee"])
        assert matches_comment(pair, ["fee", "x", "fee"])
        assert not matches_comment(pair, ["fee", "x"])

    def test_order_is_irrelevant_by_default(self):
        pair = make_pair("waive", ["fee"])
        assert matches_comment(pair, ["fee", "then", "waive"])

    def test_match_window_restricts(self):
        pair = make_pair("waive", ["fee"])
        lemmas = ["waive", "z", "fee"]
        assert not matches_comment(pair, lemmas, match_window=2)
        assert matches_comment(pair, lemmas, match_window=3)

    def test_window_smaller_than_phrase_never_matches(self):
        pair = make_pair("waive", ["fee", "card"])
        assert not matches_comment(pair, ["waive", "fee", "card"], match_window=2)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_default_matches_brute(self, seed):
        rng = random.Random(seed)
        words = ["fee", "card", "waive", "bonus", "app"]
        pair_lemmas = [rng.choice(words) for _ in range(rng.randint(2, 4))]
        comment = [rng.choice(words) for _ in range(rng.randint(0, 8))]
        pair = make_pair(pair_lemmas[0], pair_lemmas[1:])
        assert matches_comment(pair, comment) == brute_aspect_matches(list(pair.lemmas), comment)


class TestAspectScores:
    COMMENTS = {
        "cA": ["waive", "fee", "great"],
        "cB": ["waive", "fee", "bad"],
        "cC": ["bonus", "account"],
    }

    def scores(self, lexicon):
        return {cid: score_comment(lem, lexicon) for cid, lem in self.COMMENTS.items()}

    def test_mean_variance_over_matching_comments(self, lexicon):
        aspect = score_aspect(make_pair("waive", ["fee"]), self.COMMENTS, self.scores(lexicon))
        assert aspect.n_occurrences == 2
        assert aspect.mean == pytest.approx(-0.05)
        assert aspect.variance == pytest.approx(0.1225)

    def test_single_occurrence_zero_variance(self, lexicon):
        aspect = score_aspect(make_pair("bonus", ["account"]), self.COMMENTS, self.scores(lexicon))
        assert aspect.n_occurrences == 1
        assert aspect.variance == 0.0
        assert aspect.mean == pytest.approx(0.5)

    def test_unmatched_aspect_is_none(self, lexicon):
        assert score_aspect(make_pair("close", ["branch"]), self.COMMENTS, self.scores(lexicon)) is None

    def test_pool_aspects_is_rule_free(self):
        a = make_pair("waive", ["fee"], rule="VN")
        b = make_pair("waive", ["fee"], rule="VO")
        c = make_pair("open", ["account"], rule="CN")
        pooled = pool_aspects([a, b, c])
        assert len(pooled) == 2
        assert pooled[0].rule == "VN"  # earliest kept

    def test_thread_aspects_excludes_unmatched(self, lexicon):
        pairs = [make_pair("waive", ["fee"]), make_pair("close", ["branch"])]
        aspects = thread_aspects("t3_x", pairs, self.COMMENTS, lexicon)
        assert [a.text for a in aspects] == ["waive fee"]


class TestRankings:
    def make_aspects(self):
        return [
            AspectScore(make_pair("open", ["account"]), mean=0.7, variance=0.01, n_occurrences=2),
            AspectScore(make_pair("waive", ["fee"]), mean=-0.5, variance=0.30, n_occurrences=3),
            AspectScore(make_pair("earn", ["bonus"]), mean=0.2, variance=0.10, n_occurrences=1),
        ]

    def test_positive_by_mean_descending(self):
        ranked = rank_aspects(self.make_aspects(), "positive")
        assert [a.mean for a in ranked] == [0.7, 0.2, -0.5]

    def test_negative_reverses_positive_when_means_distinct(self):
        aspects = self.make_aspects()
        assert rank_aspects(aspects, "negative") == list(reversed(rank_aspects(aspects, "positive")))

    def test_variant_by_variance_descending(self):
        ranked = rank_aspects(self.make_aspects(), "variant")
        assert [a.variance for a in ranked] == [0.30, 0.10, 0.01]

    def test_tie_prefers_more_occurrences_then_text(self):
        tied = [
            AspectScore(make_pair("b", ["x"]), mean=0.5, variance=0.1, n_occurrences=1),
            AspectScore(make_pair("a", ["x"]), mean=0.5, variance=0.1, n_occurrences=1),
            AspectScore(make_pair("c", ["x"]), mean=0.5, variance=0.1, n_occurrences=4),
        ]
        ranked = rank_aspects(tied, "positive")
        assert [a.text for a in ranked] == ["c x", "a x", "b x"]

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            rank_aspects([], "best")

    def test_variant_summary_truncates_and_carries_variance(self):
        aspects = [
            AspectScore(make_pair(f"v{i:02d}", ["x"]), mean=0.0, variance=i / 100, n_occurrences=1)
            for i in range(VR_TOP + 4)
        ]
        phrases = variant_summary(aspects)
        assert len(phrases) == VR_TOP
        assert phrases[0].score == pytest.approx((VR_TOP + 3) / 100)
        assert phrases[0].pos == ("VERB", "NOUN")


class TestCommentLemmas:
    def _thread(self):
        return Thread(
            post=Post("t3_x", "t", "b", 0),
            comments=(
                Comment("c1", "t3_x", "They WAIVED the Fees!", 0),
                Comment("c2", "t3_x", "Great app.", 1),
            ),
        )

    def test_annotation_lemmas_preferred(self):
        ann = {"c1": (make_sentence("c1", [
            ("they", "PRON", 2, "nsubj"),
            ("waive", "VERB", 0, "root"),
            ("fee", "NOUN", 2, "dobj"),
        ]),)}
        lemmas = build_comment_lemmas([self._thread()], ann)
        assert lemmas["c1"] == ["they", "waive", "fee"]
        # no annotation: lowercased surface tokens
        assert lemmas["c2"] == ["great", "app"]

    def test_tokenizer_fallback(self):
        lemmas = build_comment_lemmas([self._thread()], None)
        assert lemmas["c1"] == ["they", "waived", "the", "fees"]


def test_aspects_jsonl_shape():
    aspect = AspectScore(make_pair("waive", ["fee"]), mean=0.25, variance=0.0625, n_occurrences=2)
    buf = io.StringIO()
    write_aspects_jsonl([("t3_x", aspect)], buf)
    row = json.loads(buf.getvalue())
    assert row == {
        "thread_id": "t3_x",
        "text": "waive fee",
        "rule": "VN",
        "mean": 0.25,
        "variance": 0.0625,
        "n_occurrences": 2,
    }
