"""Vectorization, cosine similarity, and group-average clustering."""

from __future__ import annotations

import io
import json
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.cluster import AgglomerativeClustering

from intent_miner.clustering import (
    ClusterAssignment,
    PhraseVector,
    agglomerative_cluster,
    cosine,
    dense_matrix,
    load_clusters,
    save_clusters,
    vectorize_summary,
)
from intent_miner.scoring import SummaryPhrase, fit_tfidf

DOCS = [["card", "fee"], ["card", "card", "bonus"], ["fee"]]


def unit(tid, **weights):
    norm = math.sqrt(sum(v * v for v in weights.values()))
    return PhraseVector(thread_id=tid, weights={w: v / norm for w, v in sorted(weights.items())}, norm=1.0)


def zero(tid):
    return PhraseVector(thread_id=tid, weights={}, norm=0.0)


def phrase(text):
    return SummaryPhrase(text=text, score=1.0, pos=tuple("NOUN" for _ in text.split()))


def partition(labels: dict[str, int]) -> set[frozenset[str]]:
    groups: dict[int, set[str]] = {}
    for tid, cid in labels.items():
        groups.setdefault(cid, set()).add(tid)
    return {frozenset(g) for g in groups.values()}


class TestVectorize:
    def test_bag_weighted_by_composite_score(self):
        model = fit_tfidf(DOCS)
        vec = vectorize_summary("t1", [phrase("card fee"), phrase("card bonus")], model)
        raw = {"card": 2 * model.ti("card"), "fee": model.ti("fee"), "bonus": model.ti("bonus")}
        norm = math.sqrt(sum(v * v for v in raw.values()))
        assert vec.weights == pytest.approx({w: v / norm for w, v in raw.items()})
        assert vec.norm == 1.0 and not vec.is_zero
        assert sum(v * v for v in vec.weights.values()) == pytest.approx(1.0)

    def test_oov_words_drop_out(self):
        model = fit_tfidf(DOCS)
        vec = vectorize_summary("t1", [phrase("card zzz")], model)
        assert vec.weights == pytest.approx({"card": 1.0})

    def test_all_oov_is_zero_vector(self):
        model = fit_tfidf(DOCS)
        vec = vectorize_summary("t1", [phrase("zzz yyy")], model)
        assert vec.is_zero and vec.weights == {} and vec.norm == 0.0

    def test_empty_summary_is_zero_vector(self):
        assert vectorize_summary("t1", [], fit_tfidf(DOCS)).is_zero


class TestCosine:
    def test_identical_is_one(self):
        u = unit("a", x=1, y=2)
        assert cosine(u, u) == pytest.approx(1.0)

    def test_disjoint_is_zero(self):
        assert cosine(unit("a", x=1), unit("b", y=1)) == 0.0

    def test_hand_value(self):
        assert cosine(unit("a", x=1, y=1), unit("b", x=1)) == pytest.approx(1 / math.sqrt(2))

    def test_zero_vector_similarity_is_zero(self):
        assert cosine(zero("a"), unit("b", x=1)) == 0.0
        assert cosine(zero("a"), zero("b")) == 0.0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_symmetric_and_bounded(self, seed):
        rng = random.Random(seed)
        dims = [f"w{i}" for i in range(6)]
        u = unit("a", **{d: rng.uniform(0.01, 1.0) for d in rng.sample(dims, rng.randint(1, 6))})
        v = unit("b", **{d: rng.uniform(0.01, 1.0) for d in rng.sample(dims, rng.randint(1, 6))})
        assert cosine(u, v) == pytest.approx(cosine(v, u))
        assert -1e-9 <= cosine(u, v) <= 1.0 + 1e-9


class TestDenseMatrix:
    def test_rows_and_sorted_dims(self):
        vecs = [unit("a", b=3, a=4), unit("c", c=1)]
        matrix, dims = dense_matrix(vecs)
        assert dims == ["a", "b", "c"]
        assert matrix[0] == pytest.approx([0.8, 0.6, 0.0])
        assert matrix[1] == pytest.approx([0.0, 0.0, 1.0])

    def test_zero_vector_row(self):
        matrix, _ = dense_matrix([unit("a", x=1), zero("b")])
        assert matrix[1] == pytest.approx([0.0])


class TestAgglomerative:
    def two_pair_instance(self):
        return [
            unit("t0", a=1.0),
            unit("t1", b=1.0),
            unit("t2", b=1.0, e=0.2),
            unit("t3", a=1.0, e=0.2),
        ]

    def test_two_obvious_groups(self):
        got = agglomerative_cluster(self.two_pair_instance(), 2, "VN")
        assert partition(got.labels) == {frozenset({"t0", "t3"}), frozenset({"t1", "t2"})}

    def test_labels_follow_smallest_input_index(self):
        got = agglomerative_cluster(self.two_pair_instance(), 2, "VN")
        # the cluster containing input 0 is labeled 0 even though it holds t3
        assert got.labels == {"t0": 0, "t3": 0, "t1": 1, "t2": 1}

    def test_k_equals_n(self):
        vecs = self.two_pair_instance()
        got = agglomerative_cluster(vecs, 4, "VN")
        assert got.labels == {"t0": 0, "t1": 1, "t2": 2, "t3": 3}
        assert got.merge_similarities == ()

    def test_k_one(self):
        got = agglomerative_cluster(self.two_pair_instance(), 1, "VN")
        assert set(got.labels.values()) == {0}
        assert len(got.merge_similarities) == 3

    def test_method_tag_carried(self):
        got = agglomerative_cluster(self.two_pair_instance(), 2, "YAKE")
        assert got.method_tag == "YAKE"

    @pytest.mark.parametrize(
        "vectors,k,error",
        [
            ([], 1, "no vectors"),
            ([unit("a", x=1)], 0, "k must be"),
            ([unit("a", x=1)], 2, "k must be"),
            ([unit("a", x=1), unit("a", y=1)], 1, "duplicate"),
        ],
    )
    def test_validation(self, vectors, k, error):
        with pytest.raises(ValueError, match=error):
            agglomerative_cluster(vectors, k, "VN")

    def test_unsupported_linkage(self):
        with pytest.raises(ValueError, match="linkage"):
            agglomerative_cluster([unit("a", x=1)], 1, "VN", linkage="single")

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_merge_similarities_non_increasing(self, seed):
        rng = random.Random(seed)
        n = rng.randint(3, 12)
        dims = [f"w{i}" for i in range(5)]
        vecs = [
            unit(f"t{i}", **{d: rng.uniform(0.01, 1.0) for d in rng.sample(dims, rng.randint(1, 5))})
            for i in range(n)
        ]
        got = agglomerative_cluster(vecs, rng.randint(1, n), "VN")
        trace = got.merge_similarities
        assert all(trace[i] >= trace[i + 1] - 1e-9 for i in range(len(trace) - 1))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_partition_is_input_order_invariant(self, seed):
        rng = random.Random(seed)
        n = rng.randint(3, 10)
        dims = [f"w{i}" for i in range(6)]
        vecs = [
            unit(f"t{i}", **{d: rng.uniform(0.01, 1.0) for d in rng.sample(dims, rng.randint(1, 6))})
            for i in range(n)
        ]
        k = rng.randint(1, n)
        base = partition(agglomerative_cluster(vecs, k, "VN").labels)
        shuffled = vecs[:]
        rng.shuffle(shuffled)
        assert partition(agglomerative_cluster(shuffled, k, "VN").labels) == base


class TestZeroVectorPlacement:
    def test_zeros_join_cluster_zero(self):
        vecs = [unit("t0", a=1), zero("t1"), unit("t2", b=1), zero("t3")]
        got = agglomerative_cluster(vecs, 2, "VN")
        assert got.labels == {"t0": 0, "t1": 0, "t3": 0, "t2": 1}

    def test_shortfall_promotes_zeros_to_singletons(self):
        vecs = [unit("t0", a=1), zero("t1"), zero("t2")]
        got = agglomerative_cluster(vecs, 3, "VN")
        assert got.labels == {"t0": 0, "t1": 1, "t2": 2}

    def test_partial_shortfall(self):
        vecs = [unit("t0", a=1), unit("t1", b=1), zero("t2"), zero("t3")]
        got = agglomerative_cluster(vecs, 3, "VN")
        assert got.labels == {"t0": 0, "t3": 0, "t1": 1, "t2": 2}

    def test_all_zero_vectors(self):
        vecs = [zero(f"t{i}") for i in range(5)]
        got = agglomerative_cluster(vecs, 3, "VN")
        assert got.labels == {"t0": 0, "t3": 0, "t4": 0, "t1": 1, "t2": 2}

    @settings(max_examples=80, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_exactly_k_non_empty_clusters(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 12)
        dims = [f"w{i}" for i in range(4)]
        vecs = []
        for i in range(n):
            if rng.random() < 0.3:
                vecs.append(zero(f"t{i}"))
            else:
                vecs.append(unit(f"t{i}", **{d: rng.uniform(0.01, 1.0) for d in rng.sample(dims, rng.randint(1, 4))}))
        k = rng.randint(1, n)
        got = agglomerative_cluster(vecs, k, "VN")
        assert sorted(set(got.labels.values())) == list(range(k))
        assert len(got.labels) == n


class TestAgainstSklearn:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_average_linkage_partitions_agree(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 13))
        d = int(rng.integers(3, 8))
        matrix = rng.random((n, d)) + 0.05
        matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
        vecs = [
            PhraseVector(f"t{i}", {f"w{j}": float(matrix[i, j]) for j in range(d)}, 1.0)
            for i in range(n)
        ]
        k = int(rng.integers(2, n))
        got = agglomerative_cluster(vecs, k, "VN")
        mine = {frozenset(int(tid[1:]) for tid in group) for group in partition(got.labels)}
        sk = AgglomerativeClustering(n_clusters=k, metric="cosine", linkage="average").fit_predict(matrix)
        theirs = {frozenset(np.flatnonzero(sk == c).tolist()) for c in set(sk)}
        assert mine == theirs


class TestPersistence:
    def test_round_trip(self):
        vecs = [unit("t0", a=1), zero("t1"), unit("t2", a=1, b=2)]
        assignment = agglomerative_cluster(vecs, 2, "VR")
        buf = io.StringIO()
        save_clusters(assignment, vecs, "upgma", buf)
        buf.seek(0)
        loaded, loaded_vecs = load_clusters(buf)
        assert loaded.k == 2 and loaded.method_tag == "VR"
        assert loaded.labels == assignment.labels
        by_id = {v.thread_id: v for v in loaded_vecs}
        assert by_id["t1"].is_zero
        assert by_id["t2"].weights == pytest.approx(vecs[2].weights)

    def test_payload_shape(self):
        vecs = [unit("t0", a=1)]
        buf = io.StringIO()
        save_clusters(agglomerative_cluster(vecs, 1, "VN"), vecs, "upgma", buf)
        payload = json.loads(buf.getvalue())
        assert set(payload) == {"format", "method", "k", "linkage", "labels", "vectors"}
        assert payload["linkage"] == "upgma"

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            load_clusters(io.StringIO('{"format": "something-else"}'))
        with pytest.raises(ValueError):
            load_clusters(io.StringIO("not json"))

    def test_rejects_non_dict(self):
        with pytest.raises(ValueError):
            load_clusters(io.StringIO('[1, 2]'))
