"""HITS and PageRank against dense-matrix brute-force oracles."""

from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scimetrics.corpus import Corpus
from scimetrics.errors import DegenerateInputError
from scimetrics.graphs import GraphScores, hits_scores, pagerank

from conftest import make_paper


def graph_corpus(n, edges):
    """Papers g0..g{n-1}; edges as (citing, cited) index pairs.

    Later indices get later dates so hand fixtures stay chronological, but
    the scores only depend on the edge list.
    """
    base = date(2001, 1, 1)
    papers = []
    refs = {i: [] for i in range(n)}
    for i, j in edges:
        refs[i].append(f"g{j}")
    for i in range(n):
        papers.append(make_paper(f"g{i}", base + timedelta(days=i), refs=refs[i]))
    return Corpus(papers, [], [])


def hits_oracle(n, edges):
    """Principal eigenvectors of A^T A (authority) and A A^T (hub), dense."""
    A = np.zeros((n, n))
    for i, j in edges:
        A[i, j] = 1.0
    def principal(M):
        vals, vecs = np.linalg.eigh(M)
        v = vecs[:, -1]
        if v.sum() < 0:
            v = -v
        v = np.clip(v, 0.0, None)
        return v / v.sum()
    return principal(A @ A.T), principal(A.T @ A)


def pagerank_oracle(n, edges, damping=0.85):
    """Dense power iteration, matrix-vector form."""
    A = np.zeros((n, n))
    for i, j in edges:
        A[i, j] = 1.0
    out = A.sum(axis=1)
    P = np.divide(A, out[:, None], out=np.zeros_like(A), where=out[:, None] > 0)
    x = np.full(n, 1.0 / n)
    for _ in range(100000):
        new_x = (1 - damping) / n + damping * (P.T @ x + x[out == 0].sum() / n)
        if np.abs(new_x - x).sum() < 1e-13:
            return new_x
        x = new_x
    return x


class TestHits:
    def test_two_citers_one_target(self):
        corpus = graph_corpus(3, [(0, 2), (1, 2)])
        scores = hits_scores(corpus)
        assert scores.authority["g2"] == pytest.approx(1.0)
        assert scores.hub["g0"] == pytest.approx(0.5)
        assert scores.hub["g1"] == pytest.approx(0.5)
        assert not scores.degenerate

    def test_edgeless_graph_flagged(self):
        corpus = graph_corpus(3, [])
        scores = hits_scores(corpus)
        assert scores.degenerate
        assert all(v == 0.0 for v in scores.hub.values())
        assert all(v == 0.0 for v in scores.authority.values())

    def test_four_node_fixture_matches_eigen_oracle(self):
        edges = [(0, 2), (1, 2), (1, 3), (2, 3)]
        corpus = graph_corpus(4, edges)
        scores = hits_scores(corpus)
        hub_o, auth_o = hits_oracle(4, edges)
        for i in range(4):
            assert scores.hub[f"g{i}"] == pytest.approx(hub_o[i], abs=1e-6)
            assert scores.authority[f"g{i}"] == pytest.approx(auth_o[i], abs=1e-6)

    def test_l1_normalized(self):
        corpus = graph_corpus(5, [(0, 1), (2, 1), (3, 4), (1, 4)])
        scores = hits_scores(corpus)
        assert sum(scores.hub.values()) == pytest.approx(1.0, abs=1e-9)
        assert sum(scores.authority.values()) == pytest.approx(1.0, abs=1e-9)
        assert all(v >= 0 for v in scores.hub.values())

    def test_isolated_papers_score_zero(self):
        corpus = graph_corpus(4, [(0, 1)])
        scores = hits_scores(corpus)
        assert scores.hub["g2"] == 0.0
        assert scores.authority["g3"] == 0.0

    def test_cached_per_corpus(self):
        corpus = graph_corpus(3, [(0, 2), (1, 2)])
        assert hits_scores(corpus) is hits_scores(corpus)


class TestPagerank:
    def test_three_cycle_uniform(self):
        corpus = graph_corpus(3, [(0, 1), (1, 2), (2, 0)])
        pr = pagerank(corpus)
        for pid in corpus.papers:
            assert pr[pid] == pytest.approx(1 / 3, abs=1e-9)

    def test_single_node(self):
        corpus = graph_corpus(1, [])
        assert pagerank(corpus)["g0"] == pytest.approx(1.0)

    def test_empty_graph_rejected(self):
        with pytest.raises(DegenerateInputError):
            pagerank(Corpus([], [], []))

    def test_five_node_fixture_matches_dense_oracle(self):
        edges = [(0, 1), (0, 2), (1, 2), (3, 2), (4, 0), (2, 4)]
        corpus = graph_corpus(5, edges)
        pr = pagerank(corpus)
        oracle = pagerank_oracle(5, edges)
        for i in range(5):
            assert pr[f"g{i}"] == pytest.approx(oracle[i], abs=1e-9)

    def test_sums_to_one(self):
        corpus = graph_corpus(6, [(0, 1), (2, 3), (4, 5), (5, 0)])
        assert sum(pagerank(corpus).values()) == pytest.approx(1.0, abs=1e-9)

    def test_damping_parameter(self):
        # 0.99 omitted: contraction rate d^200 leaves visible residual at the
        # iteration cap, so the oracle comparison only makes sense below ~0.9
        edges = [(0, 1), (1, 0), (2, 0)]
        corpus = graph_corpus(3, edges)
        for d in (0.5, 0.85):
            pr = pagerank(corpus, damping=d)
            oracle = pagerank_oracle(3, edges, damping=d)
            for i in range(3):
                assert pr[f"g{i}"] == pytest.approx(oracle[i], abs=1e-8)

    def test_bad_damping_rejected(self):
        corpus = graph_corpus(2, [(0, 1)])
        with pytest.raises(ValueError):
            pagerank(corpus, damping=1.0)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_random_graphs_match_dense_oracle(self, data):
        n = data.draw(st.integers(2, 12))
        candidates = [(i, j) for i in range(n) for j in range(n) if i != j]
        edges = data.draw(st.lists(st.sampled_from(candidates), unique=True,
                                   max_size=len(candidates)))
        corpus = graph_corpus(n, edges)
        pr = pagerank(corpus)
        oracle = pagerank_oracle(n, edges)
        assert sum(pr.values()) == pytest.approx(1.0, abs=1e-9)
        for i in range(n):
            assert pr[f"g{i}"] == pytest.approx(oracle[i], abs=1e-6)
