import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citepaths import (ConfigurationError, ConvergenceError, DegenerateInputError, DomainError,
                       JournalGraph, PageRankConfig, PaperRecord, ScoreVector,
                       aggregate_to_journals, build_paper_graph, citation_count_baseline,
                       pagerank_journal, pagerank_paths, project, teleport_distribution,
                       transition_matrix)
from citepaths.synth import random_corpus


def dense_journal_pagerank(n, src, dst, w, d):
    """Fixed point of the PageRank equation by a dense linear solve.

    Column-stochastic G = d (T' + u 1_dangling') + (1-d) u 1'; PR = G PR.
    """
    W = np.zeros((n, n))
    for a, b, x in zip(src, dst, w):
        W[a, b] += x
    out = W.sum(axis=1)
    T = np.zeros((n, n))
    for a in range(n):
        if out[a] > 0:
            T[a] = W[a] / out[a]
    u = np.full(n, 1.0 / n)
    dangling = (out == 0).astype(float)
    G = d * (T.T + np.outer(u, dangling)) + (1 - d) * np.outer(u, np.ones(n))
    A = np.eye(n) - G
    A[-1] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    return np.linalg.solve(A, rhs)


def dense_path_pagerank(g, d):
    """Stationary distribution of the paper-level walk, dense solve."""
    n = g.n_papers
    sizes = np.bincount(g.journal, minlength=g.n_journals)
    v = np.array([1.0 / (g.n_journals * sizes[g.journal[p]]) for p in range(n)])
    P = np.zeros((n, n))
    for a in range(n):
        targets = list(g.cites(a))
        if targets:
            for b in targets:
                P[a, b] += d / len(targets)
            P[a] += (1 - d) * v
        else:
            P[a] += v
    A = np.eye(n) - P.T
    A[-1] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    x = np.linalg.solve(A, rhs)
    journals = np.zeros(g.n_journals)
    for p in range(n):
        journals[g.journal[p]] += x[p]
    return x, journals


def test_single_journal():
    jg = JournalGraph(1, [], [], [])
    sv = pagerank_journal(transition_matrix(jg))
    assert sv.scores.tolist() == [1.0]


def test_symmetric_pair():
    jg = JournalGraph(2, [0, 1], [1, 0], [3, 3])
    sv = pagerank_journal(transition_matrix(jg))
    np.testing.assert_allclose(sv.scores, [0.5, 0.5], atol=1e-15)


def test_random_30_journals_match_dense_oracle(backend):
    rng = np.random.default_rng(30)
    n = 30
    m = 120
    src, dst = rng.integers(n, size=m), rng.integers(n, size=m)
    keys, w = np.unique(src * n + dst, return_counts=True)
    w = w * rng.integers(1, 10, size=len(w))
    jg = JournalGraph(n, keys // n, keys % n, w)
    sv = pagerank_journal(transition_matrix(jg), PageRankConfig(damping=0.5))
    expected = dense_journal_pagerank(n, keys // n, keys % n, w, 0.5)
    assert np.max(np.abs(sv.scores - expected)) <= 1e-9
    assert abs(sv.total() - 1) <= 1e-9


def test_zero_citations_gives_teleport():
    recs = [PaperRecord(i, j, 2000) for i, j in enumerate([0, 0, 0, 1, 2, 2])]
    g = build_paper_graph(recs, [])
    papers, journals = pagerank_paths(g)
    np.testing.assert_allclose(journals.scores, [1 / 3] * 3, rtol=0, atol=1e-15)
    np.testing.assert_allclose(papers.scores, [1 / 9] * 3 + [1 / 3] + [1 / 6] * 2, atol=1e-15)


def test_fig1_path_scores_differ_for_c(fig1a, fig1b):
    _, ja = pagerank_paths(fig1a)
    _, jb = pagerank_paths(fig1b)
    c = fig1a.journal_index("C")
    assert ja.scores[c] != jb.scores[c]
    # walker path p4 -> p3 -> p1 carries extra mass into C in case (a)
    assert ja.scores[c] > jb.scores[c]


def test_fig1_path_scores_match_dense_oracle(fig1a, fig1b):
    for g in (fig1a, fig1b):
        papers, journals = pagerank_paths(g)
        x, jx = dense_path_pagerank(g, 0.5)
        assert np.max(np.abs(papers.scores - x)) <= 1e-12
        assert np.max(np.abs(journals.scores - jx)) <= 1e-12


def test_fig1_standard_pagerank_identical(fig1a, fig1b):
    a = pagerank_journal(transition_matrix(project(fig1a)))
    b = pagerank_journal(transition_matrix(project(fig1b)))
    assert a.to_tsv() == b.to_tsv()


@given(st.integers(2, 40), st.integers(1, 8), st.integers(0, 150), st.integers(0, 10 ** 6),
       st.sampled_from([0.15, 0.5, 0.85]))
@settings(max_examples=30, deadline=None)
def test_paths_pagerank_matches_dense(n, j, m, seed, d):
    g = random_corpus(max(n, j), j, m, seed=seed).graph()
    papers, journals = pagerank_paths(g, PageRankConfig(damping=d))
    x, jx = dense_path_pagerank(g, d)
    assert np.max(np.abs(papers.scores - x)) <= 1e-9
    assert np.max(np.abs(journals.scores - jx)) <= 1e-9
    assert abs(papers.total() - 1) <= 1e-9 and abs(journals.total() - 1) <= 1e-9
    assert (papers.scores >= 0).all()


def test_aggregate_examples():
    recs = [PaperRecord(i, j, 2000) for i, j in enumerate([0, 0, 1, 2])]
    g = build_paper_graph(recs, [])
    sv = aggregate_to_journals(ScoreVector("paper", [0.25] * 4), g)
    assert sv.scores.tolist() == [0.5, 0.25, 0.25]
    g1 = build_paper_graph([PaperRecord(i, 0, 2000) for i in range(5)], [])
    assert aggregate_to_journals(ScoreVector("paper", [0.2] * 5), g1).scores.tolist() == [1.0]


def test_aggregate_preserves_total_and_checks_dimension():
    g = random_corpus(5000, 40, 100, seed=3).graph()
    s = np.random.default_rng(1).random(g.n_papers)
    s /= s.sum()
    sv = aggregate_to_journals(ScoreVector("paper", s), g)
    assert abs(math.fsum(sv.scores) - math.fsum(s)) <= 1e-12
    with pytest.raises(DomainError):
        aggregate_to_journals(ScoreVector("paper", s[:-1]), g)


def test_citation_count_baseline(fig1a):
    sv = citation_count_baseline(project(fig1a))
    by = sv.by_label()
    assert (by["A"], by["B"], by["C"]) == (0.0, 0.5, 0.5)
    single = citation_count_baseline(JournalGraph(1, [0], [0], [5]))
    assert single.scores.tolist() == [1.0]
    with pytest.raises(DegenerateInputError):
        citation_count_baseline(JournalGraph(3, [], [], []))


def test_citation_count_baseline_tabulation():
    g = random_corpus(1500, 25, 5000, seed=12).graph()
    jg = project(g)
    col = np.zeros(g.n_journals)
    for a in range(g.n_papers):
        for b in g.cites(a):
            col[g.journal[b]] += 1
    np.testing.assert_allclose(citation_count_baseline(jg).scores, col / col.sum(), rtol=1e-15)


def test_damping_limit():
    g = random_corpus(400, 12, 2500, seed=17).graph()
    cfg = PageRankConfig(damping=1e-6)
    pr = pagerank_journal(transition_matrix(project(g)), cfg)
    assert np.max(np.abs(pr.scores - 1 / 12)) <= 1e-4
    papers, journals = pagerank_paths(g, cfg)
    assert np.max(np.abs(journals.scores - 1 / 12)) <= 1e-4
    assert np.max(np.abs(papers.scores - teleport_distribution(g))) <= 1e-4


def test_teleport_distribution_invariants():
    g = random_corpus(700, 30, 10, seed=2).graph()
    v = teleport_distribution(g)
    assert abs(math.fsum(v) - 1) <= 1e-12
    assert (v > 0).all()
    per_journal = np.bincount(g.journal, weights=v)
    np.testing.assert_allclose(per_journal, 1 / 30, rtol=1e-13)


def test_empty_journal_is_configuration_error():
    g = build_paper_graph([PaperRecord(0, 0, 2000), PaperRecord(1, 2, 2000)], [],
                          journal_names=["A", "B", "C"])
    with pytest.raises(ConfigurationError):
        pagerank_paths(g)


def test_non_convergence_reports_residual(fig1a):
    with pytest.raises(ConvergenceError) as info:
        pagerank_paths(fig1a, PageRankConfig(max_iter=2))
    assert info.value.residual > 0


@pytest.mark.parametrize("kwargs", [{"damping": 0}, {"damping": 1}, {"tolerance": 0},
                                    {"max_iter": 0}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        PageRankConfig(**kwargs)


def test_backends_and_threads_bit_identical(backend):
    g = random_corpus(3000, 40, 20000, seed=8).graph()
    ref_p, ref_j = pagerank_paths(g, threads=1)
    ref_pr = pagerank_journal(transition_matrix(project(g)), threads=1)
    for threads in (2, 8):
        p, j = pagerank_paths(g, threads=threads)
        assert p.to_tsv() == ref_p.to_tsv() and j.to_tsv() == ref_j.to_tsv()
        pr = pagerank_journal(transition_matrix(project(g)), threads=threads)
        assert pr.to_tsv() == ref_pr.to_tsv()


def test_scorevector_ranking_ties_by_id():
    sv = ScoreVector("journal", [0.2, 0.3, 0.2, 0.3], ["a", "b", "c", "d"])
    assert sv.ranking.tolist() == [1, 3, 0, 2]
    assert sv.ranks.tolist() == [3, 1, 4, 2]


def test_scorevector_tsv_round_trip():
    rng = np.random.default_rng(0)
    s = rng.random(50)
    s[10:20] = s[3]
    sv = ScoreVector("journal", s / s.sum(), [f"J{i}" for i in range(50)])
    back = ScoreVector.from_tsv(sv.to_tsv())
    assert back.to_tsv() == sv.to_tsv()
    assert back.by_label() == sv.by_label()
