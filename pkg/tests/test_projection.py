import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from citepaths import JournalGraph, project, transition_matrix
from citepaths.synth import random_corpus


def test_fig1_projections(fig1a, fig1b):
    expected = {("A", "B"): 1, ("B", "C"): 1}
    assert project(fig1a).as_dict() == expected
    assert project(fig1b).as_dict() == expected


def test_fig1_projections_byte_identical(fig1a, fig1b):
    assert fig1a.to_bytes() != fig1b.to_bytes()
    assert project(fig1a).to_tsv() == project(fig1b).to_tsv()
    assert project(fig1a) == project(fig1b)


def test_fig2a_acyclic_papers_cyclic_journals(fig2a):
    assert fig2a.is_acyclic()
    jg = project(fig2a)
    assert jg.has_cycle()
    assert jg.as_dict() == {("A", "D"): 1, ("D", "C"): 1, ("C", "B"): 1, ("B", "A"): 1}


def test_tsv_export_sorted():
    jg = JournalGraph(3, [2, 0, 0], [0, 2, 1], [4, 1, 3], journal_names=["x", "y", "a"])
    assert jg.to_tsv().decode().splitlines() == [
        "source_journal\ttarget_journal\tweight", "a\tx\t4", "x\ta\t1", "x\ty\t3"]


def test_transition_row_normalization():
    jg = JournalGraph(3, [0, 0], [1, 2], [3, 1], journal_names=["A", "B", "C"])
    T = transition_matrix(jg)
    assert T.row(0) == {1: 0.75, 2: 0.25}
    assert T.dangling.tolist() == [False, True, True]
    assert T.row(1) == {}


def test_random_projection_row_sums():
    g = random_corpus(2000, 50, 6000, seed=4).graph()
    T = transition_matrix(project(g))
    sums = T.row_sums()
    for s, dangling in zip(sums, T.dangling):
        assert dangling and s == 0 or abs(s - 1.0) <= 1e-12


def test_transpose_matches_rows():
    g = random_corpus(500, 20, 3000, seed=6).graph()
    T = transition_matrix(project(g))
    dense_t = np.zeros((T.n, T.n))
    rows = np.repeat(np.arange(T.n), np.diff(T.t_indptr))
    dense_t[rows, T.t_indices] = T.t_probs
    assert np.array_equal(dense_t, T.dense().T)


@given(st.integers(1, 80), st.integers(1, 10), st.integers(0, 300), st.integers(0, 10 ** 6))
@settings(max_examples=50, deadline=None)
def test_conservation(n, j, m, seed):
    g = random_corpus(max(n, j), j, m, seed=seed).graph()
    jg = project(g)
    assert jg.total_weight == g.n_edges
    assert jg.out_weight.sum() == jg.in_weight.sum() == g.n_edges
    # brute-force tally
    tally = {}
    for a in range(g.n_papers):
        for b in g.cites(a):
            key = (g.journal_names[g.journal[a]], g.journal_names[g.journal[b]])
            tally[key] = tally.get(key, 0) + 1
    assert jg.as_dict() == tally


def test_exclude_self_loops():
    g = random_corpus(300, 3, 2000, seed=1).graph()
    full, trimmed = project(g), project(g, self_loops=False)
    assert not np.any(trimmed.source == trimmed.target)
    intra = sum(w for (a, b), w in full.as_dict().items() if a == b)
    assert trimmed.total_weight == full.total_weight - intra > 0
