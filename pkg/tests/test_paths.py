import json

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from citepaths import (CitationEdge, PaperRecord, build_paper_graph, count_implied_2paths,
                       count_observed_2paths, focal_path_flows, path_census, project)
from citepaths.synth import random_corpus

from conftest import brute_force_2paths


def brute_force_implied(jg):
    """Weight products of consecutive journal edges."""
    d = jg.as_dict()
    return sum(w1 * w2 for (a, b), w1 in d.items() for (c, e), w2 in d.items() if b == c)


def test_fig1_observed(fig1a, fig1b):
    assert count_observed_2paths(fig1a) == 1
    assert count_observed_2paths(fig1b) == 0


def test_fig1b_implied(fig1b):
    assert count_implied_2paths(project(fig1b)) == 1


def test_census_fig1b(fig1b):
    c = path_census(fig1b)
    assert (c.observed, c.implied, c.ratio) == (0, 1, 0.0)
    data = json.loads(c.to_json())
    assert data["observed"] == 0 and data["implied"] == 1 and not data["degenerate"]


def test_one_paper_per_journal_chain():
    recs = [PaperRecord(i, i, 2000 + i) for i in range(6)]
    edges = [CitationEdge(i + 1, i) for i in range(5)]
    g = build_paper_graph(recs, edges)
    c = path_census(g)
    assert c.observed == c.implied == 4
    assert c.ratio == 1.0


def test_edgeless_census_is_degenerate():
    g = build_paper_graph([PaperRecord(i, i % 2, 2000) for i in range(4)], [])
    c = path_census(g)
    assert (c.observed, c.implied, c.ratio, c.degenerate) == (0, 0, 1.0, True)


@given(st.integers(2, 60), st.integers(1, 8), st.integers(0, 200), st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_counts_match_brute_force_and_dominance(n, j, m, seed):
    g = random_corpus(max(n, j), j, m, seed=seed).graph()
    src, dst = g.edges()
    jg = project(g)
    c = path_census(g)
    assert c.observed == brute_force_2paths(src, dst)
    assert c.implied == brute_force_implied(jg)
    assert c.observed <= c.implied
    assert 0.0 <= c.ratio <= 1.0


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_monotone_under_edge_addition(seed):
    corpus = random_corpus(40, 5, 80, seed=seed)
    extra = random_corpus(40, 5, 10, seed=seed + 1)
    g1 = corpus.graph()
    g2 = build_paper_graph(
        [PaperRecord(i, int(j), int(y)) for i, (j, y) in enumerate(zip(corpus.journal, corpus.year))],
        [CitationEdge(a, b) for a, b in zip(np.r_[corpus.citing, extra.citing].tolist(),
                                            np.r_[corpus.cited, extra.cited].tolist())])
    c1, c2 = path_census(g1), path_census(g2)
    assert c2.observed >= c1.observed and c2.implied >= c1.implied


def test_large_counts_exact():
    # a star-shaped hub whose implied count overflows nothing but is large
    n = 3001
    recs = [PaperRecord(i, 0 if i == 1500 else 1 + (i % 7), 2000 + i) for i in range(n)]
    edges = ([CitationEdge(1500, i) for i in range(1500)]
             + [CitationEdge(i, 1500) for i in range(1501, n)])
    g = build_paper_graph(recs, edges)
    assert count_observed_2paths(g) == 1500 * 1500
    assert isinstance(count_implied_2paths(project(g)), int)


def test_focal_fig1a(fig1a):
    t = focal_path_flows(fig1a, "C")
    assert [(t.journal_names[a], t.journal_names[b], c) for a, b, c in t.rows] == [("A", "B", 1)]
    assert t.other == 0 and t.total == 1
    assert t.to_tsv().decode().splitlines() == ["source_journal\tvia_journal\tcount", "A\tB\t1"]


def test_focal_without_incoming_paths(fig1a, fig1b):
    assert focal_path_flows(fig1a, "A").rows == []
    assert focal_path_flows(fig1b, "C").rows == []


def test_focal_topk_and_remainder():
    g = random_corpus(400, 10, 3000, seed=5).graph()
    focal = 3
    t = focal_path_flows(g, focal, top_k=5)
    # enumerate every path a -> b -> c with c in focal
    tally = {}
    for a in range(g.n_papers):
        for b in g.cites(a):
            for c in g.cites(b):
                if g.journal[c] == focal:
                    key = (int(g.journal[a]), int(g.journal[b]))
                    tally[key] = tally.get(key, 0) + 1
    assert t.total == sum(tally.values())
    assert len(t.rows) == 5
    for a, b, c in t.rows:
        assert tally[(a, b)] == c
    counts = [r[2] for r in t.rows]
    assert counts == sorted(counts, reverse=True)
    assert sorted(tally.values(), reverse=True)[:5] == counts
    assert t.other == t.total - sum(counts) > 0
    assert t.to_tsv().decode().splitlines()[-1] == f"(other)\t(other)\t{t.other}"
