"""Synthetic citation corpora.

:func:`random_corpus` draws a small uniform random DAG (for tests and
oracles). :func:`preferential_corpus` grows a large corpus with
preferential attachment, journal size heterogeneity, staggered journal
launches and topical homophily, which is enough for the journal projection to
invent many paths that the paper graph does not contain.
"""
from pathlib import Path

import numpy as np

from .graph import PaperGraph


class SyntheticCorpus:
    """Column arrays of a generated corpus plus helpers to write TSV files."""

    def __init__(self, journal, year, citing, cited, paper_ids=None, journal_names=None):
        self.journal = np.asarray(journal, dtype=np.int32)
        self.year = np.asarray(year, dtype=np.int32)
        self.citing = np.asarray(citing, dtype=np.int64)
        self.cited = np.asarray(cited, dtype=np.int64)
        n = len(self.journal)
        n_journals = int(self.journal.max()) + 1 if n else 0
        self.paper_ids = paper_ids or [f"P{i}" for i in range(n)]
        self.journal_names = journal_names or [f"J{j:05d}" for j in range(n_journals)]

    @property
    def n_papers(self):
        return len(self.journal)

    def graph(self, options=None):
        return PaperGraph.from_arrays(self.journal, self.year, self.citing, self.cited,
                                      options=options, paper_ids=self.paper_ids,
                                      journal_names=self.journal_names)

    def write(self, directory, prefix="corpus"):
        """Write ``<prefix>.metadata.tsv`` and ``<prefix>.citations.tsv``."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        mpath = directory / f"{prefix}.metadata.tsv"
        cpath = directory / f"{prefix}.citations.tsv"
        names = self.journal_names
        with open(mpath, "w", encoding="utf-8", newline="\n") as f:
            f.write("paper_id\tjournal\tyear\n")
            f.writelines(f"{p}\t{names[j]}\t{y}\n" for p, j, y in
                         zip(self.paper_ids, self.journal.tolist(), self.year.tolist()))
        ids = self.paper_ids
        with open(cpath, "w", encoding="utf-8", newline="\n") as f:
            f.write("citing_id\tcited_id\n")
            f.writelines(f"{ids[a]}\t{ids[b]}\n" for a, b in
                         zip(self.citing.tolist(), self.cited.tolist()))
        return mpath, cpath


def random_corpus(n_papers, n_journals, n_edges, seed=0, first_year=1990, span=30):
    """Uniform random corpus; every journal gets at least one paper.

    Papers are numbered in publication order and every edge points from a
    later to a strictly earlier paper, so the result is a DAG without forward
    citations. Duplicate edges are possible.
    """
    if n_journals > n_papers:
        raise ValueError("need at least one paper per journal")
    rng = np.random.default_rng(seed)
    journal = np.concatenate([np.arange(n_journals),
                              rng.integers(n_journals, size=n_papers - n_journals)])
    rng.shuffle(journal)
    year = first_year + (np.arange(n_papers) * span) // max(n_papers, 1)
    if n_papers < 2 or n_edges == 0:
        return SyntheticCorpus(journal, year, [], [])
    a = rng.integers(1, n_papers, size=n_edges)
    b = (rng.random(n_edges) * a).astype(np.int64)
    return SyntheticCorpus(journal, year, a, b)


def preferential_corpus(n_papers=1_000_000, n_journals=5000, refs=5.0, n_fields=40,
                        p_uniform=0.15, p_field=0.35, block=10_000, seed=0,
                        first_year=1940, last_year=2016):
    """Grow a citation corpus paper by paper (vectorized in blocks).

    Each paper draws Poisson(``refs``) references to earlier papers: with
    probability ``p_uniform`` a uniform earlier paper, with ``p_field`` a
    uniform earlier paper of the same field, otherwise the target of a
    uniformly chosen earlier citation (preferential attachment). Journal sizes
    follow a power law and journals open at staggered times.
    """
    rng = np.random.default_rng(seed)
    N, J = n_papers, n_journals

    jfield = rng.integers(n_fields, size=J)
    jweight = 1.0 / np.arange(1, J + 1) ** 0.9
    rng.shuffle(jweight)
    jstart = np.where(rng.random(J) < 0.3, 0, (rng.random(J) * 0.8 * N).astype(np.int64))
    jstart[np.argsort(jstart)[:min(J, 50)]] = 0

    journal = np.empty(N, dtype=np.int64)
    for lo in range(0, N, block):
        hi = min(N, lo + block)
        open_ = np.flatnonzero(jstart <= lo)
        w = jweight[open_]
        journal[lo:hi] = rng.choice(open_, size=hi - lo, p=w / w.sum())
    # every journal gets at least one paper: a distinct launch paper
    order = np.argsort(jstart, kind="stable")
    steps = np.arange(J)
    launch = np.maximum.accumulate(jstart[order] - steps) + steps
    if J > N or launch[-1] >= N:
        raise ValueError("too many journals for the number of papers")
    journal[launch] = order
    year = first_year + (np.arange(N) * (last_year - first_year + 1)) // N

    field = jfield[journal]
    by_field = np.argsort(field, kind="stable")
    field_ptr = np.zeros(n_fields + 1, dtype=np.int64)
    np.cumsum(np.bincount(field, minlength=n_fields), out=field_ptr[1:])
    rank_in_field = np.empty(N, dtype=np.int64)
    rank_in_field[by_field] = np.arange(N) - field_ptr[field[by_field]]

    nrefs = rng.poisson(refs, size=N)
    nrefs[0] = 0
    citing_parts, cited_parts = [], []
    n_done = 0
    history = np.empty(int(nrefs.sum()), dtype=np.int64)
    for lo in range(0, N, block):
        hi = min(N, lo + block)
        src = np.repeat(np.arange(lo, hi), nrefs[lo:hi])
        m = len(src)
        u = rng.random(m)
        r = rng.random(m)
        dst = (r * src).astype(np.int64)

        same = (u >= p_uniform) & (u < p_uniform + p_field)
        f = field[src[same]]
        before = rank_in_field[src[same]]
        pick = (r[same] * before).astype(np.int64)
        ok = before > 0
        dst_same = dst[same]
        dst_same[ok] = by_field[field_ptr[f[ok]] + pick[ok]]
        dst[same] = dst_same

        pref = u >= p_uniform + p_field
        if n_done:
            dst[pref] = history[(r[pref] * n_done).astype(np.int64)]
        # preferential draws may land on papers of the current block; keep DAG
        bad = dst >= src
        dst[bad] = (r[bad] * src[bad]).astype(np.int64)
        keep = src > 0
        src, dst = src[keep], dst[keep]

        citing_parts.append(src)
        cited_parts.append(dst)
        history[n_done:n_done + len(dst)] = dst
        n_done += len(dst)

    citing = np.concatenate(citing_parts) if citing_parts else np.zeros(0, np.int64)
    cited = np.concatenate(cited_parts) if cited_parts else np.zeros(0, np.int64)
    return SyntheticCorpus(journal, year, citing, cited)
