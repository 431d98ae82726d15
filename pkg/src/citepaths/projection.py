"""Projection of paper citations onto journals.

The journal graph has ``w(A -> B)`` = number of paper citations from papers in
A to papers in B. Intra-journal citations become self-loops and are kept by
default.
"""
import numpy as np

from .graph import _csr, _readonly, has_cycle


class JournalGraph:
    """Weighted directed journal citation graph, edges sorted by (source, target)."""

    def __init__(self, n_journals, source, target, weight, journal_names=None):
        self.n_journals = int(n_journals)
        self.source = _readonly(np.asarray(source, dtype=np.int64))
        self.target = _readonly(np.asarray(target, dtype=np.int64))
        self.weight = _readonly(np.asarray(weight, dtype=np.int64))
        self.journal_names = (list(journal_names) if journal_names is not None
                              else [str(j) for j in range(self.n_journals)])
        J = self.n_journals
        self.out_weight = _readonly(np.bincount(self.source, weights=self.weight,
                                                minlength=J).astype(np.int64))
        self.in_weight = _readonly(np.bincount(self.target, weights=self.weight,
                                               minlength=J).astype(np.int64))

    @property
    def n_edges(self):
        return len(self.source)

    @property
    def total_weight(self):
        return int(self.weight.sum())

    def as_dict(self):
        """{(source_name, target_name): weight}."""
        names = self.journal_names
        return {(names[a], names[b]): int(w)
                for a, b, w in zip(self.source.tolist(), self.target.tolist(),
                                   self.weight.tolist())}

    def adjacency(self):
        """Unweighted CSR (indptr, indices) by source."""
        return _csr(self.source, self.target, self.n_journals)

    def has_cycle(self):
        """True if the graph has a directed cycle; self-loops count as cycles."""
        if np.any(self.source == self.target):
            return True
        indptr, indices = self.adjacency()
        return has_cycle(indptr, indices)

    def to_tsv(self):
        """``source_journal<TAB>target_journal<TAB>weight`` rows, sorted by
        (source, target) journal name."""
        names = self.journal_names
        rows = sorted((names[a], names[b], int(w)) for a, b, w in
                      zip(self.source.tolist(), self.target.tolist(), self.weight.tolist()))
        out = ["source_journal\ttarget_journal\tweight"]
        out.extend(f"{a}\t{b}\t{w}" for a, b, w in rows)
        return ("\n".join(out) + "\n").encode("utf-8")

    def __eq__(self, other):
        if not isinstance(other, JournalGraph):
            return NotImplemented
        return self.to_tsv() == other.to_tsv()

    __hash__ = None

    def __repr__(self):
        return (f"JournalGraph(n_journals={self.n_journals}, n_edges={self.n_edges}, "
                f"total_weight={self.total_weight})")


def project(g, self_loops=True):
    """Aggregate the paper citations of ``g`` into a :class:`JournalGraph`.

    With ``self_loops=False`` intra-journal citations are dropped (for
    sensitivity analysis only; conservation of citations then no longer holds).
    """
    J = g.n_journals
    src, dst = g.edges()
    js = g.journal[src].astype(np.int64)
    jd = g.journal[dst].astype(np.int64)
    if not self_loops:
        keep = js != jd
        js, jd = js[keep], jd[keep]
    keys, counts = np.unique(js * max(J, 1) + jd, return_counts=True)
    return JournalGraph(J, keys // max(J, 1), keys % max(J, 1), counts,
                        journal_names=g.journal_names)


class TransitionMatrix:
    """Row-stochastic transition matrix ``T[A, B] = w(A->B) / out_weight(A)``.

    Stored twice: by row (``indptr``/``indices``/``probs``) and transposed
    (``t_indptr``/``t_indices``/``t_probs``, grouped by target) for the pull
    form of power iteration. Rows of journals without out-citations are empty
    and flagged in ``dangling``.
    """

    def __init__(self, jg):
        J = jg.n_journals
        self.n = J
        self.journal_names = jg.journal_names
        out_w = jg.out_weight.astype(np.float64)
        probs = jg.weight / out_w[jg.source] if jg.n_edges else np.zeros(0)
        self.indptr, idx = _csr(jg.source, jg.target, J)
        self.indices = _readonly(idx)
        self.probs = _readonly(probs)
        self.indptr = _readonly(self.indptr)

        order = np.lexsort((jg.source, jg.target))
        t_indptr, t_idx = _csr(jg.target[order], jg.source[order], J)
        self.t_indptr = _readonly(t_indptr)
        self.t_indices = _readonly(t_idx)
        self.t_probs = _readonly(probs[order])
        self.dangling = _readonly(jg.out_weight == 0)

    def row(self, a):
        lo, hi = self.indptr[a], self.indptr[a + 1]
        return dict(zip(self.indices[lo:hi].tolist(), self.probs[lo:hi].tolist()))

    def row_sums(self):
        return np.bincount(np.repeat(np.arange(self.n), np.diff(self.indptr)),
                           weights=self.probs, minlength=self.n)

    def dense(self):
        T = np.zeros((self.n, self.n))
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        T[rows, self.indices] = self.probs
        return T


def transition_matrix(jg):
    return TransitionMatrix(jg)
