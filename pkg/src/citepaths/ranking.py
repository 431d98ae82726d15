"""Journal rankings.

Three scores are provided:

* :func:`pagerank_journal` -- standard PageRank on the projected journal
  network, ``PR = ((1 - d)/n E + d T) PR``;
* :func:`pagerank_paths` -- PageRank on the paper network with a journal-level
  teleport (pick a journal uniformly, then one of its papers uniformly), so the
  walker only ever follows real citation paths; paper scores are summed per
  journal;
* :func:`citation_count_baseline` -- weighted in-degree share, a local
  indicator in the spirit of the impact factor.

Mass sitting on a dangling node (no outgoing citations) is redistributed with
the teleport distribution of the respective walk.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ConfigurationError, ConvergenceError, DegenerateInputError, DomainError
from .projection import TransitionMatrix


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.5
    tolerance: float = 1e-12
    max_iter: int = 1000

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must lie in (0, 1), got {self.damping}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class ScoreVector:
    """Non-negative scores keyed by dense entity id.

    ``ranking`` orders entities by descending score, ties broken by ascending
    id. ``meta`` holds solver diagnostics and does not take part in equality.
    """

    kind: str
    scores: np.ndarray
    labels: list = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.labels is None:
            self.labels = [str(i) for i in range(len(self.scores))]
        self.labels = list(self.labels)
        if len(self.labels) != len(self.scores):
            raise DomainError("labels and scores differ in length")
        self._ranking = None

    def __len__(self):
        return len(self.scores)

    def __eq__(self, other):
        if not isinstance(other, ScoreVector):
            return NotImplemented
        return (self.kind == other.kind and self.labels == other.labels
                and np.array_equal(self.scores, other.scores))

    __hash__ = None

    @property
    def ranking(self):
        if self._ranking is None:
            n = len(self.scores)
            self._ranking = np.lexsort((np.arange(n), -self.scores))
        return self._ranking

    @property
    def ranks(self):
        """1-based rank position of every entity."""
        r = np.empty(len(self.scores), dtype=np.int64)
        r[self.ranking] = np.arange(1, len(self.scores) + 1)
        return r

    def top(self, k):
        return self.ranking[:k]

    def total(self):
        return math.fsum(self.scores.tolist())

    def by_label(self):
        return dict(zip(self.labels, self.scores.tolist()))

    def to_tsv(self):
        """``rank<TAB>entity<TAB>score`` sorted by rank, scores with 17
        significant digits."""
        out = ["rank\tentity\tscore"]
        labels, scores = self.labels, self.scores
        for pos, i in enumerate(self.ranking.tolist(), start=1):
            out.append(f"{pos}\t{labels[i]}\t{scores[i]:.17g}")
        return ("\n".join(out) + "\n").encode("utf-8")

    @classmethod
    def from_tsv(cls, data, kind="journal"):
        """Inverse of :meth:`to_tsv`; entity ids follow file rank order."""
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        lines = [ln for ln in data.splitlines() if ln.strip()]
        if not lines or lines[0].split("\t") != ["rank", "entity", "score"]:
            raise DomainError("score file must start with header rank<TAB>entity<TAB>score")
        rows = []
        for ln in lines[1:]:
            parts = ln.split("\t")
            if len(parts) != 3:
                raise DomainError(f"malformed score row {ln!r}")
            rows.append((int(parts[0]), parts[1], float(parts[2])))
        rows.sort()
        return cls(kind, [r[2] for r in rows], [r[1] for r in rows])


def teleport_distribution(g):
    """v(p) = 1 / (J * |papers in journal_of(p)|)."""
    sizes = g.journal_sizes
    if g.n_journals == 0 or np.any(sizes == 0):
        empty = np.flatnonzero(sizes == 0)
        raise ConfigurationError(
            f"journals without papers cannot be teleport targets: {empty[:10].tolist()}")
    return 1.0 / (g.n_journals * sizes[g.journal].astype(np.float64))


def _power_iterate(step, start, teleport, dangling, cfg):
    """Iterate ``x <- d*step(x) + (d*dangling_mass + 1 - d) * teleport``."""
    d = cfg.damping
    x = start.copy()
    resid = math.inf
    for it in range(1, cfg.max_iter + 1):
        dangling_mass = x[dangling].sum()
        new = step(x)
        new *= d
        new += (d * dangling_mass + (1.0 - d)) * teleport
        resid = float(np.abs(new - x).sum())
        x = new
        if resid < cfg.tolerance:
            return x, it, resid
    raise ConvergenceError(
        f"power iteration did not converge in {cfg.max_iter} iterations "
        f"(L1 residual {resid:.3e} >= {cfg.tolerance:.1e})",
        residual=resid, iterations=cfg.max_iter)


def pagerank_journal(T, cfg=None, threads=1):
    """Standard PageRank on the journal transition matrix ``T``.

    ``T`` may be a :class:`~citepaths.projection.TransitionMatrix` or a
    :class:`~citepaths.projection.JournalGraph`.
    """
    cfg = cfg or PageRankConfig()
    if not isinstance(T, TransitionMatrix):
        T = TransitionMatrix(T)
    n = T.n
    if n == 0:
        raise ConfigurationError("cannot rank an empty journal set")
    kernels = _backend.kernels
    uniform = np.full(n, 1.0 / n)
    out = np.empty(n)

    def step(x):
        kernels.pull_weighted(T.t_indptr, T.t_indices, T.t_probs, x, out, threads)
        return out.copy()

    x, it, resid = _power_iterate(step, uniform, uniform, np.asarray(T.dangling), cfg)
    return ScoreVector("journal", x, T.journal_names,
                       meta={"iterations": it, "residual": resid})


def pagerank_paths(g, cfg=None, threads=1):
    """Path-respecting journal PageRank.

    Returns ``(paper_scores, journal_scores)``. At each step the walker
    follows a uniformly chosen citation of its current paper with probability
    ``d``; otherwise, or when the paper cites nothing, it restarts from the
    journal-level teleport distribution.
    """
    cfg = cfg or PageRankConfig()
    v = teleport_distribution(g)
    kernels = _backend.kernels
    outdeg = g.out_degree
    dangling = outdeg == 0
    inv_out = np.zeros(g.n_papers)
    inv_out[~dangling] = 1.0 / outdeg[~dangling]
    out = np.empty(g.n_papers)

    def step(x):
        kernels.pull_sum(g.in_indptr, g.in_indices, x * inv_out, out, threads)
        return out.copy()

    x, it, resid = _power_iterate(step, v, v, dangling, cfg)
    papers = ScoreVector("paper", x, g.paper_ids,
                         meta={"iterations": it, "residual": resid})
    journals = aggregate_to_journals(papers, g)
    journals.meta.update(papers.meta)
    return papers, journals


def aggregate_to_journals(paper_scores, g):
    """Sum paper scores per journal (exactly rounded summation)."""
    scores = np.asarray(getattr(paper_scores, "scores", paper_scores), dtype=np.float64)
    if len(scores) != g.n_papers:
        raise DomainError(f"{len(scores)} paper scores for a graph of {g.n_papers} papers")
    totals = np.array([math.fsum(scores[g.papers_of(j)].tolist())
                       for j in range(g.n_journals)])
    return ScoreVector("journal", totals, g.journal_names)


def citation_count_baseline(jg):
    """Share of all (weighted) citations received by each journal."""
    w = jg.in_weight.astype(np.float64)
    total = w.sum()
    if total == 0:
        raise DegenerateInputError("no journal receives any citation")
    return ScoreVector("journal", w / total, jg.journal_names)
