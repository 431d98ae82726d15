"""Disagreement between two rankings of the same entities.

``a`` is the reference ranking (e.g. standard PageRank) and ``b`` the other
one. Entities are matched by label, so the two score vectors may list them in
different orders.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import DomainError

DEFAULT_GRID = (10, 20, 50, 100, 250, 500, 1000, 2500, 5000, 12500)


def _alignment(a, b):
    """Index array ``p`` with ``b.labels[p[i]] == a.labels[i]``."""
    if a.labels == b.labels:
        return np.arange(len(a))
    pos = {lab: i for i, lab in enumerate(b.labels)}
    missing_in_b = [lab for lab in a.labels if lab not in pos]
    if missing_in_b or len(a) != len(b):
        in_a = set(a.labels)
        missing_in_a = [lab for lab in b.labels if lab not in in_a]
        raise DomainError(
            "rankings cover different entities; "
            f"missing from second: {missing_in_b[:10]}, missing from first: {missing_in_a[:10]}")
    return np.array([pos[lab] for lab in a.labels], dtype=np.int64)


def _check_k(k, n, minimum=1):
    if not minimum <= k <= n:
        raise DomainError(f"k must lie in [{minimum}, {n}], got {k}")


def tied_pairs(values):
    _, counts = np.unique(np.asarray(values), return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def _run_pairs(breaks):
    """Tied pairs within runs of a sorted sequence, given its break mask."""
    edges = np.concatenate([[0], np.flatnonzero(breaks) + 1, [len(breaks) + 1]])
    lengths = np.diff(edges)
    return int((lengths * (lengths - 1) // 2).sum())


def kendall_tau_b(x, y):
    """Tie-adjusted Kendall tau (tau-b) in O(n log n).

    Returns NaN when either sequence is constant.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(x)
    if n != len(y):
        raise DomainError("sequences differ in length")
    if n < 2:
        raise DomainError("tau needs at least two items")
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    n0 = n * (n - 1) // 2
    n1 = _run_pairs(xs[1:] != xs[:-1])
    n2 = tied_pairs(ys)
    n3 = _run_pairs((xs[1:] != xs[:-1]) | (ys[1:] != ys[:-1]))
    swaps = _backend.kernels.count_inversions(np.ascontiguousarray(ys))
    denom = (n0 - n1) * (n0 - n2)
    if denom == 0:
        return math.nan
    return (n0 - n1 - n2 + n3 - 2 * swaps) / math.sqrt(denom)


def topk_overlap(a, b, k):
    """Jaccard similarity of the top-``k`` entity sets of ``a`` and ``b``."""
    p = _alignment(a, b)
    _check_k(k, len(a))
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p))
    top_a = set(a.top(k).tolist())
    top_b = set(inv[b.top(k)].tolist())
    return len(top_a & top_b) / len(top_a | top_b)


def topk_kendall(a, b, k):
    """tau-b between ``a`` and ``b`` over the top-``k`` entities of ``a``.

    Raw scores on both sides decide ties.
    """
    p = _alignment(a, b)
    _check_k(k, len(a), minimum=2)
    items = a.top(k)
    return kendall_tau_b(a.scores[items], b.scores[p[items]])


def render_change(delta):
    """ASCII form of a rank change: ``-3v`` (lost), ``+3^`` (gained), ``=``."""
    if delta < 0:
        return f"{delta}v"
    if delta > 0:
        return f"+{delta}^"
    return "="


def rank_change_table(a, b, k):
    """Rows ``(rank_a, rank_b, delta, label)`` for the top-``k`` of ``a``,
    with ``delta = rank_a - rank_b``."""
    p = _alignment(a, b)
    _check_k(k, len(a))
    ranks_b = b.ranks[p]
    rows = []
    for pos, i in enumerate(a.top(k).tolist(), start=1):
        rb = int(ranks_b[i])
        rows.append((pos, rb, pos - rb, a.labels[i]))
    return rows


def rank_change_tsv(rows):
    out = ["rank_pr\trank_prc\tdelta\tjournal"]
    out.extend(f"{ra}\t{rb}\t{render_change(d)}\t{lab}" for ra, rb, d, lab in rows)
    return ("\n".join(out) + "\n").encode("utf-8")


def default_grid(n):
    return sorted({min(k, n) for k in DEFAULT_GRID} | {n})


@dataclass
class RankingComparison:
    grid: list
    overlap: list
    kendall: list
    full_tau: float
    rows: list
    ties: dict = field(default_factory=dict)

    def to_csv(self):
        out = ["k,overlap,kendall"]
        for k, o, t in zip(self.grid, self.overlap, self.kendall):
            out.append(f"{k},{o:.17g},{t:.17g}")
        return ("\n".join(out) + "\n").encode("utf-8")

    def summary(self):
        return {"grid": list(self.grid), "full_tau": self.full_tau, "ties": self.ties}


def comparison_curves(a, b, grid=None):
    """Overlap and tau-b curves over ``grid`` plus the full rank-change table.

    ``kendall`` is NaN at ``k == 1``, where tau is undefined. ``ties`` records
    the number of tied score pairs in each ranking.
    """
    n = len(a)
    p = _alignment(a, b)
    grid = default_grid(n) if grid is None else sorted({int(k) for k in grid})
    for k in grid:
        _check_k(k, n)
    overlap = [topk_overlap(a, b, k) for k in grid]
    kendall = [topk_kendall(a, b, k) if k >= 2 else math.nan for k in grid]
    full = kendall_tau_b(a.scores, b.scores[p]) if n >= 2 else math.nan
    return RankingComparison(
        grid=grid, overlap=overlap, kendall=kendall, full_tau=full,
        rows=rank_change_table(a, b, n),
        ties={"a": tied_pairs(a.scores), "b": tied_pairs(b.scores)})
