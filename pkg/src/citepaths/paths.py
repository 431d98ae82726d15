"""Observed versus projection-implied citation paths of length two.

A length-two path ``a -> b -> c`` is two consecutive paper citations. On the
paper graph their number is ``sum_p in(p) * out(p)``; the journal projection
implies ``sum_B in_w(B) * out_w(B)`` of them, because any citation into B can
be chained with any citation out of B. Counts are exact Python integers.
"""
import json
from dataclasses import dataclass

import numpy as np

from .projection import project

OTHER = "(other)"


def _exact_dot(a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if len(a) == 0:
        return 0
    bound = int(a.max()) * int(b.max()) * len(a)
    if bound < 2 ** 62:
        return int(np.dot(a, b))
    return sum(x * y for x, y in zip(a.tolist(), b.tolist()))


def count_observed_2paths(g):
    return _exact_dot(g.in_degree, g.out_degree)


def count_implied_2paths(jg):
    return _exact_dot(jg.in_weight, jg.out_weight)


@dataclass(frozen=True)
class PathCensus:
    observed: int
    implied: int

    @property
    def degenerate(self):
        return self.implied == 0

    @property
    def ratio(self):
        # no implied paths means the projection added none
        return 1.0 if self.implied == 0 else self.observed / self.implied

    def to_dict(self):
        return {"observed": self.observed, "implied": self.implied,
                "ratio": self.ratio, "degenerate": self.degenerate,
                "implied_convention": "weighted in*out degree product per journal"}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def path_census(g):
    """Observed and implied 2-path counts; the projection keeps self-loops."""
    return PathCensus(count_observed_2paths(g), count_implied_2paths(project(g)))


@dataclass
class PathFlowTable:
    """Length-two paths ending in ``focal``, aggregated by (source, via) journal.

    ``rows`` holds at most ``top_k`` ``(source, via, count)`` triples sorted by
    count descending, then ids; ``other`` is the count of the truncated rest,
    ``total`` the count before truncation.
    """

    focal: int
    rows: list
    other: int
    total: int
    top_k: int
    journal_names: list

    def to_tsv(self):
        names = self.journal_names
        out = ["source_journal\tvia_journal\tcount"]
        out.extend(f"{names[a]}\t{names[b]}\t{c}" for a, b, c in self.rows)
        if self.other:
            out.append(f"{OTHER}\t{OTHER}\t{self.other}")
        return ("\n".join(out) + "\n").encode("utf-8")


def focal_path_flows(g, focal, top_k=45):
    """Observed 2-paths ``a -> b -> c`` with ``c`` in journal ``focal``.

    ``focal`` is a journal handle or name; unknown journals raise
    ``KeyError``/``IndexError``.
    """
    if isinstance(focal, str):
        focal = g.journal_index(focal)
    if not 0 <= focal < g.n_journals:
        raise IndexError(f"journal id {focal} out of range 0..{g.n_journals - 1}")
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    src, dst = g.edges()
    into_focal = g.journal[dst] == focal
    # m[b]: citations from b into the focal journal
    m = np.bincount(src[into_focal], minlength=g.n_papers)
    w = m[dst]
    keep = w > 0
    J = g.n_journals
    keys = g.journal[src[keep]].astype(np.int64) * J + g.journal[dst[keep]]
    uniq, inv = np.unique(keys, return_inverse=True)
    counts = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(counts, inv.ravel(), w[keep])
    order = np.lexsort((uniq, -counts))
    rows = [(int(uniq[i] // J), int(uniq[i] % J), int(counts[i])) for i in order]
    total = sum(r[2] for r in rows)
    shown = rows[:top_k]
    return PathFlowTable(focal, shown, total - sum(r[2] for r in shown), total,
                         top_k, g.journal_names)
