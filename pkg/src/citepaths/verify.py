"""Monte-Carlo check of the path-respecting walk.

Simulates many independent walkers on the paper graph with plain numpy
sampling; it shares nothing with the power-iteration code except the graph.
"""
from dataclasses import dataclass

import numpy as np


@dataclass
class MonteCarloResult:
    mean: np.ndarray      # per-journal occupancy estimate
    stderr: np.ndarray    # standard error across walkers
    steps: int

    def z_scores(self, expected):
        se = np.where(self.stderr > 0, self.stderr, np.inf)
        return (np.asarray(expected) - self.mean) / se


def simulate_walk(g, damping=0.5, walkers=10_000, steps=1_000, burn_in=100, seed=0):
    """Estimate journal visitation frequencies of the path-respecting walk.

    Each walker starts from the teleport distribution, runs ``burn_in``
    unrecorded steps, then ``steps`` recorded ones. At each step it follows a
    uniformly random citation with probability ``damping`` (when its paper
    cites anything), else picks a uniform journal and a uniform paper in it.
    """
    rng = np.random.default_rng(seed)
    J = g.n_journals
    indptr = np.asarray(g.out_indptr)
    indices = np.asarray(g.out_indices)
    outdeg = np.diff(indptr)
    jptr = np.asarray(g.journal_indptr)
    members = np.asarray(g.journal_papers)
    sizes = np.diff(jptr)
    journal = np.asarray(g.journal)

    def teleport(m):
        j = rng.integers(J, size=m)
        return members[jptr[j] + (rng.random(m) * sizes[j]).astype(np.int64)]

    pos = teleport(walkers)
    counts = np.zeros((walkers, J), dtype=np.int64)
    rows = np.arange(walkers)
    for t in range(burn_in + steps):
        deg = outdeg[pos]
        follow = (rng.random(walkers) < damping) & (deg > 0)
        nxt = np.empty_like(pos)
        f = np.flatnonzero(follow)
        pick = (rng.random(len(f)) * deg[f]).astype(np.int64)
        nxt[f] = indices[indptr[pos[f]] + pick]
        jump = np.flatnonzero(~follow)
        nxt[jump] = teleport(len(jump))
        pos = nxt
        if t >= burn_in:
            counts[rows, journal[pos]] += 1
    per_walker = counts / steps
    mean = per_walker.mean(axis=0)
    stderr = per_walker.std(axis=0, ddof=1) / np.sqrt(walkers)
    return MonteCarloResult(mean, stderr, walkers * steps)
