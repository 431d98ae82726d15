"""Compare the compiled kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--papers N] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from citepaths import _backend, _fallback
from citepaths.synth import preferential_corpus


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--papers", type=int, default=200_000)
    ap.add_argument("--journals", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    if _backend.name != "cython":
        print("compiled extension not available; only the fallback can be timed")
    compiled = _backend.kernels if _backend.name == "cython" else None

    corpus = preferential_corpus(n_papers=args.papers, n_journals=args.journals, seed=0)
    g = corpus.graph()
    x = np.random.default_rng(0).random(g.n_papers)
    out = np.empty(g.n_papers)
    n_inv = min(g.n_papers, 200_000)
    y = np.random.default_rng(1).random(n_inv)
    primary = np.asarray(corpus.citing, dtype=np.int64)
    secondary = np.asarray(corpus.cited, dtype=np.int64)

    cases = {
        f"pull_sum (E={g.n_edges})":
            lambda k: k.pull_sum(g.in_indptr, g.in_indices, x, out, args.threads),
        f"radix_argsort_pairs (E={len(primary)})":
            lambda k: k.radix_argsort_pairs(primary, secondary, g.n_papers),
        f"count_inversions (n={n_inv})":
            lambda k: k.count_inversions(y),
    }
    print(f"{'kernel':40s} {'fallback':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name, case in cases.items():
        t_fb = best(lambda: case(_fallback), args.repeat)
        if compiled is None:
            print(f"{name:40s} {t_fb * 1e3:10.2f}ms {'-':>12s} {'-':>8s}")
            continue
        t_c = best(lambda: case(compiled), args.repeat)
        print(f"{name:40s} {t_fb * 1e3:10.2f}ms {t_c * 1e3:10.2f}ms {t_fb / t_c:7.1f}x")


if __name__ == "__main__":
    main()
