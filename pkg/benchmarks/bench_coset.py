"""Benchmark the compiled vs pure-Python Todd-Coxeter engines on
symmetric-group Coxeter presentations, checking that both produce
identical coset tables.

Usage: python3 benchmarks/bench_coset.py [max_n]
"""

import sys
import time

import numpy as np

from flatact import _coset_pure
from flatact.fpgroups import symmetric_presentation, word_to_letters

try:
    from flatact import _coset_cy
except ImportError:
    _coset_cy = None


def run(engine, n, limit=2_000_000):
    g = symmetric_presentation(n)
    rels = [word_to_letters(w) for w in g.relators]
    t0 = time.perf_counter()
    table = engine.enumerate_cosets(g.ngens, rels, [], limit)
    return table, time.perf_counter() - t0


def main():
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 8
    print("%-4s %10s %12s %12s %8s" % ("n", "cosets", "pure (s)", "compiled (s)",
                                       "speedup"))
    for n in range(3, max_n + 1):
        pure_table, pure_t = run(_coset_pure, n)
        if _coset_cy is None:
            print("%-4d %10d %12.3f %12s %8s"
                  % (n, pure_table.shape[0], pure_t, "n/a", "n/a"))
            continue
        cy_table, cy_t = run(_coset_cy, n)
        assert np.array_equal(pure_table, cy_table), \
            "engines disagree on S%d" % n
        print("%-4d %10d %12.3f %12.3f %7.1fx"
              % (n, pure_table.shape[0], pure_t, cy_t, pure_t / max(cy_t, 1e-9)))
    if _coset_cy is None:
        print("compiled engine unavailable; built tables with the pure engine only")
    else:
        print("tables identical across engines for all sizes")


if __name__ == "__main__":
    main()
