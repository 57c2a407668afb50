"""Compiled versus pure-Python kernels, plus end-to-end membership timings.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from subshift import _kernels_py
from subshift.core import morphism
from subshift.langtools import _flat_images, language_factors, pattern_automaton

try:
    from subshift import _kernels
except ImportError:
    _kernels = None

CASES = {
    "fibonacci": {"a": "ab", "b": "a"},
    "thue-morse": {"a": "ab", "b": "ba"},
    "cassaigne-nicolas": {"a": "abccc", "b": "baccc", "c": ""},
    "chacon": {"0": "0010", "1": "1"},
}


def bench_step(mod, m, pattern, repeat):
    aut = pattern_automaton(m.word(pattern), len(m.source))
    flat, offsets = _flat_images(m)
    rel = np.ascontiguousarray(aut.delta.T, dtype=np.int32)
    return min(timeit.repeat(lambda: mod.monoid_step(rel, flat, offsets), number=200, repeat=repeat)) / 200


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'case':20} {'python us':>10} {'compiled us':>12} {'speedup':>8}")
    for name, rules in CASES.items():
        m = morphism(rules)
        pattern = m.source.render(sorted(language_factors(m, 6))[0])
        py = bench_step(_kernels_py, m, pattern, args.repeat)
        if _kernels is None:
            print(f"{name:20} {py * 1e6:10.1f} {'n/a':>12} {'':>8}")
            continue
        c = bench_step(_kernels, m, pattern, args.repeat)
        print(f"{name:20} {py * 1e6:10.1f} {c * 1e6:12.1f} {py / c:8.1f}x")
    for name, rules in CASES.items():
        m = morphism(rules)
        t = min(timeit.repeat(lambda: language_factors(m, 6), number=1, repeat=args.repeat))
        print(f"factors of length 6, {name}: {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
