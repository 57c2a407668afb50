"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def monoid_step(rel, flat, offsets):
    """Compose letter relations along each image.

    ``rel[a]`` maps automaton states to states (the last state is a sink).
    Row ``a`` of the result is the relation of the word
    ``flat[offsets[a]:offsets[a + 1]]``.
    """
    n, width = rel.shape
    out = np.empty_like(rel)
    ident = np.arange(width, dtype=rel.dtype)
    for a in range(n):
        r = ident
        for y in flat[offsets[a]:offsets[a + 1]]:
            r = rel[y][r]
        out[a] = r
    return out


def run_word(delta, word, state):
    """Run a deterministic automaton (rows indexed by state) on a word."""
    for x in word:
        state = delta[state, x]
    return int(state)
