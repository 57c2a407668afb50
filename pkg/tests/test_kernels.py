import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from subshift import _kernels_py

compiled = pytest.importorskip("subshift._kernels")


@st.composite
def relations(draw):
    n = draw(st.integers(1, 4))
    width = draw(st.integers(1, 6))
    rel = np.array(draw(st.lists(st.lists(st.integers(0, width - 1), min_size=width, max_size=width),
                                 min_size=n, max_size=n)), dtype=np.int32)
    images = draw(st.lists(st.lists(st.integers(0, n - 1), max_size=5), min_size=n, max_size=n))
    flat = np.array([x for img in images for x in img], dtype=np.int32)
    offsets = np.cumsum([0] + [len(img) for img in images]).astype(np.int32)
    return rel, flat, offsets


@given(relations())
def test_monoid_step_agrees(args):
    rel, flat, offsets = args
    assert np.array_equal(compiled.monoid_step(rel, flat, offsets),
                          _kernels_py.monoid_step(rel, flat, offsets))


@given(relations(), st.lists(st.integers(0, 3), max_size=12), st.integers(0, 5))
def test_run_word_agrees(args, word, start):
    rel = args[0]
    delta = np.ascontiguousarray(rel.T)       # states x letters
    word = np.array([x % delta.shape[1] for x in word], dtype=np.int32)
    start %= delta.shape[0]
    assert compiled.run_word(delta, word, start) == _kernels_py.run_word(delta, word, start)
