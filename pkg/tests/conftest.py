from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from subshift.core import Alphabet, Morphism, load_morphism

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")


def corpus(name):
    return load_morphism(CORPUS / f"{name}.morph")


def corpus_names():
    return sorted(p.stem for p in CORPUS.glob("*.morph"))


@st.composite
def morphisms(draw, max_letters=4, max_image=4, min_image=0):
    n = draw(st.integers(1, max_letters))
    A = Alphabet("abcd"[:n])
    images = tuple(
        tuple(draw(st.lists(st.integers(0, n - 1), min_size=min_image, max_size=max_image)))
        for _ in range(n)
    )
    return Morphism(A, A, images)


@pytest.fixture
def fib():
    return corpus("fibonacci")


@pytest.fixture
def tm():
    return corpus("thue_morse")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
