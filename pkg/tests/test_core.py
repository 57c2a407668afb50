import pytest
from hypothesis import given
from hypothesis import strategies as st

from subshift.core import (
    Alphabet,
    AlphabetError,
    ImageTooLong,
    ParseError,
    apply,
    compose,
    derivation_tree,
    identity,
    image_lengths,
    is_conjugate,
    is_primitive,
    iterate,
    least_rotation,
    morphism,
    parse_morphism,
    power,
    power_of,
    primitive_root,
    serialize,
)

from .conftest import morphisms


def test_parse_and_render():
    m = parse_morphism("a -> ab\nb -> a  # comment\n\n")
    assert m.as_dict() == {"a": "ab", "b": "a"}
    assert m.size == 5
    assert str(m) == "a->ab, b->a"


def test_parse_empty_image():
    m = parse_morphism("a -> baab\nb ->\n")
    assert m.images[1] == ()
    assert m.is_erasing


def test_multichar_tokens():
    m = parse_morphism("x1 -> x1 x2\nx2 -> x1\n")
    assert m.source.letters == ("x1", "x2")
    assert m.render(apply(m, (0, 1))) == "x1 x2 x1"


@pytest.mark.parametrize("text, line", [
    ("a -> ab\nb ab\n", 2),
    ("a -> ab\na -> b\n", 2),
    ("a -> az\n", 1),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_morphism(text)
    assert err.value.lineno == line


def test_parse_nothing():
    with pytest.raises(ParseError):
        parse_morphism("# only a comment\n")


def test_alphabet_errors():
    with pytest.raises(AlphabetError):
        Alphabet(["a", "a"])
    with pytest.raises(AlphabetError):
        Alphabet(["a b"])
    with pytest.raises(AlphabetError):
        Alphabet("ab").index("c")


def test_image_limit():
    m = morphism({"a": "aa"})
    with pytest.raises(ImageTooLong):
        iterate(m, (0,), 30, limit=1000)


def test_word_helpers():
    assert is_primitive((0, 1)) and not is_primitive((0, 1, 0, 1)) and not is_primitive(())
    assert primitive_root((0, 1, 0, 1)) == (0, 1)
    assert least_rotation((1, 0, 0)) == (0, 0, 1)
    assert is_conjugate((0, 0, 1), (1, 0, 0)) and not is_conjugate((0, 1), (0, 0))
    assert power_of((0, 1) * 3, (0, 1)) == 3 and power_of((0, 1, 0), (0, 1)) == 0


def test_identity_and_compose():
    m = morphism({"a": "ab", "b": "a"})
    assert compose(m, identity(m.source)) == m
    assert serialize(power(m, 3)) == "a -> abaab\nb -> aba\n"


@given(morphisms(max_image=3), st.integers(0, 3), st.integers(0, 3))
def test_power_composition_law(m, j, k):
    assert power(m, j + k) == compose(power(m, j), power(m, k))


@given(morphisms(), st.integers(0, 5))
def test_image_lengths_match(m, n):
    p = power(m, n, limit=10**6)
    assert image_lengths(m, n) == [len(img) for img in p.images]


@given(morphisms(max_image=3))
def test_serialize_round_trip(m):
    assert parse_morphism(serialize(m)) == m


@given(morphisms(max_image=3), st.integers(0, 4))
def test_derivation_tree_frontier(m, n):
    for a in range(len(m.source)):
        t = derivation_tree(m, a, n)
        assert t.frontier() == iterate(m, (a,), n)
