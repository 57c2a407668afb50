import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from subshift.core import Alphabet, CapExceeded, apply, compose, iterate, morphism, power
from subshift.graph import growing_letters
from subshift.langtools import factors_oracle, language_factors
from subshift.transforms import (
    PreconditionError,
    circular_violations,
    cobham_normalize,
    collect_returns,
    higher_block,
    is_primitive_morphism,
    power_stabilize,
    primitive_conjugate,
    primitive_exponent,
    rauzy_refine,
    return_words,
)

from .conftest import corpus, morphisms


def rules_of(m):
    return {m.source[a]: m.target.render(img) for a, img in enumerate(m.images)}


def same_up_to_renaming(m, rules):
    """m equals the letter-level rules after some bijection of letters."""
    letters = sorted(rules)
    if len(letters) != len(m.source):
        return False
    for perm in itertools.permutations(range(len(m.source))):
        name = dict(zip(perm, letters))
        if all("".join(name[x] for x in m.images[a]) == rules[name[a]] for a in range(len(m.source))):
            return True
    return False


# ----------------------------------------------------------- higher block

def test_fibonacci_two_blocks(fib):
    bs = higher_block(fib, 2)
    assert [fib.render(b) for b in bs.blocks] == ["aa", "ab", "ba"]
    assert same_up_to_renaming(bs.sigma_k, {"x": "yz", "y": "yz", "z": "x"})


def test_thue_morse_two_blocks(tm):
    bs = higher_block(tm, 2)
    assert str(bs.sigma_k) == "<aa>-><ab> <ba>, <ab>-><ab> <bb>, <ba>-><ba> <aa>, <bb>-><ba> <ab>"


def test_block_preconditions(fib):
    with pytest.raises(PreconditionError):
        higher_block(corpus("baab"), 2)
    with pytest.raises(ValueError):
        higher_block(fib, 0)


@settings(max_examples=200)
@given(morphisms(max_letters=4, max_image=4, min_image=1), st.integers(1, 4), st.integers(1, 4))
def test_block_diagram_commutes(m, k, n):
    try:
        bs = higher_block(m, k)
    except (PreconditionError, CapExceeded):
        assume(False)
    mk = power(bs.sigma_k, n)
    mn = power(m, n)
    for b, u in enumerate(bs.blocks):
        # the projection intertwines the two morphisms
        assert apply(bs.projection, mk.images[b]) == mn.images[u[0]]
        # blocks of sigma^n(u) starting inside sigma^n(u[0])
        assert mk.images[b] == bs.slide(apply(mn, u))[: len(mn.images[u[0]])]


@pytest.mark.parametrize("name", ["fibonacci", "thue_morse", "chacon", "a_bab"])
def test_block_factors_correspond(name):
    m = corpus(name)
    for k in (2, 3):
        bs = higher_block(m, k)
        for n in range(1, 5):
            slid = {bs.slide(w) for w in factors_oracle(m, n + k - 1)}
            assert language_factors(bs.sigma_k, n) == slid


# ---------------------------------------------------------- power stabilize

def test_power_stabilize_examples(fib):
    assert power_stabilize(fib) is fib
    s = power_stabilize(corpus("swap"))
    assert rules_of(s) == {"a": "b", "b": "a", "a~1": "a", "b~1": "b"}
    m = morphism({"a": "bc", "b": "a", "c": "a", "d": "d"})
    s = power_stabilize(m)
    assert list(s.source)[:4] == ["a", "b", "c", "d"] and len(s.source) == 8


# ---------------------------------------------------------- normalization

def check_normalization(tau, phi, norm, steps=6):
    mm, nn = norm.m, norm.n
    assert compose(norm.theta, norm.gamma) == compose(phi, power(tau, mm))
    assert compose(norm.zeta, norm.gamma) == compose(norm.gamma, power(tau, nn))
    assert not norm.zeta.is_erasing
    assert all(len(img) == 1 for img in norm.theta.images)
    v = norm.v
    assert v
    w = v
    for N in range(steps):
        target = apply(phi, iterate(tau, norm.seed, mm + nn * N))
        got = apply(norm.theta, w)
        assert target[: len(got)] == got
        w = apply(norm.zeta, w)


def test_cobham_worked_example():
    tau = corpus("cobham_example")
    norm = cobham_normalize(tau, seed=tau.word("a"))
    assert (norm.m, norm.n) == (1, 1)
    assert rules_of(norm.theta) == {"a.1": "a", "a.2": "b", "a.3": "c", "b.1": "a", "b.2": "c"}
    assert rules_of(norm.zeta) == {"a.1": "a.1 a.2", "a.2": "a.3 b.1", "a.3": "b.2",
                                   "b.1": "a.1 a.2", "b.2": "a.3"}
    check_normalization(tau, morphism({"a": "a", "b": "b", "c": "c"}), norm)


def test_cobham_with_coding():
    tau = corpus("cassaigne_nicolas")
    phi = morphism({"a": "x", "b": "y", "c": "z z"}, target=Alphabet("xyz"))
    norm = cobham_normalize(tau, phi, seed=tau.word("a"))
    check_normalization(tau, phi, norm)


def test_cobham_preconditions(fib):
    with pytest.raises(PreconditionError):
        cobham_normalize(fib, seed=fib.word("b"))
    with pytest.raises(PreconditionError):
        cobham_normalize(morphism({"a": "ab", "b": "b"}), seed=())


@settings(max_examples=200)
@given(morphisms(max_letters=4, max_image=4), st.integers(0, 3))
def test_cobham_invariants(tau, a):
    a %= len(tau.source)
    assume(tau.images[a][:1] == (a,) and a in growing_letters(tau))
    try:
        norm = cobham_normalize(tau, seed=(a,))
    except CapExceeded:
        assume(False)
    check_normalization(tau, morphism({x: x for x in tau.source}), norm, steps=4)


# ----------------------------------------------------------- return words

def returns_from_point(m, r, l, reach=400):
    """Pieces between consecutive occurrences of rl in a long central
    window of the fixed point with seeds r . l."""
    p = 1
    R, L = r, l
    while True:
        R, L = apply(m, R), apply(m, L)
        if R[len(R) - len(r):] == r and L[: len(l)] == l:
            break
        p += 1
    mp = power(m, p)
    R, L = r, l
    while len(R) < reach or len(L) < reach:
        R, L = apply(mp, R), apply(mp, L)
    w = R[len(R) - reach:] + L[:reach]
    rl = r + l
    occ = [i for i in range(len(w) - len(rl) + 1) if w[i:i + len(rl)] == rl]
    return {w[i + len(r): j + len(r)] for i, j in zip(occ, occ[1:])}


@pytest.mark.parametrize("name,r,l,expected,p", [
    ("fibonacci", "a", "a", ["aba", "ababa"], 2),
    ("thue_morse", "a", "a", ["abba", "ababba", "abbaba", "ababbaba"], 2),
    ("a_bab", "ba", "b", ["ba"], 1),
    ("a_bab", "b", "a", ["ab"], 1),
])
def test_return_word_goldens(name, r, l, expected, p):
    m = corpus(name)
    rs = return_words(m, m.word(r), m.word(l))
    assert [m.render(u) for u in rs.return_words] == expected
    assert rs.power == p
    if all(x in growing_letters(m) for x in m.word(r) + m.word(l)):
        assert set(rs.return_words) == returns_from_point(m, m.word(r), m.word(l))
    assert circular_violations(rs.return_words) == []
    mp = power(m, p)
    for b, u in enumerate(rs.return_words):
        assert apply(rs.coding, rs.tau.images[b]) == apply(mp, u)


def test_fibonacci_return_morphism(fib):
    rs = return_words(fib, (0,), (0,))
    assert str(rs.tau) == "[aba]->[aba] [ababa], [ababa]->[aba] [ababa] [ababa]"


@pytest.mark.parametrize("name", ["chacon", "cassaigne_nicolas"])
def test_return_words_match_point(name):
    m = corpus(name)
    from subshift.points import TWO_SEED, enumerate_fixed_orbits
    d = next(d for d in enumerate_fixed_orbits(m) if d.shape == TWO_SEED)
    U = collect_returns(m, d.left, d.right)
    assert set(U) == returns_from_point(m, d.left, d.right, reach=3000)
    assert circular_violations(U, max_len=16) == []


def test_circular_violations():
    assert circular_violations([(0,), (1,)], max_len=8) == []
    # ab.a = a.ba with a not a codeword
    assert circular_violations([(0, 1), (1, 0)], max_len=4)


# ------------------------------------------------------------- primitive

def test_primitive_exponents(fib, tm):
    assert primitive_exponent(fib) == 2
    assert primitive_exponent(tm) == 1
    assert primitive_exponent(corpus("abb_b")) is None
    assert not is_primitive_morphism(corpus("cassaigne_nicolas"))
    assert not is_primitive_morphism(corpus("chacon"))
    assert is_primitive_morphism(corpus("ab_ac_ac"))


@settings(max_examples=200)
@given(morphisms(max_letters=4, max_image=4))
def test_primitive_exponent_is_least(m):
    t = primitive_exponent(m)
    n = len(m.source)
    positive = [all(set(img) == set(range(n)) for img in power(m, j).images) for j in range(1, (n - 1) ** 2 + 2)]
    if t is None:
        assert not any(positive)
    else:
        assert positive[t - 1] and not any(positive[: t - 1])


def test_periodic_primitive_conjugate():
    m = corpus("a_bab")
    tau, phi = primitive_conjugate(m)
    assert rules_of(tau) == {"a": "ab", "b": "ab"}
    assert rules_of(phi) == {"a": "a", "b": "b"}
    zeta, theta = rauzy_refine(tau, phi)
    assert rules_of(zeta) == {"a.1": "a.1 b.1", "b.1": "a.1 b.1"}


def test_primitive_conjugate_requires_minimal():
    with pytest.raises(PreconditionError):
        primitive_conjugate(corpus("ab_bc_cc"))


@pytest.mark.parametrize("name,longest", [
    ("fibonacci", 7), ("thue_morse", 7), ("chacon", 7), ("a_bab", 7), ("cassaigne_nicolas", 5)])
def test_primitive_conjugate_generates_shift(name, longest):
    m = corpus(name)
    tau, phi = primitive_conjugate(m)
    assert is_primitive_morphism(tau)
    zeta, theta = rauzy_refine(tau, phi)
    assert is_primitive_morphism(zeta)
    assert all(len(img) == 1 for img in theta.images)
    for n in range(1, longest + 1):
        got = {apply(theta, w) for w in language_factors(zeta, n)}
        assert got == factors_oracle(m, n)
