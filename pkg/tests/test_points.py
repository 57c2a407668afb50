import itertools

import pytest
from hypothesis import assume, given, settings

from subshift.core import CapExceeded, apply, morphism, power
from subshift.langtools import member_language
from subshift.points import (
    EVENTUALLY_PERIODIC,
    LETTER,
    TWO_SEED,
    QuasiFixed,
    descriptor_json,
    enumerate_fixed_orbits,
    enumerate_quasi_fixed_orbits,
    ep_point,
    expand,
    non_growing_orbits,
    origin_window,
)

from .conftest import corpus, morphisms


def windows(m, descs, r=6):
    return [origin_window(d, r, r, m.source) for d in descs]


# --------------------------------------------------------------- goldens

@pytest.mark.parametrize("rules,expected", [
    ({"a": "ab", "b": "a"}, ["aababa·abaaba", "aabaab·abaaba"]),
    ({"a": "abba", "b": "baab"},
     ["ababba·abbaba", "ababba·baabab", "babaab·abbaba", "babaab·baabab"]),
    ({"a": "abb", "b": "b"}, ["bbbbbb·bbbbbb"]),
    ({"a": "a", "b": "bab"}, ["bababa·bababa"]),
    ({"a": "baab", "b": ""}, ["abbaab·baabba"]),
    ({"a": "a", "b": "baabab"}, ["aababa·baabab", "ababaa·baabab"]),
    ({"a": "aab", "b": "b"}, ["bbbbbb·bbbbbb", "bbbbbb·aabaab"]),
    ({"a": "bc", "b": "bd", "c": "ec", "d": "d", "e": "e"},
     ["dddddd·dddddd", "dddddd·ddddee", "eeeeee·eeeeee"]),
])
def test_fixed_point_goldens(rules, expected):
    m = morphism(rules)
    found = enumerate_fixed_orbits(m)
    assert found.complete
    assert windows(m, found) == expected


def test_fixed_point_descriptors(fib):
    found = enumerate_fixed_orbits(fib)
    assert found.power_bound == 2
    assert [descriptor_json(d, fib.source) for d in found] == [
        {"shape": TWO_SEED, "power": 2, "left": "a", "right": "a"},
        {"shape": TWO_SEED, "power": 2, "left": "b", "right": "a"},
    ]


def test_erasing_fixed_points_need_square():
    m = morphism({"a": "abccc", "b": "baccc", "c": ""})
    found = enumerate_fixed_orbits(m)
    assert found.power_bound == 2 and len(found) == 4
    assert {d.power for d in found} == {2}


def test_letter_quasi_fixed_point():
    m = morphism({"a": "bac", "b": "b", "c": "c"})
    quasi = [q for q in enumerate_quasi_fixed_orbits(m) if q.shape != "fixed"]
    assert [descriptor_json(q, m.source) for q in quasi] == [
        {"shape": LETTER, "power": 1, "shift": -1, "letter": "a", "u": "b", "v": "c"}]
    assert windows(m, quasi) == ["bbbbbb·accccc"]


def test_non_growing_orbits():
    m = morphism({"a": "bc", "b": "bd", "c": "ec", "d": "d", "e": "e"})
    pts = non_growing_orbits(m)
    assert [(m.render(p.left), m.render(p.center), m.render(p.right)) for p in pts] == [
        ("d", "", "d"), ("d", "", "e"), ("e", "", "e")]
    assert non_growing_orbits(corpus("fibonacci")) == []


def test_empty_shift_has_no_points():
    assert list(enumerate_fixed_orbits(corpus("swap"))) == []
    assert list(enumerate_fixed_orbits(corpus("empty"))) == []


def test_ep_point_canonical_form():
    p = ep_point((0, 1), (0, 1, 0), (1, 0))
    assert (p.left, p.center, p.right) == ((0, 1), (), (0, 1))
    assert p.is_periodic and p.period() == 2
    q = ep_point((1,), (0, 0, 2), (2, 2))
    assert (q.left, q.center, q.right) == ((1,), (0, 0), (2,))
    assert q.window(-2, 4) == (1, 1, 0, 0, 2, 2)


# ------------------------------------------------------------ invariance

def check_invariant(m, d, r=10):
    """m^k(x) = S^shift(x) read on a window around the origin."""
    k = d.power
    s = d.shift if isinstance(d, QuasiFixed) else 0
    mk = power(m, k)
    left = apply(mk, expand(d, r + abs(s), 0))
    right = apply(mk, expand(d, 0, r + abs(s)))
    a = min(len(left), r)
    b = min(len(right), r)
    if a <= abs(s) or b <= abs(s):
        return False
    image = left[len(left) - a:] + right[:b]
    assert image == expand(d, a - s, b + s)
    return True


def orbits_of(m, cap=400):
    try:
        return enumerate_fixed_orbits(m, cap=cap), enumerate_quasi_fixed_orbits(m, cap=cap)
    except CapExceeded:
        return None


@pytest.mark.parametrize("name", ["fibonacci", "thue_morse", "abb_b", "a_bab", "baab",
                                  "bab_b", "aab_b", "ab_bc_cc", "erasing_cbd", "chacon"])
def test_corpus_points_are_invariant(name):
    m = corpus(name)
    fixed, quasi = orbits_of(m, cap=2000)
    checked = 0
    for d in list(fixed) + list(quasi):
        if isinstance(d, QuasiFixed) or d.shape != EVENTUALLY_PERIODIC:
            q = d if isinstance(d, QuasiFixed) else QuasiFixed("fixed", d.power, fixed=d)
            checked += check_invariant(m, q)
    assert checked or all(getattr(d, "shape", None) == EVENTUALLY_PERIODIC for d in fixed)


@settings(max_examples=200)
@given(morphisms(max_letters=3, max_image=3))
def test_random_points_are_invariant(m):
    found = orbits_of(m)
    assume(found is not None)
    for d in found[1]:
        if d.shape == "fixed" and d.fixed.shape == EVENTUALLY_PERIODIC:
            continue
        check_invariant(m, d, r=8)


# --------------------------------------------------------------- oracle

def limit_window(m, k, u, v, r):
    """x[-r, r) for the limit of m^(k n)(u) . m^(k n)(v), or None if a side
    does not grow."""
    mk = power(m, k)
    left, right = u, v
    for _ in range(40):
        if len(left) >= r and len(right) >= r:
            return left[len(left) - r:] + right[:r]
        left, right = apply(mk, left), apply(mk, right)
    return None


def brute_force_fixed(m, ks, longest=3, r=8):
    """Windows of points m^k(x) = x obtained from words u.v with uv in the
    language, u a suffix of m^k(u) and v a prefix of m^k(v)."""
    n = len(m.source)
    short = [w for l in range(1, longest + 1) for w in itertools.product(range(n), repeat=l)]
    out = set()
    for k in ks:
        mk = power(m, k)
        for u in short:
            iu = apply(mk, u)
            if iu[len(iu) - len(u):] != u or len(iu) <= len(u):
                continue
            for v in short:
                iv = apply(mk, v)
                if iv[:len(v)] != v or len(iv) <= len(v) or not member_language(m, u + v):
                    continue
                w = limit_window(m, k, u, v, r)
                if w is not None:
                    out.add(w)
    return out


def reported_contains(found, w, reach=60):
    hay = [expand(d, reach, reach) for d in found]
    L = len(w)
    return any(h[i:i + L] == w for h in hay for i in range(len(h) - L + 1))


@pytest.mark.parametrize("name", ["fibonacci", "thue_morse", "a_bab", "baab", "bab_b", "aab_b"])
def test_fixed_points_cover_brute_force(name):
    m = corpus(name)
    found = enumerate_fixed_orbits(m)
    K = found.power_bound
    for w in brute_force_fixed(m, range(1, 2 * K + 1)):
        assert reported_contains(found, w), m.render(w)


@settings(max_examples=200)
@given(morphisms(max_letters=3, max_image=3, min_image=1))
def test_random_fixed_points_cover_brute_force(m):
    found = orbits_of(m)
    assume(found is not None and found[0].complete)
    found = found[0]
    for w in brute_force_fixed(m, range(1, (found.power_bound or 1) + 1), longest=2):
        assert reported_contains(found, w), m.render(w)
