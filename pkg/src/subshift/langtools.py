"""Decision procedures for the language of a morphism and of its shift.

Membership questions are answered through the transition monoid of a small
deterministic automaton: for each letter we track the state map induced by
its n-th image.  These tuples of maps are eventually periodic in n, which
turns questions about all iterates into a finite computation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import CapExceeded, Morphism, apply, contains, power
from .graph import (
    build_graph,
    erasable_letters,
    classify_letters,
    growing_letters,
    languages_equal,
    stabilization_constants,
)

if os.environ.get("SUBSHIFT_PURE"):
    from ._kernels_py import monoid_step, run_word
    KERNEL = "python"
else:
    try:
        from ._kernels import monoid_step, run_word
        KERNEL = "compiled"
    except ImportError:  # extension not built
        from ._kernels_py import monoid_step, run_word
        KERNEL = "python"

__all__ = [
    "PatternAutomaton", "MonoidTrace", "ShiftLanguageConstants",
    "pattern_automaton", "avoiding_automaton", "monoid_trace",
    "member_language", "intersect_finite", "intersect_finite_graph",
    "infinitely_often_factor", "shift_language_constants",
    "member_shift_language", "languages_equal", "factors_oracle",
    "language_factors", "regular_automaton", "member_regular", "KERNEL",
]

TRACE_STEPS = 100_000
SEARCH_CAP = 10**6


@dataclass(frozen=True)
class PatternAutomaton:
    """Deterministic automaton over letter indices.

    ``delta[q, x]`` is the next state; state ``sink`` (the last row) is an
    absorbing rejecting state used by partial automata.
    """
    delta: np.ndarray
    initial: int
    final: frozenset

    @property
    def nstates(self) -> int:
        return self.delta.shape[0]

    @property
    def sink(self) -> int:
        return self.delta.shape[0] - 1


def pattern_automaton(u, nletters: int) -> PatternAutomaton:
    """Automaton for the words containing ``u``: state q = longest prefix of u
    that is a suffix of the input read so far; state |u| is absorbing."""
    u = tuple(u)
    n = len(u)
    fail = [0] * (n + 1)
    k = 0
    for i in range(1, n):
        while k and u[i] != u[k]:
            k = fail[k]
        if u[i] == u[k]:
            k += 1
        fail[i + 1] = k
    delta = np.zeros((n + 2, nletters), dtype=np.int32)
    for q in range(n + 1):
        for x in range(nletters):
            if q == n:
                delta[q, x] = n
            elif u[q] == x:
                delta[q, x] = q + 1
            else:
                delta[q, x] = delta[fail[q], x] if q else 0
    delta[n + 1, :] = n + 1
    return PatternAutomaton(delta, 0, frozenset({n}))


def avoiding_automaton(avoid: int, nletters: int) -> PatternAutomaton:
    """One live state; reading ``avoid`` falls into the sink."""
    delta = np.zeros((2, nletters), dtype=np.int32)
    delta[0, avoid] = 1
    delta[1, :] = 1
    return PatternAutomaton(delta, 0, frozenset({0}))


@dataclass(frozen=True)
class MonoidTrace:
    relations: tuple      # relations[n][a] = state map of the n-th image of a
    preperiod: int
    period: int

    def at(self, n: int) -> np.ndarray:
        if n >= len(self.relations):
            n = self.preperiod + (n - self.preperiod) % self.period
        return self.relations[n]


def _flat_images(m: Morphism):
    flat, offsets = [], [0]
    for img in m.images:
        flat.extend(img)
        offsets.append(len(flat))
    return np.asarray(flat, dtype=np.int32), np.asarray(offsets, dtype=np.int32)


def monoid_trace(m: Morphism, aut: PatternAutomaton, max_steps: int = TRACE_STEPS) -> MonoidTrace:
    if aut.delta.shape[1] != len(m.source):
        raise ValueError("automaton alphabet does not match the morphism")
    flat, offsets = _flat_images(m)
    rel = np.ascontiguousarray(aut.delta.T, dtype=np.int32)
    relations = [rel]
    seen = {rel.tobytes(): 0}
    for step in range(1, max_steps + 1):
        rel = monoid_step(rel, flat, offsets)
        key = rel.tobytes()
        if key in seen:
            first = seen[key]
            return MonoidTrace(tuple(relations), first, step - first)
        seen[key] = step
        relations.append(rel)
    raise CapExceeded("transition monoid did not repeat", steps=max_steps)


def _accepts(trace: MonoidTrace, aut: PatternAutomaton, lo: int, hi: int) -> bool:
    finals = list(aut.final)
    for k in range(lo, hi + 1):
        if np.isin(trace.at(k)[:, aut.initial], finals).any():
            return True
    return False


def member_language(m: Morphism, u) -> bool:
    """Is u a factor of some iterate image of a letter?"""
    u = tuple(u)
    if not u:
        return True
    aut = pattern_automaton(u, len(m.source))
    trace = monoid_trace(m, aut)
    return _accepts(trace, aut, 0, trace.preperiod + trace.period)


def infinitely_often_factor(m: Morphism, u) -> bool:
    """Is u a factor of the n-th image of some letter for infinitely many n?"""
    u = tuple(u)
    if not u:
        return True
    aut = pattern_automaton(u, len(m.source))
    trace = monoid_trace(m, aut)
    return _accepts(trace, aut, trace.preperiod, trace.preperiod + trace.period)


def intersect_finite_graph(m: Morphism, avoid: int) -> bool:
    """Some growing letter never reaches ``avoid``.  This is sufficient for
    infinitely many words of the language to avoid it, not necessary: with
    a->a, b->aba every a^n is a factor although b reaches itself."""
    g = build_graph(m)
    return any(avoid not in g.reach[b] for b in growing_letters(m, g))


def _edge_cycle_grows(step, gain, letters):
    """Does the functional graph ``step`` on ``letters`` have a cycle through
    a letter with ``gain``?"""
    for start in letters:
        seen = []
        x = start
        while x not in seen:
            seen.append(x)
            x = step[x]
        cyc = seen[seen.index(x):]
        if any(gain[y] for y in cyc):
            return True
    return False


def intersect_finite(m: Morphism, avoid: int) -> bool:
    """True when infinitely many words of the language avoid ``avoid``.

    The transition monoid of the automaton that dies on ``avoid`` says, for
    each letter, whether its n-th image contains the letter; the answer is
    eventually periodic in n.  Passing to a power t of m past that point,
    letters split into Y (every t-image contains ``avoid``) and N (none
    does).  Long avoiding words then come either from a growing letter of N,
    or from an unbounded avoiding prefix (suffix) of t^j(c): the map sending
    c in Y to the first (last) Y letter of t(c) must cycle through a letter
    whose image puts a non-erasable letter before (after) it.
    """
    aut = avoiding_automaton(avoid, len(m.source))
    trace = monoid_trace(m, aut)
    P = trace.period * max(1, -(-trace.preperiod // trace.period))
    growing = growing_letters(m)
    erasable = erasable_letters(m)
    t = power(m, P)
    Y = [c for c in range(len(m.source)) if avoid in t.images[c]]
    if any(c in growing for c in range(len(m.source)) if c not in Y):
        return True
    Yset = set(Y)
    first, pre_gain, last, suf_gain = {}, {}, {}, {}
    for c in Y:
        img = t.images[c]
        ys = [j for j, x in enumerate(img) if x in Yset]
        i, k = ys[0], ys[-1]
        first[c], last[c] = img[i], img[k]
        pre_gain[c] = any(x not in erasable for x in img[:i])
        suf_gain[c] = any(x not in erasable for x in img[k + 1:])
    return _edge_cycle_grows(first, pre_gain, Y) or _edge_cycle_grows(last, suf_gain, Y)


# ------------------------------------------------------ shift language

@dataclass(frozen=True)
class ShiftLanguageConstants:
    N: int
    M: int
    r: int
    K: int
    depth: int   # extension depth actually searched, (N + M + 1) * r


def shift_language_constants(m: Morphism) -> ShiftLanguageConstants:
    cls = classify_letters(m)
    st = stabilization_constants(m, cls.growing)
    n = len(m.source)
    nongrowing = [a for a in range(n) if a not in cls.growing]
    N = M = 0
    lengths = [1] * n
    for _ in range(st.i + st.p + 1):
        N = max([N] + [lengths[a] for a in nongrowing])
        M = max([M] + [lengths[a] for a in cls.erasable])
        lengths = [sum(lengths[x] for x in img) for img in m.images]
    r = 0
    lengths = [1] * n
    for _ in range(n * n + 1):
        r = max(r, sum(lengths))
        lengths = [sum(lengths[x] for x in img) for img in m.images]
    return ShiftLanguageConstants(N, M, r, (N + M) * r, (N + M + 1) * r)


def _seen_in_shift_images(m: Morphism, u, letters, max_len: int = 4096) -> bool:
    """u occurs in an iterate of a letter known to lie in the shift language."""
    frontier = {(a,) for a in letters}
    seen = set()
    while frontier:
        nxt = set()
        for w in frontier:
            if contains(w, u):
                return True
            seen.add(w)
            img = apply(m, w)
            if len(img) <= max_len and img not in seen:
                nxt.add(img)
        frontier = nxt
    return False


def member_shift_language(m: Morphism, u, shortcut: bool = True,
                          cap: int = SEARCH_CAP) -> bool:
    """Is u a factor of a two-sided point of the shift?

    ``shortcut`` enables two certified fast paths (letter types for single
    letters, occurrence in an iterate of a letter of the shift language).
    The fallback grows u by one letter on each side while the extension is
    still an infinitely-often factor.  The depth searched is one ``r`` longer
    than K: with K alone, a letter outside the shift language can pass when
    there are no non-growing letters (a->ab, b->bc, c->cc with u = a).
    """
    u = tuple(u)
    cls = classify_letters(m)
    if not u:
        return bool(cls.in_shift_language)
    if shortcut:
        if len(u) == 1:
            return u[0] in cls.in_shift_language
        if _seen_in_shift_images(m, u, sorted(cls.in_shift_language)):
            return True
    consts = shift_language_constants(m)
    if not infinitely_often_factor(m, u):
        return False
    level = {u}
    checked = 1
    n = len(m.source)
    for _ in range(consts.depth):
        nxt = set()
        for w in sorted(level):
            for x, y in product(range(n), repeat=2):
                cand = (x,) + w + (y,)
                if cand in nxt:
                    continue
                checked += 1
                if checked > cap:
                    raise CapExceeded("extension search exceeded its cap",
                                      K=consts.K, depth=consts.depth, checked=checked)
                if infinitely_often_factor(m, cand):
                    nxt.add(cand)
        if not nxt:
            return False
        level = nxt
    return True


# --------------------------------------------------------------- oracle

ORACLE_CAP = 16


def _summary(w, n):
    if len(w) < n:
        return (w, None, None, frozenset())
    return (None, w[: n - 1], w[len(w) - n + 1 :], frozenset(w[i : i + n] for i in range(len(w) - n + 1)))


def _join(s, t, n):
    if s[0] is not None and t[0] is not None:
        return _summary(s[0] + t[0], n)
    if s[0] is not None:
        mid = s[0] + t[1]
        return (None, mid[: n - 1], t[2], t[3] | {mid[i : i + n] for i in range(len(mid) - n + 1)})
    if t[0] is not None:
        mid = s[2] + t[0]
        return (None, s[1], mid[len(mid) - n + 1 :], s[3] | {mid[i : i + n] for i in range(len(mid) - n + 1)})
    mid = s[2] + t[1]
    return (None, s[1], t[2], s[3] | t[3] | {mid[i : i + n] for i in range(len(mid) - n + 1)})


def factors_oracle(m: Morphism, n: int, cap: int = ORACLE_CAP, max_steps: int = TRACE_STEPS) -> frozenset:
    """All length-n factors of all iterates of all letters, by brute force on
    per-letter summaries (short word, or border words and factor set)."""
    if n > cap:
        raise CapExceeded(f"factor length {n} above oracle cap {cap}", n=n, cap=cap)
    if n == 0:
        return frozenset({()})
    letters = range(len(m.source))
    empty = ((), None, None, frozenset())
    current = tuple(_summary((a,), n) for a in letters)
    seen = {current}
    found = set()
    for _ in range(max_steps):
        for s in current:
            found |= s[3]
        nxt = []
        for img in m.images:
            acc = empty
            for x in img:
                acc = _join(acc, current[x], n)
            nxt.append(acc)
        current = tuple(nxt)
        if current in seen:
            return frozenset(found)
        seen.add(current)
    raise CapExceeded("factor summaries did not repeat", steps=max_steps)


def language_factors(m: Morphism, n: int) -> frozenset:
    """Length-n words of the language, grown letter by letter and pruned with
    the monoid membership test."""
    level = {()}
    for _ in range(n):
        level = {w + (x,) for w in level for x in range(len(m.source))}
        level = {w for w in level if member_language(m, w)}
    return frozenset(level)


# ------------------------------------------------------ regular patterns

def regular_automaton(parts, nletters: int) -> PatternAutomaton:
    """Automaton for the words containing a factor matching ``parts``.

    ``parts`` is a sequence of ``(letters, starred)`` pairs: a starred part
    matches any word over ``letters``, an unstarred one exactly one letter
    from it.  Built by subset construction from the obvious NFA.
    """
    parts = [(frozenset(s), bool(star)) for s, star in parts]
    end = len(parts)

    def closure(states):
        out = set(states)
        stack = list(states)
        while stack:
            j = stack.pop()
            if j < end and parts[j][1] and j + 1 not in out:
                out.add(j + 1)
                stack.append(j + 1)
        return frozenset(out)

    start = closure({0})
    index = {start: 0}
    order = [start]
    rows = []
    while len(rows) < len(order):
        cur = order[len(rows)]
        row = []
        for x in range(nletters):
            if end in cur:
                nxt = cur
            else:
                step = set()
                for j in cur:
                    if j < end and x in parts[j][0]:
                        step.add(j if parts[j][1] else j + 1)
                nxt = closure(step | {0})
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row.append(index[nxt])
        rows.append(row)
    delta = np.asarray(rows, dtype=np.int32).reshape(len(order), nletters)
    final = frozenset(i for i, s in enumerate(order) if end in s)
    return PatternAutomaton(delta, 0, final)


def member_regular(m: Morphism, parts) -> bool:
    """Does some word of the language contain a factor matching ``parts``?"""
    aut = regular_automaton(parts, len(m.source))
    trace = monoid_trace(m, aut)
    return _accepts(trace, aut, 0, trace.preperiod + trace.period)
