"""Constructions that change the presentation of a shift but not the shift.

* :func:`higher_block` recodes a non-erasing morphism on its length-k
  factors;
* :func:`power_stabilize` adds delay letters so every power of the result
  generates the same shift;
* :func:`cobham_normalize` turns a pair (tau, phi) with erasing letters into
  a non-erasing endomorphism followed by a letter-to-letter map;
* :func:`return_words`, :func:`primitive_conjugate` and :func:`rauzy_refine`
  build a primitive morphism whose shift is conjugate to a minimal one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .core import (
    Alphabet,
    CapExceeded,
    Morphism,
    SubshiftError,
    apply,
    compose,
    identity,
    image_lengths,
    power,
)
from .graph import TRIVIAL, build_graph, growing_letters
from .langtools import language_factors, member_language

NORMALIZE_CAP = 64
RETURN_CAP = 200_000


class PreconditionError(SubshiftError, ValueError):
    """The input does not satisfy the hypotheses of the construction."""


# ---------------------------------------------------------- higher blocks

@dataclass(frozen=True)
class BlockSystem:
    k: int
    blocks: tuple                # blocks[i] is the word coded by letter i
    block_alphabet: Alphabet
    sigma_k: Morphism
    projection: Morphism         # block -> its first letter
    base: Morphism

    def encode(self, u) -> int:
        return self.blocks.index(tuple(u))

    def slide(self, w):
        """The k-windows of w, as block letters."""
        index = {b: i for i, b in enumerate(self.blocks)}
        k = self.k
        return tuple(index[tuple(w[i : i + k])] for i in range(len(w) - k + 1))


def higher_block(m: Morphism, k: int) -> BlockSystem:
    if m.is_erasing:
        raise PreconditionError("higher block presentation needs a non-erasing morphism")
    if k < 1:
        raise ValueError("block length must be positive")
    blocks = tuple(sorted(language_factors(m, k)))
    if not blocks:
        raise PreconditionError(f"no factors of length {k}")
    index = {b: i for i, b in enumerate(blocks)}
    tokens = Alphabet("<" + m.source.render(b).replace(" ", ".") + ">" for b in blocks)
    images = []
    for u in blocks:
        img = apply(m, u)
        s = len(m.images[u[0]])
        images.append(tuple(index[img[i : i + k]] for i in range(s)))
    sigma_k = Morphism(tokens, tokens, tuple(images))
    proj = Morphism(tokens, m.source, tuple((u[0],) for u in blocks))
    return BlockSystem(k, blocks, tokens, sigma_k, proj, m)


# ------------------------------------------------------ power stabilizing

def component_period_lcm(m: Morphism) -> int:
    g = build_graph(m)
    p = 1
    for c, per in enumerate(g.scc_period):
        if g.scc_kind[c] != TRIVIAL and per:
            p = p * per // gcd(p, per)
    return p


def power_stabilize(m: Morphism) -> Morphism:
    """Extend the alphabet with delay letters ``a~i`` (i < p) so that every
    power of the result generates the same shift as ``m``."""
    if not m.is_endomorphism:
        raise PreconditionError("power_stabilize needs an endomorphism")
    p = component_period_lcm(m)
    if p == 1:
        return m
    n = len(m.source)
    tokens = list(m.source)
    images = list(m.images)
    for a in range(n):
        for i in range(1, p):
            tokens.append(f"{m.source[a]}~{i}")
            images.append((a,) if i == 1 else (len(tokens) - 2,))
    B = Alphabet(tokens)
    return Morphism(B, B, tuple(images))


# ---------------------------------------------------------- normalization

@dataclass(frozen=True)
class Normalization:
    gamma: Morphism      # B -> C
    zeta: Morphism       # C -> C, non-erasing
    theta: Morphism      # C -> A, letter to letter
    m: int
    n: int
    seed: tuple          # the seed over B
    seed_letter: int

    @property
    def block_alphabet(self) -> Alphabet:
        return self.zeta.source

    @property
    def v(self):
        return apply(self.gamma, self.seed)


def _lengths_after(phi: Morphism, tau: Morphism, steps: int):
    """|phi(tau^j(b))| for j = 0..steps, as a list of rows."""
    base = [len(img) for img in phi.images]
    rows = [base]
    cur = base
    for _ in range(steps):
        cur = [sum(cur[x] for x in img) for img in tau.images]
        rows.append(cur)
    return rows


def _split(word, parts: int):
    """Cut ``word`` into ``parts`` non-empty pieces, longer pieces first."""
    q, r = divmod(len(word), parts)
    out, i = [], 0
    for j in range(parts):
        size = q + (1 if j < r else 0)
        out.append(word[i : i + size])
        i += size
    return out


def cobham_normalize(tau: Morphism, phi: Morphism | None = None, seed=None,
                     cap: int = NORMALIZE_CAP) -> Normalization:
    if not tau.is_endomorphism:
        raise PreconditionError("tau must be an endomorphism")
    if phi is None:
        phi = identity(tau.source)
    if phi.source != tau.source:
        raise PreconditionError("phi must start from the alphabet of tau")
    seed = tuple(seed or ())
    if not seed:
        raise PreconditionError("a non-empty seed is required")
    growing = growing_letters(tau)
    if apply(tau, seed)[: len(seed)] != seed:
        raise PreconditionError("tau is not right-prolongable on the seed")
    grow_at = [x for x in seed if x in growing]
    if not grow_at:
        raise PreconditionError("the seed has no growing letter")
    a = grow_at[0]

    rows = _lengths_after(phi, tau, 2 * cap)
    found = None
    for mm in range(cap + 1):
        lo = rows[mm]
        if lo[a] == 0:
            continue
        for nn in range(1, cap + 1):
            hi = rows[mm + nn]
            if hi[a] > lo[a] and all(x <= y for x, y in zip(lo, hi)):
                found = (mm, nn)
                break
        if found:
            break
    if found is None:
        raise CapExceeded("no (m, n) pair found within the search cap", cap=cap)
    mm, nn = found

    phi1 = compose(phi, power(tau, mm))
    tau1 = power(tau, nn)
    tokens, owner = [], []
    start = []
    for b, img in enumerate(phi1.images):
        start.append(len(tokens))
        for p in range(len(img)):
            tokens.append(f"{tau.source[b]}.{p + 1}")
            owner.append((b, p))
    C = Alphabet(tokens)
    gamma = Morphism(tau.source, C, tuple(tuple(range(start[b], start[b] + len(img)))
                                          for b, img in enumerate(phi1.images)))
    theta = Morphism(C, phi.target, tuple((phi1.images[b][p],) for b, p in owner))
    zimg = [None] * len(C)
    for b, img in enumerate(phi1.images):
        if not img:
            continue
        pieces = _split(apply(gamma, tau1.images[b]), len(img))
        for p, w in enumerate(pieces):
            zimg[start[b] + p] = w
    zeta = Morphism(C, C, tuple(zimg))
    return Normalization(gamma, zeta, theta, mm, nn, seed, a)


# ----------------------------------------------------------- return words

@dataclass(frozen=True)
class ReturnWordSystem:
    anchor: tuple              # (r, l)
    return_words: tuple
    coding: Morphism           # B -> A, letter i coding return_words[i]
    tau: Morphism              # phi o tau = sigma^power o phi
    power: int


def _occurrences(w, u):
    n = len(u)
    return [i for i in range(len(w) - n + 1) if w[i : i + n] == u]


def _anchor_power(m: Morphism, r, l, limit: int = 64) -> int:
    """Least p >= 1 with m^p(r) ending with r and m^p(l) beginning with l."""
    R, L = r, l
    for p in range(1, limit + 1):
        R, L = apply(m, R), apply(m, L)
        if R[len(R) - len(r):] == r and L[: len(l)] == l and len(R) >= len(r) and len(L) >= len(l):
            return p
    raise PreconditionError("no power of the morphism fixes the anchor")


def collect_returns(m: Morphism, r, l, cap: int = RETURN_CAP):
    """All u != e with r u l in the language, beginning and ending with rl
    and containing rl exactly twice.  Extensions of rl are explored letter by
    letter and cut at the second occurrence; uniform recurrence bounds the
    depth."""
    rl = tuple(r) + tuple(l)
    if not member_language(m, rl):
        raise PreconditionError("the anchor is not in the language")
    out = set()
    frontier = [rl]
    visited = 0
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(len(m.source)):
                t = s + (x,)
                visited += 1
                if visited > cap:
                    raise CapExceeded("return word search exceeded its cap", cap=cap)
                if not member_language(m, t):
                    continue
                if t[len(t) - len(rl):] == rl:
                    out.add(t[len(r) : len(t) - len(l)])
                else:
                    nxt.append(t)
        frontier = nxt
    return tuple(sorted(out, key=lambda u: (len(u), u)))


def _cut(word, rl, r_len):
    """Split ``word`` (of the form r u l) at the occurrences of rl."""
    occ = _occurrences(word, rl)
    return [word[i + r_len : j + r_len] for i, j in zip(occ, occ[1:])]


def return_words(m: Morphism, r, l, cap: int = RETURN_CAP) -> ReturnWordSystem:
    r, l = tuple(r), tuple(l)
    if not r or not l:
        raise PreconditionError("both sides of the anchor must be non-empty")
    p = _anchor_power(m, r, l)
    U = collect_returns(m, r, l, cap)
    if not U:
        raise PreconditionError("the anchor has no return words")
    index = {u: i for i, u in enumerate(U)}
    B = Alphabet("[" + m.source.render(u).replace(" ", ".") + "]" for u in U)
    coding = Morphism(B, m.source, U)
    mp = power(m, p)
    rl = r + l
    images = []
    for u in U:
        pieces = _cut(r + apply(mp, u) + l, rl, len(r))
        try:
            images.append(tuple(index[w] for w in pieces))
        except KeyError:
            raise SubshiftError("image of a return word left the return set") from None
    tau = Morphism(B, B, tuple(images))
    return ReturnWordSystem((r, l), U, coding, tau, p)


def _in_star(w, U) -> bool:
    ok = [False] * (len(w) + 1)
    ok[0] = True
    for i in range(len(w)):
        if ok[i]:
            for u in U:
                if w[i : i + len(u)] == u:
                    ok[i + len(u)] = True
    return ok[len(w)]


def circular_violations(U, max_len: int = 20):
    """Pairs (u, v) with uv and vu in U+ but u or v outside U*, over all
    words of U+ up to ``max_len``.  Empty exactly when U is circular at this
    scale."""
    U = [tuple(u) for u in U if u]
    words = set()
    level = {()}
    while level:
        level = {w + u for w in level for u in U if len(w) + len(u) <= max_len}
        words |= level
    bad = []
    for w in sorted(words, key=lambda t: (len(t), t)):
        for i in range(1, len(w)):
            u, v = w[:i], w[i:]
            if v + u in words and not (_in_star(u, U) and _in_star(v, U)):
                bad.append((u, v))
    return bad


# -------------------------------------------------------- primitivity

def primitive_exponent(m: Morphism):
    """Least t <= (n-1)^2 + 1 with M^t positive, or None."""
    n = len(m.source)
    M = np.zeros((n, n), dtype=bool)
    for a, img in enumerate(m.images):
        for b in img:
            M[a, b] = True
    P = M.copy()
    for t in range(1, (n - 1) ** 2 + 2):
        if P.all():
            return t
        P = (P.astype(np.int64) @ M.astype(np.int64)) > 0
    return None


def is_primitive_morphism(m: Morphism) -> bool:
    return primitive_exponent(m) is not None


# -------------------------------------------------- primitive conjugate

def _periodic_word(m: Morphism):
    from .decide import growing_periodic_orbits
    from .points import non_growing_orbits

    for w, _ in growing_periodic_orbits(m):
        return w
    for pt in non_growing_orbits(m):
        if pt.is_periodic:
            return pt.left
    raise SubshiftError("no periodic orbit found")


def primitive_conjugate(m: Morphism):
    """(tau, phi) with tau primitive and the shift of m the closure of
    phi(X(tau)) under the shift; phi is a circular code."""
    from .decide import is_minimal, is_periodic_shift
    from .points import TWO_SEED, enumerate_fixed_orbits

    if not is_minimal(m).value:
        raise PreconditionError("the shift is not minimal")
    if is_periodic_shift(m).value:
        w = _periodic_word(m)
        tau = Morphism(m.source, m.source, tuple(w for _ in m.source))
        return tau, identity(m.source)
    for d in enumerate_fixed_orbits(m):
        if d.shape == TWO_SEED and d.left and d.right:
            system = return_words(m, d.left, d.right)
            return system.tau, system.coding
    raise SubshiftError("no two-sided fixed point with two seeds")


def rauzy_refine(sigma: Morphism, phi: Morphism):
    """(zeta, theta) with zeta primitive, theta letter to letter and
    theta(X(zeta)) = the closure of phi(X(sigma))."""
    if not is_primitive_morphism(sigma):
        raise PreconditionError("sigma must be primitive")
    if phi.is_erasing:
        raise PreconditionError("phi must be non-erasing")
    if len(sigma.source) == 1 and len(sigma.images[0]) == 1:
        raise PreconditionError("the shift of a one-letter identity is empty")
    need = [len(img) for img in phi.images]
    s = 1
    while True:
        lens = image_lengths(sigma, s)
        if all(x >= y for x, y in zip(lens, need)):
            break
        s += 1
    sp = power(sigma, s)
    tokens, start = [], []
    for b, img in enumerate(phi.images):
        start.append(len(tokens))
        tokens.extend(f"{sigma.source[b]}.{p + 1}" for p in range(len(img)))
    C = Alphabet(tokens)
    gamma = Morphism(sigma.source, C, tuple(tuple(range(start[b], start[b] + len(img)))
                                            for b, img in enumerate(phi.images)))
    theta = Morphism(C, phi.target, tuple((img[p],) for img in phi.images for p in range(len(img))))
    zimg = []
    for b, img in enumerate(phi.images):
        full = sp.images[b]
        k = len(img)
        for p in range(k):
            part = full[p : p + 1] if p < k - 1 else full[k - 1 :]
            zimg.append(apply(gamma, part))
    zeta = Morphism(C, C, tuple(zimg))
    return zeta, theta
