"""Finite descriptions of infinite points of a substitution shift.

Three kinds of descriptor are produced here:

* :class:`EPPoint`, an eventually periodic two-sided point ``^w u . W v^w``;
* :class:`FixedPoint`, a two-sided fixed point of a power of the morphism,
  whose halves are either eventually periodic or limits of a seed word;
* :class:`QuasiFixed`, a point whose orbit is stable under a power.

Everything is computed on letter indices; descriptors keep a reference to
their morphism so they can be expanded on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .core import (
    CapExceeded,
    Morphism,
    apply,
    iterate,
    least_rotation,
    power,
    power_of,
    primitive_root,
)
from .graph import build_graph, classify_letters, stabilization_constants, CYCLE
from .langtools import member_language, member_regular

EVENTUALLY_PERIODIC = "eventually-periodic"
PERIODIC_SEED = "periodic-seed"
SEED_PERIODIC = "seed-periodic"
TWO_SEED = "two-seed"

FIXED, LETTER, ROTATING = "fixed", "letter", "rotating"

BFS_CAP = 2000
WORD_CAP = 64


def _lcm(a, b):
    return a * b // gcd(a, b)


# ------------------------------------------------------------ analysis

@dataclass(frozen=True)
class _Info:
    n: int
    growing: frozenset
    erasable: frozenset
    mex: int
    i: int
    p: int


@lru_cache(maxsize=256)
def _info(m: Morphism) -> _Info:
    cls = classify_letters(m)
    st = stabilization_constants(m, cls.growing)
    return _Info(len(m.source), cls.growing, cls.erasable, cls.mex, st.i, st.p)


def _nongrowing_image(m: Morphism, w, k: int):
    """m^k(w) for a word of non-growing letters, using eventual periodicity."""
    info = _info(m)
    if k > info.i + info.p:
        k = info.i + (k - info.i) % info.p
    for _ in range(k):
        w = apply(m, w)
    return w


@lru_cache(maxsize=256)
def _length_table(m: Morphism, n: int):
    rows = [tuple([1] * len(m.source))]
    for _ in range(n):
        prev = rows[-1]
        rows.append(tuple(sum(prev[x] for x in img) for img in m.images))
    return tuple(rows)


def image_prefix(m: Morphism, w, n: int, size: int):
    """The first ``size`` letters of m^n(w), without building the image."""
    table = _length_table(m, n)
    images = m.images
    out = []

    def walk(x, j):
        if j == 0:
            out.append(x)
            return
        for y in images[x]:
            if len(out) >= size:
                return
            if table[j - 1][y]:
                walk(y, j - 1)

    for x in w:
        if len(out) >= size:
            break
        walk(x, n)
    return tuple(out[:size])


def image_suffix(m: Morphism, w, n: int, size: int):
    """The last ``size`` letters of m^n(w)."""
    table = _length_table(m, n)
    images = m.images
    out = []

    def walk(x, j):
        if j == 0:
            out.append(x)
            return
        for y in reversed(images[x]):
            if len(out) >= size:
                return
            if table[j - 1][y]:
                walk(y, j - 1)

    for x in reversed(w):
        if len(out) >= size:
            break
        walk(x, n)
    out = out[:size]
    out.reverse()
    return tuple(out)


# ------------------------------------------------------ eventually periodic

@dataclass(frozen=True)
class EPPoint:
    """The point ``... u u W v v ...`` with coordinate 0 at ``W[origin]``
    (origin may fall outside W, into the periodic tails)."""
    left: tuple
    center: tuple
    right: tuple
    origin: int = 0

    def at(self, t: int) -> int:
        j = t + self.origin
        c = self.center
        if 0 <= j < len(c):
            return c[j]
        if j >= len(c):
            return self.right[(j - len(c)) % len(self.right)]
        return self.left[j % len(self.left)]

    def window(self, lo: int, hi: int):
        return tuple(self.at(t) for t in range(lo, hi))

    @property
    def key(self):
        return (self.left, self.center, self.right)

    @property
    def is_periodic(self) -> bool:
        return not self.center and self.left == self.right

    def period(self):
        return len(self.left) if self.is_periodic else None


def ep_point(u, w, v, origin: int = 0) -> EPPoint:
    """Canonical form of ``^w u . w v^w`` (origin counted from the start of w):
    least-rotation primitive tails and the shortest possible center."""
    u, w, v = tuple(u), tuple(w), tuple(v)
    if not u or not v:
        raise ValueError("both periodic tails must be non-empty")
    U = least_rotation(primitive_root(u))
    V = least_rotation(primitive_root(v))
    span = len(w) + len(u) + len(v) + len(U) + len(V)
    nl = span // len(u) + 3
    nr = span // len(v) + 3
    S = u * nl + w + v * nr
    base = len(u) * nl
    # longest prefix of S that is a suffix of U^k ending on a full block
    q0 = 0
    for r in range(len(U)):
        j = 0
        while j < len(S) and S[j] == U[(j - r) % len(U)]:
            j += 1
        q = j - ((j - r) % len(U))
        q0 = max(q0, q)
    # shortest suffix of S that is a prefix of V^k starting on a full block
    p0 = len(S)
    for r in range(len(V)):
        j = len(S)
        while j > 0 and S[j - 1] == V[(j - 1 - r) % len(V)]:
            j -= 1
        p = j + ((r - j) % len(V))
        p0 = min(p0, p)
    if q0 > p0:
        q0 -= len(U) * (-(-(q0 - p0) // len(U)))
    center = S[q0:p0]
    origin = base + origin - q0
    if not center and U == V:
        origin %= len(U)
    return EPPoint(U, center, V, origin)


def periodic_point(w, origin: int = 0) -> EPPoint:
    return ep_point(w, (), w, origin)


# ------------------------------------------------------------ fixed points

@dataclass(frozen=True)
class FixedPoint:
    """A two-sided fixed point of ``morphism ** power``.

    ``shape`` selects how the halves are read:

    * eventually-periodic: ``left``/``right`` are period words around
      ``center``; ``origin`` indexes coordinate 0 within the center;
    * periodic-seed: negative half ``^w left . center``, positive half the
      limit of iterating on the seed ``right``;
    * seed-periodic: negative half the left limit of ``left``, positive half
      ``center . right^w``;
    * two-seed: both halves are limits of their seeds.
    """
    shape: str
    power: int
    left: tuple
    center: tuple
    right: tuple
    origin: int = 0
    morphism: Morphism = field(default=None, compare=False, repr=False, hash=False)

    def ep(self) -> EPPoint:
        return EPPoint(self.left, self.center, self.right, self.origin)

    def words(self):
        return (self.left, self.center, self.right)

    def part_length(self) -> int:
        return len(self.left) + len(self.center) + len(self.right)


def _steps_to_reach(m, seed, k, size):
    """Least n with |m^(k n)(seed)| >= size."""
    n = 0
    while sum(_length_table(m, k * n)[k * n][x] for x in seed) < size:
        n += 1
        if n > 4096:
            raise CapExceeded("seed does not grow", seed=seed)
    return k * n


def _seed_right(m, seed, k, size):
    if size <= len(seed):
        return seed[:size]
    return image_prefix(m, seed, _steps_to_reach(m, seed, k, size), size)


def _seed_left(m, seed, k, size):
    if size <= len(seed):
        return seed[len(seed) - size :]
    return image_suffix(m, seed, _steps_to_reach(m, seed, k, size), size)


def _negative_half(d, size):
    if d.shape in (EVENTUALLY_PERIODIC,):
        raise AssertionError
    if d.shape == PERIODIC_SEED:
        tail = d.left * (size // len(d.left) + 1) + d.center
        return tail[len(tail) - size :]
    return _seed_left(d.morphism, d.left, d.power, size)


def _positive_half(d, size):
    if d.shape == SEED_PERIODIC:
        head = d.center + d.right * (size // len(d.right) + 1)
        return head[:size]
    return _seed_right(d.morphism, d.right, d.power, size)


# ---------------------------------------------------------- quasi-fixed

@dataclass(frozen=True)
class QuasiFixed:
    """A point x with m^power(x) = S^shift(x).

    * fixed: ``fixed`` holds the underlying fixed point, shift 0;
    * letter: the bilateral expansion ``... m^k(u) u . a v m^k(v) ...`` of
      ``letter`` with ``m^power(a) = u a v``;
    * rotating: ``(u v)^w`` with ``m^power(u v) = v u``.
    """
    shape: str
    power: int
    fixed: FixedPoint | None = None
    letter: int | None = None
    u: tuple = ()
    v: tuple = ()
    morphism: Morphism = field(default=None, compare=False, repr=False, hash=False)

    @property
    def shift(self) -> int:
        if self.shape == LETTER:
            return -len(self.u)
        if self.shape == ROTATING:
            return len(self.u)
        return 0


# --------------------------------------------------------------- expand

def expand(d, left: int, right: int, cap: int = 10**6):
    """The factor x[-left, right) of the described point."""
    if left < 0 or right < 0 or left + right > cap:
        raise CapExceeded("window outside the expansion cap", cap=cap)
    if isinstance(d, EPPoint):
        return d.window(-left, right)
    if isinstance(d, QuasiFixed):
        return _expand_quasi(d, left, right)
    if d.shape == EVENTUALLY_PERIODIC:
        return d.ep().window(-left, right)
    return _negative_half(d, left) + _positive_half(d, right)


def _expand_quasi(d, left, right):
    m = d.morphism
    if d.shape == FIXED:
        return expand(d.fixed, left, right)
    if d.shape == ROTATING:
        return EPPoint(d.u + d.v, (), d.u + d.v, 0).window(-left, right)
    k = d.power
    neg, j = [], 0
    while len(neg) < left:
        if not d.u:
            raise CapExceeded("left side is empty")
        need = left - len(neg)
        part = image_suffix(m, d.u, k * j, need)
        neg = list(part) + neg
        j += 1
    pos, j = [d.letter], 0
    while len(pos) < right:
        if not d.v:
            raise CapExceeded("right side is empty")
        need = right - len(pos)
        pos.extend(image_prefix(m, d.v, k * j, need))
        j += 1
    neg = neg[len(neg) - left :] if left else []
    return tuple(neg) + tuple(pos[:right])


def origin_window(d, left: int, right: int, alphabet=None) -> str:
    """Expansion printed with a middle dot at the origin."""
    w = expand(d, left, right)
    render = alphabet.render if alphabet is not None else (lambda x: " ".join(map(str, x)))
    return render(w[:left]) + "·" + render(w[left:])


# ------------------------------------------------------ finite fixed words

def finite_fixed_points(m: Morphism):
    """Letters a with m(a) = u a v for erasable u, v, and the fixed words
    m^Card(A)(a) they generate."""
    info = _info(m)
    letters = set()
    for a, img in enumerate(m.images):
        for j, x in enumerate(img):
            if x == a and all(y in info.erasable for y in img[:j] + img[j + 1 :]):
                letters.add(a)
                break
    words = {apply(power(m, len(m.source)), (a,)) for a in letters}
    return frozenset(letters), frozenset(words)


def _fixed_generators(m: Morphism, k: int):
    """Non-empty generators of the words fixed by m^k (all non-growing)."""
    info = _info(m)
    gens = set()
    for a in range(info.n):
        if a in info.growing or a in info.erasable:
            continue
        img = _nongrowing_image(m, (a,), k)
        for j, x in enumerate(img):
            if x == a and all(y in info.erasable for y in img[:j] + img[j + 1 :]):
                word = _nongrowing_image(m, (a,), k * info.n)
                if word:
                    gens.add(word)
                break
    return sorted(gens, key=lambda w: (len(w), w))


def erasable_words(m: Morphism):
    info = _info(m)
    letters = sorted(info.erasable)
    found = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for x in letters:
                cand = w + (x,)
                if cand not in found and member_language(m, cand):
                    found.add(cand)
                    nxt.append(cand)
        frontier = nxt
    return frozenset(found)


# ------------------------------------------------------ non-growing orbits

def _gap_power(m: Morphism) -> int:
    info = _info(m)
    P = info.p
    while P < max(info.i, 1):
        P += info.p
    return P


@lru_cache(maxsize=128)
def _border_data(m: Morphism, steps: int):
    """For each growing letter c: first and last growing letters of m^steps(c)
    and the non-growing words before and after them."""
    info = _info(m)
    growing = info.growing
    first, last = {}, {}
    for c in growing:
        pre, g = (), c
        suf, h = (), c
        for _ in range(steps):
            img = m.images[g]
            j = next(t for t, x in enumerate(img) if x in growing)
            pre = apply(m, pre) + img[:j]
            g = img[j]
            img = m.images[h]
            j = max(t for t, x in enumerate(img) if x in growing)
            suf = img[j + 1 :] + apply(m, suf)
            h = img[j]
        first[c] = (g, pre)
        last[c] = (h, suf)
    return first, last


def _gaps(word, growing):
    """(left growing letter or None, gap, right growing letter or None)."""
    out = []
    prev, start = None, 0
    for j, x in enumerate(word):
        if x in growing:
            out.append((prev, word[start:j], x))
            prev, start = x, j + 1
    if prev is None:
        return []
    out.append((prev, word[start:], None))
    return out


def _internal_gaps(m: Morphism, c: int, steps: int):
    """Gaps between consecutive growing letters in m^steps(c), computed on
    sets of gaps rather than on the (possibly huge) image."""
    info = _info(m)
    growing = info.growing
    one_first, one_last = _border_data(m, 1)
    gaps = set()
    letters = {c}
    for _ in range(steps):
        new = set()
        for (x, g, y) in gaps:
            hx, sx = one_last[x]
            gy, py = one_first[y]
            new.add((hx, sx + apply(m, g) + py, gy))
        for x in letters:
            if x in growing:
                new.update(t for t in _gaps(m.images[x], growing) if t[0] is not None and t[2] is not None)
        gaps = new
        letters = {y for x in letters for y in m.images[x]}
    return gaps


def _chain(start, step):
    """Eventually periodic sequence start, step(start), ...: (list, t, q)."""
    seq, seen = [], {}
    x = start
    while x not in seen:
        seen[x] = len(seq)
        seq.append(x)
        x = step(x)
    t = seen[x]
    return seq, t, len(seq) - t


def non_growing_orbits(m: Morphism):
    """Orbits of points of the shift made only of non-growing letters."""
    info = _info(m)
    growing = info.growing
    if not growing:
        return []
    P = _gap_power(m)
    first, last = _border_data(m, P)

    def tau(w):
        return _nongrowing_image(m, w, P)

    fresh = set()
    for a in range(info.n):
        w = (a,)
        for _ in range(P):
            fresh.update(_gaps(w, growing))
            w = apply(m, w)
    for c in growing:
        fresh.update(_internal_gaps(m, c, P))

    points = set()
    for c0, g0, d0 in sorted(fresh, key=repr):
        cseq, ct, cq = _chain(c0, lambda c: last[c][0] if c is not None else None)
        dseq, dt, dq = _chain(d0, lambda d: first[d][0] if d is not None else None)

        def suffix_part(c):
            return tau(last[c][1]) if c is not None else ()

        def prefix_part(d):
            return tau(first[d][1]) if d is not None else ()

        U = ()
        for c in reversed(cseq[ct : ct + cq]):
            U += suffix_part(c)
        V = ()
        for d in dseq[dt : dt + dq]:
            V += prefix_part(d)
        C = ()
        for c in reversed(cseq[:ct]):
            C += suffix_part(c)
        C += tau(g0)
        for d in dseq[:dt]:
            C += prefix_part(d)
        if U and V:
            points.add(ep_point(U, C, V))
        if U:
            points.add(periodic_point(U))
        if V:
            points.add(periodic_point(V))
    orbits = {pt.key: EPPoint(*pt.key, pt.origin if pt.is_periodic else 0) for pt in points}
    return [EPPoint(*key) for key in sorted(orbits, key=lambda k: (len(k[0]) + len(k[1]) + len(k[2]), k))]


# ------------------------------------------------------------- seeds

@lru_cache(maxsize=128)
def _seeds(m: Morphism):
    """Right and left seed letters with their cycle lengths and the erasable
    words that separate them from the origin in the limit point."""
    info = _info(m)
    growing, erasable = info.growing, info.erasable

    def first_ne(x):
        img = m.images[x]
        j = next(t for t, y in enumerate(img) if y not in erasable)
        return img[j], img[:j]

    def last_ne(x):
        img = m.images[x]
        j = max(t for t, y in enumerate(img) if y not in erasable)
        return img[j], img[j + 1 :]

    right, left = {}, {}
    for a in sorted(growing):
        for side, step, out in (("r", first_ne, right), ("l", last_ne, left)):
            x, path = a, []
            for c in range(1, info.n + 1):
                x, gap = step(x)
                path.append(gap)
                if x == a:
                    break
            else:
                continue
            if x != a:
                continue
            out[a] = (c, tuple(path))
    # the erasable word between the origin and the seed letter in the limit:
    # R = m^c(R) X where X precedes a in m^c(a); stable after mex rounds
    right_words, left_words = {}, {}
    for a, (c, path) in right.items():
        X = ()
        for gap in path:
            X = apply(m, X) + gap
        R = ()
        for _ in range(info.mex + 2):
            nxt = iterate(m, R, c) + X
            if nxt == R:
                break
            R = nxt
        right_words[a] = (c, R)
    for a, (c, path) in left.items():
        X = ()
        for gap in path:
            X = gap + apply(m, X)
        Lw = ()
        for _ in range(info.mex + 2):
            nxt = X + iterate(m, Lw, c)
            if nxt == Lw:
                break
            Lw = nxt
        left_words[a] = (c, Lw)
    return right_words, left_words


def effective_power(m: Morphism) -> int:
    """A power fixing every fixed point of every power of m: a multiple of
    the stabilization period and of every seed cycle, at least the
    stabilization index so that it acts idempotently on non-growing words."""
    info = _info(m)
    right, left = _seeds(m)
    K = info.p
    for c, _ in (*right.values(), *left.values()):
        K = _lcm(K, c)
    return K * max(1, -(-info.i // K))


def _min_power(K, is_fixed):
    for k in range(1, K + 1):
        if K % k == 0 and is_fixed(k):
            return k
    return K


# ------------------------------------------------------ orbit bookkeeping

class OrbitList(list):
    """Orbit descriptors plus ``complete`` (every search closed below its
    cap) and ``power_bound`` (the power that was searched)."""

    complete = True
    power_bound = None


def _parts_length(d) -> int:
    if isinstance(d, QuasiFixed):
        if d.shape == FIXED:
            return d.fixed.part_length()
        return len(d.u) + len(d.v) + 1
    if isinstance(d, EPPoint):
        return len(d.left) + len(d.center) + len(d.right)
    return d.part_length()


def descriptor_period(d, bound: int):
    """Least period (at most ``bound``) of the described point, or None."""
    if isinstance(d, EPPoint):
        q = d.period()
        return q if q is not None and q <= bound else None
    if isinstance(d, QuasiFixed):
        if d.shape == FIXED:
            return descriptor_period(d.fixed, bound)
        if d.shape == ROTATING:
            q = len(primitive_root(d.u + d.v))
            return q if q <= bound else None
        return None
    if d.shape == EVENTUALLY_PERIODIC:
        return descriptor_period(d.ep(), bound)
    if d.shape != TWO_SEED:
        return None
    # a candidate period read off a window is certified by m^k(w) = w^j
    span = 2 * bound + len(d.left) + len(d.right) + 2
    x = expand(d, span, span)
    for q in range(1, bound + 1):
        if any(x[j] != x[j + q] for j in range(len(x) - q)):
            continue
        w = x[span : span + q]
        if power_of(iterate(d.morphism, w, d.power), w):
            return q
    return None


def _dedupe(descs):
    """Drop repeated orbits.  Canonical forms of distinct non-periodic
    points never differ by a shift, so exact comparison suffices there."""
    out, periodic, windows = [], set(), []
    for d in descs:
        n = _parts_length(d)
        q = descriptor_period(d, 4 * n + 16)
        if q is not None:
            key = least_rotation(expand(d, 0, q))
            if key not in periodic:
                periodic.add(key)
                out.append(d)
            continue
        dup = False
        for e, ne in windows:
            T = 2 * (n + ne) + 8
            if type(e) is type(d) and expand(e, T, T) == expand(d, T, T):
                dup = True
                break
        if not dup:
            windows.append((d, n))
            out.append(d)
    return out


# ----------------------------------------------------- fixed point search

def _grow(gens, viable, accept, cap, prepend=False, absorbed=None):
    """Concatenations of generators, shortest first, kept while ``viable``.
    Returns (accepted words, complete)."""
    found = [()] if accept(()) else []
    seen = {()}
    frontier = [()]
    complete = True
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                cand = g + w if prepend else w + g
                if cand in seen or (absorbed is not None and absorbed(cand)):
                    continue
                if len(cand) > WORD_CAP or len(seen) >= cap:
                    complete = False
                    continue
                seen.add(cand)
                if viable(cand):
                    nxt.append(cand)
                    if accept(cand):
                        found.append(cand)
        frontier = nxt
    return found, complete


def _periodic_fixed_words(m: Morphism, K: int, orbits):
    """Primitive words u with m^K(u) = u whose u^w is a non-growing orbit."""
    out = set()
    for pt in orbits:
        if not pt.is_periodic:
            continue
        w = pt.left
        for j in range(len(w)):
            r = w[j:] + w[:j]
            if _nongrowing_image(m, r, K) == r:
                out.add(r)
    return sorted(out)


def _reps(u):
    return max(2, (2 * WORD_CAP) // len(u) + 1)


def _lit(w):
    return [((x,), False) for x in w]


def enumerate_fixed_orbits(m: Morphism, k_max: int | None = None, cap: int = BFS_CAP) -> OrbitList:
    """One descriptor per orbit of admissible two-sided fixed points of
    powers of m (minimal power at most ``k_max``; default: all)."""
    result = OrbitList()
    if not m.is_endomorphism or not classify_letters(m).in_shift_language:
        return result
    info = _info(m)
    K = effective_power(m)
    right, left = _seeds(m)
    orbits = non_growing_orbits(m)
    gens = _fixed_generators(m, K)
    still = [(frozenset(a for a in range(info.n) if a not in info.growing), True)]
    complete = True
    found = []

    for pt in orbits:
        d = _fixed_in_orbit(m, pt)
        if d is not None:
            found.append(d)

    for a1, (_, Lw) in sorted(left.items()):
        head = (a1,) + Lw
        for a2, (_, Rw) in sorted(right.items()):
            tail = Rw + (a2,)
            words, ok = _grow(
                gens,
                lambda P: member_regular(m, _lit(head + P) + still + _lit(tail)),
                lambda P: member_language(m, head + P + tail),
                cap,
            )
            complete &= ok
            found.extend(FixedPoint(TWO_SEED, K, head + P, (), tail, 0, m) for P in words)

    for u in _periodic_fixed_words(m, K, orbits):
        big = _reps(u)
        for a2, (_, Rw) in sorted(right.items()):
            tail = Rw + (a2,)
            words, ok = _grow(
                gens,
                lambda Q: member_regular(m, _lit(u * big + Q) + still + _lit(tail)),
                lambda Q: all(member_language(m, u * n + Q + tail) for n in (big, 2 * big)),
                cap,
                absorbed=lambda Q: Q[: len(u)] == u,
            )
            complete &= ok
            found.extend(FixedPoint(PERIODIC_SEED, K, u, Q, tail, 0, m) for Q in words)
        for a1, (_, Lw) in sorted(left.items()):
            head = (a1,) + Lw
            words, ok = _grow(
                gens,
                lambda Q: member_regular(m, _lit(head) + still + _lit(Q + u * big)),
                lambda Q: all(member_language(m, head + Q + u * n) for n in (big, 2 * big)),
                cap,
                prepend=True,
                absorbed=lambda Q: len(Q) >= len(u) and Q[len(Q) - len(u) :] == u,
            )
            complete &= ok
            found.extend(FixedPoint(SEED_PERIODIC, K, head, Q, u, 0, m) for Q in words)

    found = [_with_min_power(m, d, K) for d in found]
    found = sorted(dict.fromkeys(found), key=_sort_key)
    result.extend(d for d in _dedupe(found) if k_max is None or d.power <= k_max)
    result.complete = complete
    result.power_bound = K
    return result


def _sort_key(d):
    order = {EVENTUALLY_PERIODIC: 0, TWO_SEED: 1, PERIODIC_SEED: 2, SEED_PERIODIC: 3}
    return (order[d.shape], d.power, d.part_length(), d.left, d.center, d.right, d.origin)


def _fixed_in_orbit(m: Morphism, pt: EPPoint):
    """A fixed point of a power inside the orbit of a non-growing EP point."""
    p = _info(m).p
    for k in range(1, p + 1):
        if p % k:
            continue
        if pt.is_periodic:
            w = pt.left
            for o in range(len(w)):
                r = w[o:] + w[:o]
                if power_of(_nongrowing_image(m, r, k), r):
                    return FixedPoint(EVENTUALLY_PERIODIC, k, w, (), w, o, m)
            continue
        lo = -3 * len(pt.left) - 1
        hi = len(pt.center) + 3 * len(pt.right) + 1
        for o in range(lo, hi):
            shifted = EPPoint(pt.left, pt.center, pt.right, o)
            if _ep_fixed(m, shifted, k):
                return FixedPoint(EVENTUALLY_PERIODIC, k, pt.left, pt.center, pt.right, o, m)
    return None


def _ep_fixed(m, pt: EPPoint, k) -> bool:
    """m^k fixes the EP point, origin included.  Images of the periodic
    tails are periodic, so a window a few periods past the center decides."""
    T = 3 * (len(pt.left) + len(pt.center) + len(pt.right) + abs(pt.origin)) + 4
    ineg = _nongrowing_image(m, pt.window(-T, 0), k)
    ipos = _nongrowing_image(m, pt.window(0, T), k)
    if len(ineg) < T // 2 or len(ipos) < T // 2:
        return False
    return ineg == pt.window(-len(ineg), 0) and ipos == pt.window(0, len(ipos))


def _left_tail_fixed(m, u, Q, k) -> bool:
    big = _reps(u)
    w = u * big + Q
    img = _nongrowing_image(m, w, k)
    return len(img) >= len(Q) + 2 * len(u) and img == (u * (2 * big) + Q)[-len(img):]


def _right_tail_fixed(m, Q, u, k) -> bool:
    big = _reps(u)
    w = Q + u * big
    img = _nongrowing_image(m, w, k)
    return len(img) >= len(Q) + 2 * len(u) and img == (Q + u * (2 * big))[: len(img)]


def _with_min_power(m, d: FixedPoint, K: int) -> FixedPoint:
    if d.shape == EVENTUALLY_PERIODIC:
        return d
    right, left = _seeds(m)
    need = 1
    if d.shape in (TWO_SEED, PERIODIC_SEED):
        need = _lcm(need, right[d.right[-1]][0])
    if d.shape in (TWO_SEED, SEED_PERIODIC):
        need = _lcm(need, left[d.left[0]][0])

    def ok(k):
        if k % need:
            return False
        if d.shape == TWO_SEED:
            P = d.left[1 + len(left[d.left[0]][1]) :]
            return _nongrowing_image(m, P, k) == P
        if d.shape == PERIODIC_SEED:
            return _left_tail_fixed(m, d.left, d.center, k)
        return _right_tail_fixed(m, d.center, d.right, k)

    return FixedPoint(d.shape, _min_power(K, ok), d.left, d.center, d.right, d.origin, m)


# ----------------------------------------------------------- quasi-fixed

def enumerate_quasi_fixed_orbits(m: Morphism, k_max: int | None = None, cap: int = BFS_CAP) -> OrbitList:
    result = OrbitList()
    fixed = enumerate_fixed_orbits(m, k_max, cap)
    for d in fixed:
        result.append(QuasiFixed(FIXED, d.power, fixed=d, morphism=m))
    if not m.is_endomorphism or not classify_letters(m).in_shift_language:
        return result
    info = _info(m)
    g = build_graph(m)
    for c, comp in enumerate(g.sccs):
        if g.scc_kind[c] != CYCLE:
            continue
        k = len(comp)
        if k_max is not None and k > k_max:
            continue
        for a in comp:
            img = apply(power(m, k), (a,))
            j = img.index(a)
            u, v = img[:j], img[j + 1 :]
            if any(x not in info.erasable for x in u) and any(x not in info.erasable for x in v):
                result.append(QuasiFixed(LETTER, k, letter=a, u=u, v=v, morphism=m))
    for pt in non_growing_orbits(m):
        if not pt.is_periodic:
            continue
        w = pt.left
        for k in range(1, info.p + 1):
            if k_max is not None and k > k_max:
                break
            img = _nongrowing_image(m, w, k)
            j = next((j for j in range(len(w)) if w[j:] + w[:j] == img), None)
            if j is None:
                continue
            if j:
                # m^k(u v) = v u with u v = w
                result.append(QuasiFixed(ROTATING, k, u=w[:j], v=w[j:], morphism=m))
            break
    result.complete = fixed.complete
    result.power_bound = getattr(fixed, "power_bound", None)
    return result


# ------------------------------------------------------------- serialize

def descriptor_json(d, alphabet) -> dict:
    r = alphabet.render
    if isinstance(d, EPPoint):
        return {"shape": "eventually-periodic", "left": r(d.left), "center": r(d.center),
                "right": r(d.right), "origin": d.origin}
    if isinstance(d, QuasiFixed):
        out = {"shape": d.shape, "power": d.power, "shift": d.shift}
        if d.shape == FIXED:
            out["point"] = descriptor_json(d.fixed, alphabet)
        elif d.shape == LETTER:
            out.update(letter=alphabet[d.letter], u=r(d.u), v=r(d.v))
        else:
            out.update(u=r(d.u), v=r(d.v))
        return out
    out = {"shape": d.shape, "power": d.power, "left": r(d.left)}
    if d.shape != TWO_SEED:
        out["center"] = r(d.center)
    out["right"] = r(d.right)
    if d.shape == EVENTUALLY_PERIODIC:
        out["origin"] = d.origin
    return out
