"""The letter graph of an endomorphism and the classifications read off it.

Vertices are letters; letter ``a`` has one edge to ``b`` for each occurrence
of ``b`` in the image of ``a``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd

from .core import Morphism, apply, power

TRIVIAL, CYCLE, EXPANDING = "trivial", "cycle", "expanding"
TYPE_NAMES = ("1", "2'", "2''", "3")


@dataclass(frozen=True)
class MorphismGraph:
    matrix: tuple            # matrix[a][b] = occurrences of b in the image of a
    sccs: tuple              # components, each a sorted tuple of letters
    scc_of: tuple
    scc_kind: tuple
    scc_period: tuple        # None for trivial components
    reach: tuple             # reach[a] = frozenset of letters reachable from a

    def successors(self, a):
        return [b for b, k in enumerate(self.matrix[a]) if k]

    def nontrivial(self, c) -> bool:
        return self.scc_kind[c] != TRIVIAL

    def component_reach(self, c) -> frozenset:
        """Components reachable from component c (including c)."""
        a = self.sccs[c][0]
        return frozenset(self.scc_of[b] for b in self.reach[a])


def _tarjan(n, succ):
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack, comps = [], []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            nbrs = succ[v]
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if index[w] is None:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def _period(comp, succ, member):
    start = comp[0]
    level = {start: 0}
    queue = deque([start])
    g = 0
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if not member(v):
                continue
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                g = gcd(g, level[u] + 1 - level[v])
    return abs(g)


def build_graph(m: Morphism) -> MorphismGraph:
    n = len(m.source)
    matrix = [[0] * n for _ in range(n)]
    for a, img in enumerate(m.images):
        for b in img:
            matrix[a][b] += 1
    succ = [[b for b in range(n) if matrix[a][b]] for a in range(n)]
    comps = sorted(_tarjan(n, succ), key=lambda c: c[0])
    scc_of = [0] * n
    for i, comp in enumerate(comps):
        for a in comp:
            scc_of[a] = i
    kinds, periods = [], []
    for i, comp in enumerate(comps):
        if len(comp) == 1 and matrix[comp[0]][comp[0]] == 0:
            kinds.append(TRIVIAL)
            periods.append(None)
            continue
        inside = set(comp)
        out = [sum(matrix[a][b] for b in comp) for a in comp]
        kinds.append(CYCLE if all(d == 1 for d in out) else EXPANDING)
        periods.append(_period(comp, succ, inside.__contains__))
    reach = []
    for a in range(n):
        seen = {a}
        queue = deque([a])
        while queue:
            u = queue.popleft()
            for v in succ[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        reach.append(frozenset(seen))
    return MorphismGraph(
        matrix=tuple(tuple(r) for r in matrix),
        sccs=tuple(comps),
        scc_of=tuple(scc_of),
        scc_kind=tuple(kinds),
        scc_period=tuple(periods),
        reach=tuple(reach),
    )


# ------------------------------------------------------------ erasable

def erasable_letters(m: Morphism) -> frozenset:
    erasable = set()
    changed = True
    while changed:
        changed = False
        for a, img in enumerate(m.images):
            if a not in erasable and all(b in erasable for b in img):
                erasable.add(a)
                changed = True
    return frozenset(erasable)


def mortality(m: Morphism) -> dict:
    """Least n with m^n(a) empty, for every erasable letter a."""
    erasable = erasable_letters(m)
    mex = {}
    while len(mex) < len(erasable):
        for a in erasable:
            if a not in mex and all(b in mex for b in m.images[a]):
                mex[a] = 1 + max((mex[b] for b in m.images[a]), default=0)
    return mex


def growing_letters(m: Morphism, g: MorphismGraph | None = None) -> frozenset:
    g = g or build_graph(m)
    nontrivial = [c for c in range(len(g.sccs)) if g.nontrivial(c)]
    # components that lead to unbounded growth
    hot = set()
    for c in nontrivial:
        if g.scc_kind[c] == EXPANDING:
            hot.add(c)
        elif any(d != c and g.nontrivial(d) for d in g.component_reach(c)):
            hot.add(c)
    return frozenset(a for a in range(len(m.source))
                     if any(g.scc_of[b] in hot for b in g.reach[a]))


# ------------------------------------------------------- classification

@dataclass(frozen=True)
class LetterClassification:
    erasable: frozenset
    mex_of: dict
    growing: frozenset
    shift_types: dict                # letter -> frozenset of type names
    in_shift_language: frozenset
    witnesses: dict = field(default_factory=dict)   # (type, cycle component) -> data

    @property
    def mex(self) -> int:
        return max(self.mex_of.values(), default=0)


def _cycle_word_sides(m, g, comp, b, erasable):
    """For b on a cycle component, split m^{|C|}(b) = w b z and report
    whether w and z contain a non-erasable letter."""
    img = apply(power(m, len(comp)), (b,))
    j = img.index(b)
    w, z = img[:j], img[j + 1 :]
    return w, z, any(x not in erasable for x in w), any(x not in erasable for x in z)


def _type_two_prime(m, g, growing, erasable, cycle_sides):
    """Exact search over (letter, left-has-growing, right-has-growing) states
    reachable from letters of trivial components."""
    n = len(m.source)
    found = {}
    for a in range(n):
        if g.scc_kind[g.scc_of[a]] != TRIVIAL:
            continue
        start = (a, False, False)
        parent = {start: None}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            x, left, right = state
            img = m.images[x]
            pre = [False] * (len(img) + 1)
            for j, y in enumerate(img):
                pre[j + 1] = pre[j] or y in growing
            suf = [False] * (len(img) + 1)
            for j in range(len(img) - 1, -1, -1):
                suf[j] = suf[j + 1] or img[j] in growing
            for j, y in enumerate(img):
                nxt = (y, left or pre[j], right or suf[j + 1])
                if nxt in parent:
                    continue
                parent[nxt] = (state, j)
                queue.append(nxt)
                c = g.scc_of[y]
                if c in found or g.scc_kind[c] != CYCLE:
                    continue
                _, _, w_ok, z_ok = cycle_sides[y]
                if (nxt[1] or w_ok) and (nxt[2] or z_ok):
                    depth, s = 0, nxt
                    while parent[s] is not None:
                        s = parent[s][0]
                        depth += 1
                    found[c] = {"a": a, "b": y, "k": depth, "p": len(g.sccs[c])}
    return found


def classify_letters(m: Morphism, g: MorphismGraph | None = None) -> LetterClassification:
    g = g or build_graph(m)
    n = len(m.source)
    erasable = erasable_letters(m)
    mex_of = mortality(m)
    growing = growing_letters(m, g)
    ncomp = len(g.sccs)
    cycles = [c for c in range(ncomp) if g.scc_kind[c] == CYCLE]
    cycle_sides = {}
    for c in cycles:
        for b in g.sccs[c]:
            cycle_sides[b] = _cycle_word_sides(m, g, g.sccs[c], b, erasable)

    sources = {t: set() for t in TYPE_NAMES}
    witnesses = {}
    for c in range(ncomp):
        if g.scc_kind[c] == EXPANDING:
            sources["1"].add(c)
    for c in cycles:
        for b in g.sccs[c]:
            _, _, w_ok, z_ok = cycle_sides[b]
            if w_ok and z_ok:
                sources["2''"].add(c)
                witnesses[("2''", c)] = {"b": b, "p": len(g.sccs[c])}
                break
        for d in g.component_reach(c):
            if d != c and g.nontrivial(d):
                sources["3"].add(d)
                witnesses.setdefault(("3", d), {"cycle": g.sccs[c][0]})
    for c, wit in _type_two_prime(m, g, growing, erasable, cycle_sides).items():
        sources["2'"].add(c)
        witnesses[("2'", c)] = wit

    types = {a: set() for a in range(n)}
    for t, comps in sources.items():
        for c in comps:
            for b in g.reach[g.sccs[c][0]]:
                types[b].add(t)
    shift_types = {a: frozenset(ts) for a, ts in types.items()}
    return LetterClassification(
        erasable=erasable,
        mex_of=mex_of,
        growing=growing,
        shift_types=shift_types,
        in_shift_language=frozenset(a for a, ts in shift_types.items() if ts),
        witnesses=witnesses,
    )


def shift_nonempty(m: Morphism) -> bool:
    return bool(classify_letters(m).in_shift_language)


def languages_equal(m: Morphism) -> bool:
    return len(classify_letters(m).in_shift_language) == len(m.source)


# --------------------------------------------------------- stabilization

@dataclass(frozen=True)
class StabilizationConstants:
    i: int
    p: int


def stabilization_constants(m: Morphism, growing: frozenset | None = None) -> StabilizationConstants:
    """Least (i, p) with m^i(a) = m^(i+p)(a) for every non-growing letter a."""
    if growing is None:
        growing = growing_letters(m)
    letters = [a for a in range(len(m.source)) if a not in growing]
    if not letters:
        return StabilizationConstants(0, 1)
    current = tuple((a,) for a in letters)
    seen = {current: 0}
    step = 0
    while True:
        step += 1
        current = tuple(apply(m, w) for w in current)
        if current in seen:
            return StabilizationConstants(seen[current], step - seen[current])
        seen[current] = step
