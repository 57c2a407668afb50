"""Decision procedures on the shift of a morphism.

Periodic points with a growing letter are found on the functional graph
w -> primitive root of m(w) over conjugacy classes of short primitive
words; the length bound comes from integer left eigenvectors of the
incidence matrix.  Morphisms that factor through a smaller alphabet are
reduced first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil

from .core import (
    Alphabet,
    CapExceeded,
    Morphism,
    apply,
    is_primitive,
    least_rotation,
    primitive_root,
)
from .graph import EXPANDING, build_graph, classify_letters, growing_letters, languages_equal
from .langtools import intersect_finite, member_language
from .points import non_growing_orbits

HYPOTHESIS_NOT_MET = "hypothesis-not-met"
EMPTY_SHIFT = "empty shift"
SPLIT_CAP = 10**6


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with an optional witness.  ``value`` is None when the
    question is outside the hypotheses under which it is decided."""
    value: bool | None
    witness: object = None
    note: str | None = None

    def __bool__(self):
        return bool(self.value)

    @property
    def status(self) -> str:
        if self.value is None:
            return self.note or HYPOTHESIS_NOT_MET
        return "true" if self.value else "false"


# ------------------------------------------------------------ elementary

@dataclass(frozen=True)
class Decomposition:
    """m = alpha o beta with beta: A -> B*, alpha: B -> A* and |B| < |A|."""
    beta: Morphism
    alpha: Morphism
    block_set: tuple

    def reduced(self) -> Morphism:
        """beta o alpha, the morphism on the smaller alphabet."""
        b, a = self.beta, self.alpha
        return Morphism(a.source, b.target, tuple(apply(b, img) for img in a.images))


def _factorize(word, blocks):
    """A factorization of ``word`` over ``blocks`` (indices), or None."""
    n = len(word)
    back = [None] * (n + 1)
    back[0] = -1
    for i in range(n):
        if back[i] is None:
            continue
        for j, u in enumerate(blocks):
            k = i + len(u)
            if k <= n and back[k] is None and word[i:k] == u:
                back[k] = (i, j)
    if back[n] is None:
        return None
    out, k = [], n
    while k:
        i, j = back[k]
        out.append(j)
        k = i
    return tuple(reversed(out))


def _block_token(m: Morphism, u) -> str:
    return "[" + m.target.render(u).replace(" ", ".") + "]"


def find_decomposition(m: Morphism, cap: int = SPLIT_CAP):
    """The decomposition through the fewest blocks (then the least block set
    in length-lexicographic order), or None when m is elementary."""
    n = len(m.source)
    candidates = sorted({img[i:j] for img in m.images
                         for i in range(len(img)) for j in range(i + 1, len(img) + 1)},
                        key=lambda u: (len(u), u))
    needed = {x for img in m.images for x in img}
    firsts = {img[0] for img in m.images if img}
    tried = 0
    for size in range(0, n):
        for blocks in combinations(candidates, size):
            tried += 1
            if tried > cap:
                raise CapExceeded("factorization search exceeded its cap", cap=cap)
            if not firsts <= {u[0] for u in blocks}:
                continue
            if not needed <= {x for u in blocks for x in u}:
                continue
            split = [_factorize(img, blocks) for img in m.images]
            if any(s is None for s in split):
                continue
            B = Alphabet(_block_token(m, u) for u in blocks)
            beta = Morphism(m.source, B, tuple(split))
            alpha = Morphism(B, m.target, tuple(blocks))
            return Decomposition(beta, alpha, tuple(blocks))
    return None


def is_elementary(m: Morphism, cap: int = SPLIT_CAP):
    """True when m is elementary, otherwise a witnessing Decomposition."""
    d = find_decomposition(m, cap)
    return True if d is None else d


# ---------------------------------------------------------- period bound

@dataclass(frozen=True)
class PeriodBound:
    rho: Fraction
    bound: int
    eigen_data: tuple = ()        # (n, z) with z^T M = n z^T, z >= 0


def _nonneg_extreme_ratios(basis, growing, nongrowing):
    """Largest ratio sum(z on non-growing)/sum(z on growing) over non-negative
    z in the span of ``basis``; exact, by visiting the vertices of the cone
    section sum(z on growing) = 1."""
    import sympy

    d = len(basis)
    size = len(basis[0])
    Z = sympy.Matrix.hstack(*[sympy.Matrix(b) for b in basis])
    best = None
    best_z = None
    for tight in combinations(range(size), d - 1):
        rows = [Z.row(i) for i in tight]
        rows.append(sympy.Matrix([[sum(Z[i, j] for i in growing) for j in range(d)]]))
        A = sympy.Matrix.vstack(*rows)
        if A.rank() < d:
            continue
        rhs = sympy.Matrix([0] * (d - 1) + [1])
        lam = A.LUsolve(rhs)
        z = Z * lam
        if any(v < 0 for v in z):
            continue
        r = sum(z[i] for i in nongrowing)
        if best is None or r > best:
            best, best_z = r, z
    if best is None:
        return None
    return Fraction(str(best)), tuple(Fraction(str(v)) for v in best_z)


def period_bound(m: Morphism) -> PeriodBound:
    import sympy

    g = build_graph(m)
    n = len(m.source)
    growing = growing_letters(m, g)
    rho = Fraction(0)
    data = []
    top = max((len(img) for img in m.images), default=0)
    seen_sets = set()
    for a in sorted(growing):
        S = tuple(sorted(g.reach[a]))
        if S in seen_sets:
            continue
        seen_sets.add(S)
        M = sympy.Matrix([[g.matrix[x][y] for y in S] for x in S])
        grow_idx = [i for i, x in enumerate(S) if x in growing]
        still_idx = [i for i, x in enumerate(S) if x not in growing]
        for ev in range(2, top + 1):
            basis = (M - ev * sympy.eye(len(S))).T.nullspace()
            if not basis:
                continue
            found = _nonneg_extreme_ratios([list(b) for b in basis], grow_idx, still_idx)
            if found is None:
                continue
            r, z_local = found
            z = [Fraction(0)] * n
            for i, x in enumerate(S):
                z[x] = z_local[i]
            data.append((ev, tuple(z)))
            rho = max(rho, r)
    bound = ceil((2 * rho + 1) * (n + 1))
    for pt in non_growing_orbits(m):
        if pt.is_periodic:
            bound = max(bound, len(pt.left))
    data.sort(key=lambda t: (t[0], t[1]))
    return PeriodBound(rho, bound, tuple(data))


# ------------------------------------------------------ periodic points

def _class(m, w):
    return least_rotation(primitive_root(apply(m, w)))


def _candidates(m: Morphism, bound: int, growing):
    """Least-rotation primitive words of length <= bound with a growing
    letter and w^2 in the language."""
    out = set()
    level = {()}
    letters = range(len(m.source))
    for _ in range(bound):
        level = {w + (x,) for w in level for x in letters}
        level = {w for w in level if member_language(m, w)}
        for w in level:
            if (is_primitive(w) and least_rotation(w) == w
                    and any(x in growing for x in w) and member_language(m, w + w)):
                out.add(w)
    return out


def _cycles(m: Morphism, nodes):
    """(w, k) for every class w on a cycle of the class map, k its length."""
    succ = {w: _class(m, w) for w in nodes}
    out = {}
    for start in sorted(nodes):
        path, pos = [], {}
        w = start
        while w in succ and w not in pos and w not in out:
            pos[w] = len(path)
            path.append(w)
            w = succ[w]
        if w in pos:
            cyc = path[pos[w]:]
            for v in cyc:
                out[v] = len(cyc)
    return out


def _orbit_length(m: Morphism, w, limit: int):
    v = w
    for k in range(1, limit + 1):
        v = _class(m, v)
        if v == w:
            return k
        if len(v) > 4 * limit * max(1, len(w)):
            break
    return None


def growing_periodic_orbits(m: Morphism, _depth: int = 0):
    """Periodic orbits w^inf of the shift containing a growing letter, as
    (least rotation w, k) with m^k(w) a power of a conjugate of w."""
    growing = growing_letters(m)
    if not growing:
        return []
    d = find_decomposition(m)
    if d is None:
        B = period_bound(m).bound
        cyc = _cycles(m, _candidates(m, B, growing))
        return sorted(cyc.items(), key=lambda t: (len(t[0]), t[0]))
    if _depth > len(m.source):
        raise CapExceeded("decomposition recursion too deep")
    tau = d.reduced()
    found = {}
    for w_tau, k_tau in growing_periodic_orbits(tau, _depth + 1):
        w = least_rotation(primitive_root(apply(d.alpha, w_tau)))
        if not w or not any(x in growing for x in w):
            continue
        if not member_language(m, w + w):
            continue
        k = _orbit_length(m, w, max(1, 4 * len(m.source) * (k_tau + 1)))
        if k is not None:
            found[w] = k
    return sorted(found.items(), key=lambda t: (len(t[0]), t[0]))


# ------------------------------------------------------------ verdicts

def is_aperiodic(m: Morphism) -> Verdict:
    if not classify_letters(m).in_shift_language:
        return Verdict(True, note=EMPTY_SHIFT)
    orbits = growing_periodic_orbits(m)
    if orbits:
        return Verdict(False, witness=orbits[0][0])
    for pt in non_growing_orbits(m):
        if pt.is_periodic:
            return Verdict(False, witness=pt.left)
    return Verdict(True)


def is_fully_recognizable(m: Morphism) -> Verdict:
    orbits = growing_periodic_orbits(m)
    if orbits:
        return Verdict(False, witness=orbits[0][0])
    return Verdict(True)


def is_periodic_shift(m: Morphism) -> Verdict:
    """Every quasi-fixed point of a power is periodic (and so is every
    non-growing orbit)."""
    from .points import descriptor_period, enumerate_quasi_fixed_orbits

    if not classify_letters(m).in_shift_language:
        return Verdict(None, note=EMPTY_SHIFT)
    bound = period_bound(m).bound
    orbits = growing_periodic_orbits(m)
    bound = max([bound] + [len(w) for w, _ in orbits])
    for pt in non_growing_orbits(m):
        if not pt.is_periodic:
            return Verdict(False, witness=pt)
    quasi = enumerate_quasi_fixed_orbits(m)
    for d in quasi:
        if descriptor_period(d, bound) is None:
            return Verdict(False, witness=d)
    if not quasi.complete:
        raise CapExceeded("fixed-point search hit its cap before closing")
    return Verdict(True)


def is_irreducible(m: Morphism) -> Verdict:
    if not languages_equal(m):
        return Verdict(None, note=HYPOTHESIS_NOT_MET)
    g = build_graph(m)
    every = frozenset(range(len(m.source)))
    for a in range(len(m.source)):
        c = g.scc_of[a]
        if g.scc_kind[c] == EXPANDING and g.scc_period[c] == 1 and g.reach[a] == every:
            return Verdict(True, witness=a)
    return Verdict(False)


def is_minimal(m: Morphism) -> Verdict:
    """Some growing letter reaches every letter and occurs with bounded gaps,
    i.e. only finitely many words of the language avoid it."""
    if not languages_equal(m):
        return Verdict(None, note=HYPOTHESIS_NOT_MET)
    g = build_graph(m)
    every = frozenset(range(len(m.source)))
    for a in sorted(growing_letters(m, g)):
        if g.reach[a] == every and not intersect_finite(m, a):
            return Verdict(True, witness=a)
    return Verdict(False)
