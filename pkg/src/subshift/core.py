"""Alphabets, words and free-monoid morphisms.

Words are tuples of letter indices into an :class:`Alphabet`.  Tokens are only
used when reading or printing, so every algorithm works on small integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple  # tuple[int, ...]

IMAGE_LIMIT = 10**7


class SubshiftError(Exception):
    """Base class for errors raised by this package."""


class ParseError(SubshiftError, ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class AlphabetError(SubshiftError, ValueError):
    pass


class ImageTooLong(SubshiftError, OverflowError):
    pass


class CapExceeded(SubshiftError):
    """A resource cap was hit before the computation could finish."""

    def __init__(self, message: str, **info):
        self.info = info
        super().__init__(message)


class Alphabet:
    __slots__ = ("letters", "_index")

    def __init__(self, letters: Iterable[str]):
        letters = tuple(letters)
        index = {}
        for i, tok in enumerate(letters):
            if not isinstance(tok, str) or not tok or any(c.isspace() for c in tok):
                raise AlphabetError(f"bad letter token {tok!r}")
            if tok in index:
                raise AlphabetError(f"duplicate letter {tok!r}")
            index[tok] = i
        self.letters = letters
        self._index = index

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __contains__(self, tok):
        return tok in self._index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Alphabet({list(self.letters)!r})"

    @property
    def single_char(self) -> bool:
        return all(len(t) == 1 for t in self.letters)

    def index(self, tok: str) -> int:
        try:
            return self._index[tok]
        except KeyError:
            raise AlphabetError(f"letter {tok!r} not in alphabet") from None

    def word(self, text: str | Sequence[str]) -> Word:
        """Read a word given as a string (or a list of tokens)."""
        if not isinstance(text, str):
            return tuple(self.index(t) for t in text)
        if self.single_char:
            return tuple(self.index(c) for c in text if not c.isspace())
        return tuple(self.index(t) for t in text.split())

    def render(self, w: Iterable[int]) -> str:
        sep = "" if self.single_char else " "
        return sep.join(self.letters[i] for i in w)


# ---------------------------------------------------------------- words

def is_primitive(w: Word) -> bool:
    n = len(w)
    if n == 0:
        return False
    return _period_root(w) == n


def _period_root(w: Word) -> int:
    # smallest d dividing n with w = (w[:d])^(n/d)
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return d
    return n


def primitive_root(w: Word) -> Word:
    if not w:
        return w
    return w[: _period_root(w)]


def least_rotation(w: Word) -> Word:
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def is_conjugate(u: Word, v: Word) -> bool:
    return len(u) == len(v) and (not u or any(u[i:] + u[:i] == v for i in range(len(u))))


def power_of(w: Word, u: Word) -> int:
    """Return j if w == u^j (j >= 1), else 0."""
    if not u or len(w) % len(u):
        return 0
    j = len(w) // len(u)
    return j if j and u * j == w else 0


def factors(w: Word, n: int) -> set:
    return {w[i : i + n] for i in range(len(w) - n + 1)}


def contains(w: Word, u: Word) -> bool:
    if not u:
        return True
    n = len(u)
    first = u[0]
    for i in range(len(w) - n + 1):
        if w[i] == first and w[i : i + n] == u:
            return True
    return False


# ------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class Morphism:
    source: Alphabet
    target: Alphabet
    images: tuple  # tuple[Word, ...], one per source letter

    def __post_init__(self):
        if len(self.images) != len(self.source):
            raise AlphabetError("one image per source letter is required")
        n = len(self.target)
        for img in self.images:
            if any(not 0 <= x < n for x in img):
                raise AlphabetError("image uses a letter outside the target alphabet")

    @classmethod
    def from_dict(cls, rules: dict, source=None, target=None) -> "Morphism":
        """Build from ``{"a": "ab", "b": "a"}`` (tokens or token lists)."""
        src = source if isinstance(source, Alphabet) else Alphabet(source or rules.keys())
        if target is None:
            tgt = src
        elif isinstance(target, Alphabet):
            tgt = target
        else:
            tgt = Alphabet(target)
        images = tuple(tgt.word(rules[t]) for t in src.letters)
        return cls(src, tgt, images)

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def __len__(self):
        return sum(len(img) for img in self.images)

    @property
    def size(self) -> int:
        return len(self) + len(self.source)

    @property
    def is_erasing(self) -> bool:
        return any(not img for img in self.images)

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def word(self, text) -> Word:
        return self.source.word(text)

    def render(self, w: Word) -> str:
        return self.target.render(w)

    def as_dict(self) -> dict:
        return {a: self.target.render(img) for a, img in zip(self.source, self.images)}

    def __str__(self):
        return ", ".join(f"{a}->{img}" for a, img in self.as_dict().items())


def identity(alphabet: Alphabet) -> Morphism:
    return Morphism(alphabet, alphabet, tuple((i,) for i in range(len(alphabet))))


def morphism(rules: dict | str, **kw) -> Morphism:
    """Convenience constructor from a dict or from file-format text."""
    if isinstance(rules, str):
        return parse_morphism(rules, **kw)
    return Morphism.from_dict(rules, **kw)


def apply(m: Morphism, w: Word, limit: int = IMAGE_LIMIT) -> Word:
    images = m.images
    try:
        total = sum(len(images[x]) for x in w)
    except (IndexError, TypeError):
        raise AlphabetError("word uses a letter outside the source alphabet") from None
    if total > limit:
        raise ImageTooLong(f"image of length {total} exceeds limit {limit}")
    out = []
    for x in w:
        out.extend(images[x])
    return tuple(out)


def compose(outer: Morphism, inner: Morphism, limit: int = IMAGE_LIMIT) -> Morphism:
    """Return outer o inner."""
    if inner.target != outer.source:
        raise AlphabetError("alphabet mismatch in composition")
    return Morphism(inner.source, outer.target,
                    tuple(apply(outer, img, limit) for img in inner.images))


def power(m: Morphism, n: int, limit: int = IMAGE_LIMIT) -> Morphism:
    if not m.is_endomorphism:
        raise AlphabetError("power of a non-endomorphism")
    if n < 0:
        raise ValueError("negative power")
    result = identity(m.source)
    base = m
    while n:
        if n & 1:
            result = compose(base, result, limit)
        n >>= 1
        if n:
            base = compose(base, base, limit)
    return result


def iterate(m: Morphism, w: Word, n: int, limit: int = IMAGE_LIMIT) -> Word:
    for _ in range(n):
        w = apply(m, w, limit)
    return w


def image_lengths(m: Morphism, n: int) -> list:
    """|m^n(a)| for every letter, with exact integers and no materialization."""
    lengths = [1] * len(m.source)
    for _ in range(n):
        lengths = [sum(lengths[x] for x in img) for img in m.images]
    return lengths


# ----------------------------------------------------------- file format

def parse_morphism(text: str, target: Alphabet | None = None) -> Morphism:
    rules = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError("expected '<letter> -> <image>'", lineno)
        lhs, rhs = line.split("->", 1)
        lhs = lhs.strip()
        if not lhs or any(c.isspace() for c in lhs):
            raise ParseError(f"bad left-hand side {lhs!r}", lineno)
        if lhs in seen:
            raise ParseError(f"duplicate letter {lhs!r}", lineno)
        seen[lhs] = lineno
        rules.append((lhs, rhs.strip(), lineno))
    if not rules:
        raise ParseError("no rules found")
    source = Alphabet(r[0] for r in rules)
    tgt = target if target is not None else source
    images = []
    for _, rhs, lineno in rules:
        if tgt.single_char:
            toks = [c for c in rhs if not c.isspace()]
        else:
            toks = rhs.split()
        for t in toks:
            if t not in tgt:
                raise ParseError(f"undeclared letter {t!r} in image", lineno)
        images.append(tuple(tgt.index(t) for t in toks))
    return Morphism(source, tgt, tuple(images))


def serialize(m: Morphism) -> str:
    lines = []
    for a, img in zip(m.source, m.images):
        rhs = m.target.render(img)
        lines.append(f"{a} -> {rhs}" if rhs else f"{a} ->")
    return "\n".join(lines) + "\n"


def load_morphism(path, target: Alphabet | None = None) -> Morphism:
    with open(path, encoding="utf-8") as fh:
        return parse_morphism(fh.read(), target)


# ------------------------------------------------------ derivation trees

@dataclass(frozen=True)
class Node:
    label: int
    children: tuple = ()


@dataclass(frozen=True)
class DerivationTree:
    root: Node
    depth: int

    def frontier(self) -> Word:
        """Labels of the nodes at full depth, left to right."""
        out = []
        stack = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            if d == self.depth:
                out.append(node.label)
            else:
                stack.extend((c, d + 1) for c in reversed(node.children))
        return tuple(out)

    def leaves(self) -> list:
        """(depth, label) of every leaf, left to right."""
        out = []
        stack = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            if d == self.depth or not node.children:
                out.append((d, node.label))
            else:
                stack.extend((c, d + 1) for c in reversed(node.children))
        return out


def derivation_tree(m: Morphism, a: int, n: int, limit: int = IMAGE_LIMIT) -> DerivationTree:
    if not m.is_endomorphism:
        raise AlphabetError("derivation trees need an endomorphism")
    if not 0 <= a < len(m.source):
        raise AlphabetError("letter not in alphabet")
    count = sum(image_lengths(m, d)[a] for d in range(n + 1))
    if count > limit:
        raise ImageTooLong(f"tree with {count} nodes exceeds limit {limit}")

    def build(label, d):
        if d == n:
            return Node(label)
        return Node(label, tuple(build(c, d + 1) for c in m.images[label]))

    return DerivationTree(build(a, 0), n)
