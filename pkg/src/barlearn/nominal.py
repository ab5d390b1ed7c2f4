"""Bar strings, bar trees, ultimately periodic words and De Bruijn normal forms.

Names are plain ``str`` identifiers ordered by string comparison. A
:class:`Letter` is either a plain occurrence ``a`` or a binding occurrence
``|a`` of a name. Bar strings are tuples of letters.

Normal forms use ``int`` for binding levels (starting at 1) and ``str`` for
free names, so ``nf_string(parse_word("|a c |b b |a a"))`` is
``(1, 'c', 2, 2, 3, 3)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

__all__ = [
    "Letter",
    "BarString",
    "UltPeriodicWord",
    "BarTree",
    "NfTree",
    "NfSymbol",
    "Permutation",
    "ParseError",
    "plain",
    "bar",
    "fresh_names",
    "parse_word",
    "parse_up",
    "parse_tree",
    "format_word",
    "format_up",
    "format_tree",
    "format_nf",
    "format_nf_tree",
    "letters_of",
    "names_of",
    "free_names",
    "free_names_tree",
    "free_names_up",
    "ub",
    "is_clean",
    "is_closed",
    "nf_string",
    "nf_tree",
    "nf_preorder",
    "alpha_eq_string",
    "alpha_eq_tree",
    "alpha_eq_up",
    "equalize_stems",
    "up_prefix",
    "apply_perm",
    "brute_alpha_eq",
    "tree_size",
    "tree_depth",
    "iter_nodes",
]


class Letter(NamedTuple):
    """A plain (``bar=False``) or bar (``bar=True``) occurrence of ``name``.

    Tuple ordering gives the letter order used everywhere: by name, then
    plain before bar.
    """

    name: str
    bar: bool = False

    def __str__(self) -> str:
        return f"|{self.name}" if self.bar else self.name


BarString = tuple  # tuple[Letter, ...]
NfSymbol = Union[int, str]


def plain(name: str) -> Letter:
    return Letter(name, False)


def bar(name: str) -> Letter:
    return Letter(name, True)


def fresh_names(avoid: Iterable[str] = (), prefix: str = "n") -> Iterator[str]:
    """Enumerate ``n1, n2, ...`` skipping anything in ``avoid``."""
    avoid = set(avoid)
    for i in itertools.count(1):
        name = f"{prefix}{i}"
        if name not in avoid:
            yield name


@dataclass(frozen=True)
class UltPeriodicWord:
    """The infinite word ``stem · loop · loop · ...``.

    Representations are not unique: ``(ε, "a")`` and ``("a", "a")`` denote
    the same word.
    """

    stem: tuple
    loop: tuple

    def __post_init__(self) -> None:
        if not self.loop:
            raise ValueError("loop of an ultimately periodic word must be nonempty")
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))

    def __str__(self) -> str:
        return format_up(self)


@dataclass(frozen=True)
class BarTree:
    letter: Letter
    symbol: str
    children: tuple = ()

    def __str__(self) -> str:
        return format_tree(self)


@dataclass(frozen=True)
class NfTree:
    head: NfSymbol
    symbol: str
    children: tuple = ()

    def __str__(self) -> str:
        return format_nf_tree(self)


# ---------------------------------------------------------------------------
# text formats

_TOKEN = re.compile(r"\|?[A-Za-z][A-Za-z0-9_]*")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


def _letter(token: str, position: int) -> Letter:
    if not _TOKEN.fullmatch(token):
        raise ParseError(f"invalid letter {token!r}", position)
    if token.startswith("|"):
        return Letter(token[1:], True)
    return Letter(token, False)


def parse_word(text: str) -> tuple:
    """Parse whitespace-separated letters such as ``"b a |b a b"``."""
    return tuple(_letter(m.group(), m.start()) for m in re.finditer(r"\S+", text))


def parse_up(text: str) -> UltPeriodicWord:
    """Parse ``"u ; v"`` (``u`` may be empty, ``v`` may not)."""
    if text.count(";") != 1:
        raise ParseError("ultimately periodic word needs exactly one ';'")
    stem, loop = text.split(";")
    loop_word = parse_word(loop)
    if not loop_word:
        raise ParseError("empty loop", text.index(";") + 1)
    return UltPeriodicWord(parse_word(stem), loop_word)


def parse_tree(text: str) -> BarTree:
    """Parse term syntax ``|a.f(a.c, b.c)``."""
    pos = 0

    def skip() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> BarTree:
        nonlocal pos
        skip()
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("expected a letter", pos)
        letter = _letter(m.group(), pos)
        pos = m.end()
        if pos >= len(text) or text[pos] != ".":
            raise ParseError("expected '.' after letter", pos)
        pos += 1
        m = _NAME.match(text, pos)
        if not m:
            raise ParseError("expected a symbol", pos)
        symbol = m.group()
        pos = m.end()
        skip()
        children = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            while True:
                children.append(node())
                skip()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == ")":
                    pos += 1
                    break
                raise ParseError("expected ',' or ')'", pos)
        return BarTree(letter, symbol, tuple(children))

    tree = node()
    skip()
    if pos != len(text):
        raise ParseError("trailing input", pos)
    return tree


def format_word(w: Sequence[Letter]) -> str:
    return " ".join(map(str, w))


def format_up(x: UltPeriodicWord) -> str:
    stem = format_word(x.stem)
    return f"{stem} ; {format_word(x.loop)}" if stem else f"; {format_word(x.loop)}"


def _format_term(t, head) -> str:
    # iterative so that very deep trees print without hitting the recursion limit
    out: list[str] = []
    stack: list = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        out.append(f"{head(item)}.{item.symbol}")
        if item.children:
            stack.append(")")
            for i, child in enumerate(reversed(item.children)):
                stack.append(child)
                if i < len(item.children) - 1:
                    stack.append(", ")
            stack.append("(")
    return "".join(out)


def format_tree(t: BarTree) -> str:
    return _format_term(t, lambda n: str(n.letter))


def format_nf(nf: Sequence[NfSymbol]) -> str:
    return " ".join(map(str, nf))


def format_nf_tree(t: NfTree) -> str:
    return _format_term(t, lambda n: str(n.head))


# ---------------------------------------------------------------------------
# basic syntax


def iter_nodes(t):
    """Preorder traversal of a (bar or normal-form) tree, without recursion."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def tree_size(t) -> int:
    return sum(1 for _ in iter_nodes(t))


def tree_depth(t) -> int:
    """Number of nodes on the longest root-to-leaf path (a leaf has depth 1)."""
    best = 0
    stack = [(t, 1)]
    while stack:
        node, d = stack.pop()
        best = max(best, d)
        stack.extend((c, d + 1) for c in node.children)
    return best


def letters_of(x) -> frozenset:
    """All letters occurring in a bar string, ultimately periodic word or tree."""
    if isinstance(x, BarTree):
        return frozenset(n.letter for n in iter_nodes(x))
    if isinstance(x, UltPeriodicWord):
        return frozenset(x.stem) | frozenset(x.loop)
    return frozenset(x)


def names_of(x) -> frozenset:
    return frozenset(letter.name for letter in letters_of(x))


def free_names(w: Sequence[Letter]) -> set:
    bound: set = set()
    free: set = set()
    for name, is_bar in w:
        if is_bar:
            bound.add(name)
        elif name not in bound:
            free.add(name)
    return free


def free_names_up(x: UltPeriodicWord) -> set:
    # a name free in a later loop iteration is already free in the first one
    return free_names(x.stem + x.loop)


def free_names_tree(t: BarTree) -> set:
    free: set = set()
    stack = [(t, frozenset())]
    while stack:
        node, bound = stack.pop()
        name, is_bar = node.letter
        if is_bar:
            bound = bound | {name}
        elif name not in bound:
            free.add(name)
        stack.extend((c, bound) for c in node.children)
    return free


def ub(w: Sequence[Letter]) -> tuple:
    """Erase all bars."""
    return tuple(letter.name for letter in w)


def is_clean(w: Sequence[Letter]) -> bool:
    bars = [letter.name for letter in w if letter.bar]
    return len(bars) == len(set(bars)) and not (set(bars) & free_names(w))


def is_closed(w: Sequence[Letter]) -> bool:
    return not free_names(w)


# ---------------------------------------------------------------------------
# normal forms


def nf_string(w: Sequence[Letter]) -> tuple:
    levels: dict = {}
    bars = 0
    out = []
    for name, is_bar in w:
        if is_bar:
            bars += 1
            levels[name] = bars
            out.append(bars)
        else:
            out.append(levels.get(name, name))
    return tuple(out)


def _nf_heads(t: BarTree) -> list:
    """Normal-form heads in preorder; one pass with scope undo on exit."""
    heads: list = []
    scope: dict = {}
    # entries: (node, bars so far) to enter, or ("exit", name, previous) to undo
    stack: list = [(t, 0)]
    while stack:
        item = stack.pop()
        if item[0] == "exit":
            _, name, prev = item
            if prev is None:
                del scope[name]
            else:
                scope[name] = prev
            continue
        node, bars = item
        name, is_bar = node.letter
        if is_bar:
            bars += 1
            heads.append(bars)
            stack.append(("exit", name, scope.get(name)))
            scope[name] = bars
        else:
            heads.append(scope.get(name, name))
        for child in reversed(node.children):
            stack.append((child, bars))
    return heads


def nf_preorder(t: BarTree) -> tuple:
    """Normal form flattened to preorder ``(head, symbol, arity)`` triples.

    Two trees have equal normal forms iff these sequences are equal.
    """
    return tuple(
        (h, n.symbol, len(n.children)) for h, n in zip(_nf_heads(t), iter_nodes(t))
    )


def _from_preorder(items: Sequence[tuple]) -> NfTree:
    # items are (head, symbol, arity); rebuild with an explicit stack
    pending: list = []
    for head, symbol, arity in reversed(items):
        children = tuple(pending.pop() for _ in range(arity))
        pending.append(NfTree(head, symbol, children))
    (root,) = pending
    return root


def nf_tree(t: BarTree) -> NfTree:
    return _from_preorder(nf_preorder(t))


def alpha_eq_string(v: Sequence[Letter], w: Sequence[Letter]) -> bool:
    return len(v) == len(w) and nf_string(v) == nf_string(w)


def alpha_eq_tree(s: BarTree, t: BarTree) -> bool:
    return nf_preorder(s) == nf_preorder(t)


def equalize_stems(
    x: UltPeriodicWord, y: UltPeriodicWord
) -> tuple[UltPeriodicWord, UltPeriodicWord]:
    """Unroll the shorter stem so both stems have equal length.

    Moving ``d`` loop letters into the stem and rotating the loop by ``d``
    leaves the denoted infinite word unchanged.
    """

    def unroll(z: UltPeriodicWord, d: int) -> UltPeriodicWord:
        if d == 0:
            return z
        n = len(z.loop)
        extra = tuple(z.loop[i % n] for i in range(d))
        r = d % n
        return UltPeriodicWord(z.stem + extra, z.loop[r:] + z.loop[:r])

    d = len(x.stem) - len(y.stem)
    return unroll(x, max(0, -d)), unroll(y, max(0, d))


def up_prefix(x: UltPeriodicWord, n: int) -> tuple:
    """The first ``n`` letters of the infinite word."""
    if n <= len(x.stem):
        return x.stem[:n]
    rest = n - len(x.stem)
    reps, extra = divmod(rest, len(x.loop))
    return x.stem + x.loop * reps + x.loop[:extra]


def alpha_eq_up(x: UltPeriodicWord, y: UltPeriodicWord) -> bool:
    x, y = equalize_stems(x, y)
    p = x.stem + x.loop * (2 * len(y.loop))
    q = y.stem + y.loop * (2 * len(x.loop))
    return nf_string(p) == nf_string(q)


# ---------------------------------------------------------------------------
# permutations


class Permutation:
    """A finite permutation of names; the identity outside its support."""

    __slots__ = ("_map",)

    def __init__(self, mapping: dict | None = None):
        m = {a: b for a, b in (mapping or {}).items() if a != b}
        if set(m) != set(m.values()):
            raise ValueError(f"not a bijection on its domain: {mapping!r}")
        self._map = m

    @classmethod
    def swap(cls, a: str, b: str) -> Permutation:
        return cls({a: b, b: a})

    def __call__(self, name: str) -> str:
        return self._map.get(name, name)

    def __mul__(self, other: Permutation) -> Permutation:
        """``(p * q)(a) == p(q(a))``."""
        domain = set(self._map) | set(other._map)
        return Permutation({a: self(other(a)) for a in domain})

    def inverse(self) -> Permutation:
        return Permutation({b: a for a, b in self._map.items()})

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        return f"Permutation({self._map!r})"


def apply_perm(p: Permutation, x):
    """Rename letterwise (strings, ultimately periodic words) or nodewise (trees)."""
    if isinstance(x, BarTree):
        order = list(iter_nodes(x))
        built: dict = {}
        for node in reversed(order):
            built[id(node)] = BarTree(
                Letter(p(node.letter.name), node.letter.bar),
                node.symbol,
                tuple(built[id(c)] for c in node.children),
            )
        return built[id(x)]
    if isinstance(x, UltPeriodicWord):
        return UltPeriodicWord(apply_perm(p, x.stem), apply_perm(p, x.loop))
    return tuple(Letter(p(name), is_bar) for name, is_bar in x)


# ---------------------------------------------------------------------------
# independent oracle


def brute_alpha_eq(v: Sequence[Letter], w: Sequence[Letter], max_length: int = 8) -> bool:
    """Decide α-equivalence straight from the renaming rules.

    ``|a v' ≡ |b w'`` iff ``(a c)·v' ≡ (b c)·w'`` for a name ``c`` fresh
    for both sides; plain heads must coincide. Exponential in spirit and
    only meant as a test oracle for small inputs.
    """
    if len(v) > max_length or len(w) > max_length:
        raise ValueError(f"brute_alpha_eq is limited to length {max_length}")
    return _brute(tuple(v), tuple(w))


def _brute(v: tuple, w: tuple) -> bool:
    if not v or not w:
        return not v and not w
    hv, hw = v[0], w[0]
    if hv.bar != hw.bar:
        return False
    if not hv.bar:
        return hv == hw and _brute(v[1:], w[1:])
    c = next(fresh_names(names_of(v) | names_of(w)))
    return _brute(
        apply_perm(Permutation.swap(hv.name, c), v[1:]),
        apply_perm(Permutation.swap(hw.name, c), w[1:]),
    )
