"""Finite automata over finite bar alphabets, read with literal semantics.

States are dense integers ``0..n_states-1``. Every construction emits
reachable states only, numbered in discovery order (breadth-first from the
initial state for words, bottom-up saturation order for trees), so results
are reproducible.

Witness order: words by (length, letters), trees by (size, preorder
sequence of ``(letter, symbol)``), where letters compare by name and then
plain before bar.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .nominal import BarTree, Letter, UltPeriodicWord, iter_nodes, letters_of

__all__ = [
    "Signature",
    "BarNfa",
    "BarBuchi",
    "BarNftaBottomUp",
    "BarNftaTopDown",
    "Lasso",
    "literal_member_word",
    "literal_member_tree",
    "literal_member_up",
    "trim",
    "trim_tree",
    "determinize_word",
    "determinize_tree",
    "complement_word",
    "complement_tree",
    "product_intersection",
    "shortest_in_symmetric_difference",
    "shortest_in_difference",
    "shortest_accepted",
    "buchi_lasso_search",
    "topdown_of_bottomup",
    "bottomup_of_topdown",
    "singleton_automaton",
    "empty_automaton",
    "restrict_alphabet",
    "tree_key",
]


@dataclass(frozen=True)
class Signature:
    """Ranked symbols, stored sorted so that iteration order is fixed."""

    arities: tuple

    def __post_init__(self) -> None:
        items = tuple(sorted(dict(self.arities).items()))
        if any(n < 0 for _, n in items):
            raise ValueError("arities must be nonnegative")
        object.__setattr__(self, "arities", items)

    @classmethod
    def of(cls, value: Mapping[str, int] | str | Signature) -> Signature:
        """Build from a mapping or from text such as ``"f/2 c/0"``."""
        if isinstance(value, Signature):
            return value
        if isinstance(value, str):
            pairs = []
            for token in value.split():
                sym, _, arity = token.partition("/")
                if not arity.isdigit():
                    raise ValueError(f"bad signature entry {token!r}")
                pairs.append((sym, int(arity)))
            return cls(tuple(pairs))
        return cls(tuple(value.items()))

    def __getitem__(self, symbol: str) -> int:
        return dict(self.arities)[symbol]

    def __contains__(self, symbol: object) -> bool:
        return any(s == symbol for s, _ in self.arities)

    def __iter__(self):
        return (s for s, _ in self.arities)

    def items(self):
        return iter(self.arities)

    def __str__(self) -> str:
        return " ".join(f"{s}/{n}" for s, n in self.arities)


def _check_states(n: int, states: Iterable[int], what: str) -> None:
    for q in states:
        if not 0 <= q < n:
            raise ValueError(f"{what} refers to unknown state {q}")


@dataclass(frozen=True)
class BarNfa:
    """A word automaton over a finite set of plain and bar letters."""

    alphabet: frozenset
    n_states: int
    initial: int
    finals: frozenset
    transitions: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        if self.n_states < 1:
            raise ValueError("a word automaton needs at least one state")
        _check_states(self.n_states, [self.initial, *self.finals], "initial/final")
        for p, letter, q in self.transitions:
            _check_states(self.n_states, (p, q), "transition")
            if letter not in self.alphabet:
                raise ValueError(f"transition letter {letter} not in alphabet")

    @cached_property
    def letters(self) -> tuple:
        return tuple(sorted(self.alphabet))

    @cached_property
    def delta(self) -> dict:
        table: dict = {}
        for p, letter, q in sorted(self.transitions):
            table.setdefault((p, letter), []).append(q)
        return {k: tuple(v) for k, v in table.items()}

    def successors(self, state: int, letter: Letter) -> tuple:
        return self.delta.get((state, letter), ())

    def step(self, states: frozenset, letter: Letter) -> frozenset:
        delta = self.delta
        return frozenset(q for p in states for q in delta.get((p, letter), ()))

    def is_deterministic_complete(self) -> bool:
        return all(
            len(self.delta.get((p, a), ())) == 1
            for p in range(self.n_states)
            for a in self.alphabet
        )

    def with_transitions(self, **changes) -> BarNfa:
        fields = dict(
            alphabet=self.alphabet,
            n_states=self.n_states,
            initial=self.initial,
            finals=self.finals,
            transitions=self.transitions,
        )
        fields.update(changes)
        return type(self)(**fields)


class BarBuchi(BarNfa):
    """Same data as :class:`BarNfa`, accepting infinite words (Büchi condition)."""


@dataclass(frozen=True)
class BarNftaBottomUp:
    """Bottom-up tree automaton; rules are ``(symbol, letter, children, target)``."""

    alphabet: frozenset
    signature: Signature
    n_states: int
    finals: frozenset
    rules: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "signature", Signature.of(self.signature))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "rules", frozenset(self.rules))
        _check_states(self.n_states, self.finals, "final")
        arity = dict(self.signature.arities)
        for sym, letter, children, target in self.rules:
            if arity.get(sym) != len(children):
                raise ValueError(f"rule for {sym} has {len(children)} children")
            if letter not in self.alphabet:
                raise ValueError(f"rule letter {letter} not in alphabet")
            _check_states(self.n_states, (*children, target), "rule")

    @cached_property
    def letters(self) -> tuple:
        return tuple(sorted(self.alphabet))

    @cached_property
    def index(self) -> dict:
        table: dict = {}
        for sym, letter, children, target in sorted(self.rules):
            table.setdefault((sym, letter), []).append((children, target))
        return table

    def step(self, symbol: str, letter: Letter, child_sets: tuple) -> frozenset:
        return frozenset(
            q
            for children, q in self.index.get((symbol, letter), ())
            if all(c in s for c, s in zip(children, child_sets))
        )

    def is_deterministic_complete(self) -> bool:
        table: dict = {}
        for sym, letter, children, target in self.rules:
            table.setdefault((sym, letter, children), set()).add(target)
        if any(len(v) != 1 for v in table.values()):
            return False
        for sym, arity in self.signature.items():
            for letter in self.alphabet:
                for children in itertools.product(range(self.n_states), repeat=arity):
                    if (sym, letter, children) not in table:
                        return False
        return True


@dataclass(frozen=True)
class BarNftaTopDown:
    """Top-down tree automaton; rules are ``(state, letter, symbol, children)``."""

    alphabet: frozenset
    signature: Signature
    n_states: int
    initial: int
    rules: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "signature", Signature.of(self.signature))
        object.__setattr__(self, "rules", frozenset(self.rules))
        _check_states(self.n_states, (self.initial,), "initial")
        arity = dict(self.signature.arities)
        for state, letter, sym, children in self.rules:
            if arity.get(sym) != len(children):
                raise ValueError(f"rule for {sym} has {len(children)} children")
            if letter not in self.alphabet:
                raise ValueError(f"rule letter {letter} not in alphabet")
            _check_states(self.n_states, (state, *children), "rule")

    @cached_property
    def index(self) -> dict:
        table: dict = {}
        for state, letter, sym, children in sorted(self.rules):
            table.setdefault(state, []).append((letter, sym, children))
        return table


@dataclass(frozen=True)
class Lasso:
    """An accepting lasso: ``stem_states[-1] == loop_states[0] == loop_states[-1]``."""

    stem_states: tuple
    stem: tuple
    loop_states: tuple
    loop: tuple

    @property
    def word(self) -> UltPeriodicWord:
        return UltPeriodicWord(self.stem, self.loop)


# ---------------------------------------------------------------------------
# membership


def literal_member_word(a: BarNfa, w) -> bool:
    states = frozenset([a.initial])
    for letter in w:
        if letter not in a.alphabet:
            return False
        states = a.step(states, letter)
        if not states:
            return False
    return bool(states & a.finals)


def _tree_states(a: BarNftaBottomUp, t: BarTree) -> frozenset:
    arity = dict(a.signature.arities)
    order = list(iter_nodes(t))
    sets: dict = {}
    for node in reversed(order):
        if arity.get(node.symbol) != len(node.children):
            raise ValueError(f"tree symbol {node.symbol}/{len(node.children)} not in signature")
        if node.letter not in a.alphabet:
            sets[id(node)] = frozenset()
            continue
        sets[id(node)] = a.step(
            node.symbol, node.letter, tuple(sets[id(c)] for c in node.children)
        )
    return sets[id(t)]


def literal_member_tree(a: BarNftaBottomUp, t: BarTree) -> bool:
    return bool(_tree_states(a, t) & a.finals)


def literal_member_up(a: BarBuchi, x: UltPeriodicWord) -> bool:
    """Whether ``stem·loop^ω`` is literally accepted (via a product lasso)."""
    if not letters_of(x) <= a.alphabet:
        return False
    single = singleton_automaton(x, a.alphabet)
    return buchi_lasso_search(product_intersection(a, single)) is not None


# ---------------------------------------------------------------------------
# word automata


def empty_automaton(alphabet: Iterable[Letter], kind: type = BarNfa) -> BarNfa:
    return kind(frozenset(alphabet), 1, 0, frozenset(), frozenset())


def _renumber(a: BarNfa, keep: set) -> BarNfa:
    """Restrict to ``keep`` (which must contain the initial state), BFS numbering."""
    order = [a.initial]
    ids = {a.initial: 0}
    queue = deque([a.initial])
    while queue:
        p = queue.popleft()
        for letter in a.letters:
            for q in a.successors(p, letter):
                if q in keep and q not in ids:
                    ids[q] = len(order)
                    order.append(q)
                    queue.append(q)
    transitions = frozenset(
        (ids[p], letter, ids[q])
        for p, letter, q in a.transitions
        if p in ids and q in ids
    )
    finals = frozenset(ids[q] for q in a.finals if q in ids)
    return type(a)(a.alphabet, len(order), 0, finals, transitions)


def _reachable(a: BarNfa) -> set:
    seen = {a.initial}
    stack = [a.initial]
    while stack:
        p = stack.pop()
        for letter in a.letters:
            for q in a.successors(p, letter):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
    return seen


def trim(a: BarNfa) -> BarNfa:
    """Drop states that are unreachable or cannot reach a final state.

    For Büchi automata a state is kept only if it can reach a final state
    lying on a cycle.
    """
    reach = _reachable(a)
    targets = set(a.finals)
    if isinstance(a, BarBuchi):
        targets = {f for f in a.finals & reach if _on_cycle(a, f)}
    back: dict = {}
    for p, _, q in a.transitions:
        back.setdefault(q, set()).add(p)
    co = set(targets)
    stack = list(targets)
    while stack:
        q = stack.pop()
        for p in back.get(q, ()):
            if p not in co:
                co.add(p)
                stack.append(p)
    useful = reach & co
    if a.initial not in useful:
        return empty_automaton(a.alphabet, type(a))
    return _renumber(a, useful)


def _on_cycle(a: BarNfa, f: int) -> bool:
    seen: set = set()
    stack = [q for letter in a.letters for q in a.successors(f, letter)]
    while stack:
        p = stack.pop()
        if p == f:
            return True
        if p in seen:
            continue
        seen.add(p)
        stack.extend(q for letter in a.letters for q in a.successors(p, letter))
    return False


def determinize_word(a: BarNfa) -> BarNfa:
    """Subset construction over reachable subsets; the result is complete."""
    if isinstance(a, BarBuchi):
        raise TypeError("Büchi automata cannot be determinized by subset construction")
    a = trim(a)
    letters = a.letters
    if not a.finals:
        return BarNfa(a.alphabet, 1, 0, frozenset(), {(0, l, 0) for l in letters})
    start = frozenset([a.initial])
    ids = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for letter in letters:
            t = a.step(s, letter)
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
                queue.append(t)
            transitions.append((ids[s], letter, ids[t]))
    finals = frozenset(i for i, s in enumerate(order) if s & a.finals)
    return BarNfa(a.alphabet, len(order), 0, finals, frozenset(transitions))


def complement_word(a: BarNfa) -> BarNfa:
    if isinstance(a, BarBuchi) or not a.is_deterministic_complete():
        raise ValueError("complement needs a deterministic complete word automaton")
    return a.with_transitions(finals=frozenset(range(a.n_states)) - a.finals)


def _product_words(a: BarNfa, b: BarNfa) -> BarNfa:
    if a.alphabet != b.alphabet:
        raise ValueError("product needs equal alphabets")
    buchi = isinstance(a, BarBuchi)
    if buchi != isinstance(b, BarBuchi):
        raise TypeError("cannot mix Büchi and finite-word automata")
    letters = a.letters
    # Büchi: flag 0 waits for a final of a, flag 1 waits for a final of b
    start = (a.initial, b.initial, 0)
    ids = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        s = queue.popleft()
        p, q, flag = s
        if buchi:
            if flag == 0 and p in a.finals:
                flag = 1
            elif flag == 1 and q in b.finals:
                flag = 0
        for letter in letters:
            for p2 in a.successors(p, letter):
                for q2 in b.successors(q, letter):
                    t = (p2, q2, flag)
                    if t not in ids:
                        ids[t] = len(order)
                        order.append(t)
                        queue.append(t)
                    transitions.append((ids[s], letter, ids[t]))
    if buchi:
        finals = {i for i, (p, q, f) in enumerate(order) if f == 0 and p in a.finals}
    else:
        finals = {i for i, (p, q, f) in enumerate(order) if p in a.finals and q in b.finals}
    return type(a)(a.alphabet, len(order), 0, frozenset(finals), frozenset(transitions))


def _bfs_word(letters, start, step, accept):
    """Length-lexicographically least word leading from ``start`` into ``accept``."""
    if accept(start):
        return ()
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for letter in letters:
            t = step(s, letter)
            if t in parent:
                continue
            parent[t] = (s, letter)
            if accept(t):
                word = []
                while parent[t] is not None:
                    t, letter = parent[t]
                    word.append(letter)
                return tuple(reversed(word))
            queue.append(t)
    return None


def shortest_accepted(a):
    """Least accepted word/tree, or ``None`` if the literal language is empty."""
    if isinstance(a, BarNftaBottomUp):
        return _tree_search(
            a.signature, a.letters, a.step, lambda s: bool(s & a.finals)
        )
    if isinstance(a, BarBuchi):
        raise TypeError("use buchi_lasso_search for Büchi automata")
    a = trim(a)
    return _bfs_word(
        a.letters, frozenset([a.initial]), a.step, lambda s: bool(s & a.finals)
    )


# ---------------------------------------------------------------------------
# Büchi automata


def buchi_lasso_search(a: BarBuchi) -> Lasso | None:
    """An accepting lasso through a reachable final state, if one exists."""
    letters = a.letters
    parent = {a.initial: None}
    order = [a.initial]
    queue = deque([a.initial])
    while queue:
        p = queue.popleft()
        for letter in letters:
            for q in a.successors(p, letter):
                if q not in parent:
                    parent[q] = (p, letter)
                    order.append(q)
                    queue.append(q)
    for f in order:
        if f not in a.finals:
            continue
        loop = _cycle_through(a, f)
        if loop is None:
            continue
        stem_states, stem = [f], []
        node = f
        while parent[node] is not None:
            node, letter = parent[node]
            stem_states.append(node)
            stem.append(letter)
        loop_states, loop_letters = loop
        return Lasso(
            tuple(reversed(stem_states)), tuple(reversed(stem)), loop_states, loop_letters
        )
    return None


def _cycle_through(a: BarNfa, f: int):
    parent: dict = {}
    queue: deque = deque()
    for letter in a.letters:
        for q in a.successors(f, letter):
            if q not in parent:
                parent[q] = (f, letter)
                queue.append(q)
    while queue:
        p = queue.popleft()
        if p == f:
            break
        for letter in a.letters:
            for q in a.successors(p, letter):
                if q not in parent:
                    parent[q] = (p, letter)
                    queue.append(q)
    if f not in parent:
        return None
    states, letters = [f], []
    node = f
    while True:
        node, letter = parent[node]
        states.append(node)
        letters.append(letter)
        if node == f:
            break
    return tuple(reversed(states)), tuple(reversed(letters))


# ---------------------------------------------------------------------------
# tree automata


def tree_key(t: BarTree) -> tuple:
    """Ordering key for trees: size, then preorder ``(letter, symbol)`` sequence."""
    tokens = tuple((n.letter, n.symbol) for n in iter_nodes(t))
    return (len(tokens), tokens)


def _tree_search(signature: Signature, letters, step: Callable, accept: Callable):
    """Least tree (by :func:`tree_key`) whose deterministic state satisfies ``accept``.

    Knuth's generalisation of Dijkstra: states are settled in order of their
    least tree, composite keys dominate their children's.
    """
    counter = itertools.count()
    heap: list = []
    settled: dict = {}
    order: list = []
    leaves = [s for s, n in signature.items() if n == 0]
    inner = [(s, n) for s, n in signature.items() if n > 0]
    for sym in leaves:
        for letter in letters:
            tokens = ((letter, sym),)
            tree = BarTree(letter, sym, ())
            heapq.heappush(heap, ((1, tokens), next(counter), step(sym, letter, ()), tree))
    while heap:
        key, _, state, tree = heapq.heappop(heap)
        if state in settled:
            continue
        settled[state] = (key, tree)
        order.append(state)
        if accept(state):
            return tree
        for sym, arity in inner:
            for combo in itertools.product(order, repeat=arity):
                if state not in combo:
                    continue
                kids = [settled[c] for c in combo]
                size = 1 + sum(k[0][0] for k in kids)
                rest = tuple(tok for k in kids for tok in k[0][1])
                children = tuple(k[1] for k in kids)
                for letter in letters:
                    target = step(sym, letter, combo)
                    if target in settled:
                        continue
                    heapq.heappush(
                        heap,
                        (
                            (size, ((letter, sym),) + rest),
                            next(counter),
                            target,
                            BarTree(letter, sym, children),
                        ),
                    )
    return None


def _saturate(signature: Signature, letters, start_rules: Callable):
    """Bottom-up saturation; ``start_rules(sym, letter, combo)`` yields target states.

    Returns (ordered states, list of (sym, letter, combo, target)).
    """
    order: list = []
    ids: dict = {}
    edges = []
    done: set = set()

    def add(s) -> None:
        if s not in ids:
            ids[s] = len(order)
            order.append(s)

    while True:
        before = len(order)
        for sym, arity in signature.items():
            for combo in itertools.product(range(len(order)), repeat=arity):
                for letter in letters:
                    key = (sym, letter, combo)
                    if key in done:
                        continue
                    done.add(key)
                    for target in start_rules(sym, letter, tuple(order[i] for i in combo)):
                        add(target)
                        edges.append((sym, letter, combo, target))
        if len(order) == before:
            break
    return order, ids, edges


def trim_tree(a: BarNftaBottomUp) -> BarNftaBottomUp:
    """Keep productive states from which a final state is reachable upwards."""
    productive: set = set()
    changed = True
    while changed:
        changed = False
        for sym, letter, children, target in a.rules:
            if target not in productive and all(c in productive for c in children):
                productive.add(target)
                changed = True
    live_rules = [r for r in a.rules if r[3] in productive and all(c in productive for c in r[2])]
    useful = set(a.finals & productive)
    changed = True
    while changed:
        changed = False
        for sym, letter, children, target in live_rules:
            if target in useful:
                for c in children:
                    if c not in useful:
                        useful.add(c)
                        changed = True
    keep = productive & useful
    # renumber in saturation order
    ids: dict = {}
    rules = sorted(r for r in live_rules if r[3] in keep and all(c in keep for c in r[2]))
    changed = True
    while changed:
        changed = False
        for sym, letter, children, target in rules:
            if target not in ids and all(c in ids for c in children):
                ids[target] = len(ids)
                changed = True
    new_rules = frozenset(
        (sym, letter, tuple(ids[c] for c in children), ids[target])
        for sym, letter, children, target in rules
    )
    finals = frozenset(ids[q] for q in a.finals if q in ids)
    return BarNftaBottomUp(a.alphabet, a.signature, len(ids), finals, new_rules)


def determinize_tree(a: BarNftaBottomUp) -> BarNftaBottomUp:
    """Bottom-up subset construction; only reachable subsets are built."""
    a = trim_tree(a)
    order, ids, edges = _saturate(
        a.signature, a.letters, lambda sym, letter, sets: [a.step(sym, letter, sets)]
    )
    rules = frozenset((sym, letter, combo, ids[t]) for sym, letter, combo, t in edges)
    finals = frozenset(i for i, s in enumerate(order) if s & a.finals)
    return BarNftaBottomUp(a.alphabet, a.signature, len(order), finals, rules)


def complement_tree(a: BarNftaBottomUp) -> BarNftaBottomUp:
    if not a.is_deterministic_complete():
        raise ValueError("complement needs a deterministic complete tree automaton")
    return BarNftaBottomUp(
        a.alphabet, a.signature, a.n_states, frozenset(range(a.n_states)) - a.finals, a.rules
    )


def _product_trees(a: BarNftaBottomUp, b: BarNftaBottomUp) -> BarNftaBottomUp:
    if a.alphabet != b.alphabet or a.signature != b.signature:
        raise ValueError("product needs equal alphabets and signatures")

    def rules(sym, letter, pairs):
        left = [q for ch, q in a.index.get((sym, letter), ()) if ch == tuple(p for p, _ in pairs)]
        right = [q for ch, q in b.index.get((sym, letter), ()) if ch == tuple(q for _, q in pairs)]
        return [(p, q) for p in left for q in right]

    order, ids, edges = _saturate(a.signature, a.letters, rules)
    new_rules = frozenset((sym, letter, combo, ids[t]) for sym, letter, combo, t in edges)
    finals = frozenset(i for i, (p, q) in enumerate(order) if p in a.finals and q in b.finals)
    return BarNftaBottomUp(a.alphabet, a.signature, len(order), finals, new_rules)


def product_intersection(a, b):
    if isinstance(a, BarNftaBottomUp) and isinstance(b, BarNftaBottomUp):
        return _product_trees(a, b)
    if isinstance(a, BarNfa) and isinstance(b, BarNfa):
        return _product_words(a, b)
    raise TypeError("product of automata of different kinds")


def shortest_in_symmetric_difference(a, b):
    """Least word/tree accepted by exactly one of ``a`` and ``b``, else ``None``.

    Both automata are trimmed and determinized lazily inside the search.
    Letters missing from one automaton's alphabet lead to rejection there.
    """
    if isinstance(a, BarNftaBottomUp):
        if a.signature != b.signature:
            raise ValueError("signatures differ")
        a, b = trim_tree(a), trim_tree(b)
        letters = tuple(sorted(a.alphabet | b.alphabet))
        return _tree_search(
            a.signature,
            letters,
            lambda sym, letter, combo: (
                a.step(sym, letter, tuple(c[0] for c in combo)),
                b.step(sym, letter, tuple(c[1] for c in combo)),
            ),
            lambda s: bool(s[0] & a.finals) != bool(s[1] & b.finals),
        )
    if isinstance(a, BarBuchi) or isinstance(b, BarBuchi):
        raise TypeError("Büchi language equality is not supported")
    a, b = trim(a), trim(b)
    letters = tuple(sorted(a.alphabet | b.alphabet))
    return _bfs_word(
        letters,
        (frozenset([a.initial]), frozenset([b.initial])),
        lambda s, letter: (a.step(s[0], letter), b.step(s[1], letter)),
        lambda s: bool(s[0] & a.finals) != bool(s[1] & b.finals),
    )


def shortest_in_difference(a, b):
    """Least word/tree accepted by ``a`` and rejected by ``b``, else ``None``.

    Only letters of ``a`` are explored, so ``b`` is determinized just along
    prefixes that ``a`` can read.
    """
    if isinstance(a, BarNftaBottomUp):
        if a.signature != b.signature:
            raise ValueError("signatures differ")
        a, b = trim_tree(a), trim_tree(b)
        return _tree_search(
            a.signature,
            tuple(sorted(a.alphabet)),
            lambda sym, letter, combo: _unless_dead(
                a.step(sym, letter, tuple(c[0] for c in combo)),
                lambda: b.step(sym, letter, tuple(c[1] for c in combo)),
            ),
            lambda s: bool(s[0] & a.finals) and not s[1] & b.finals,
        )
    if isinstance(a, BarBuchi) or isinstance(b, BarBuchi):
        raise TypeError("Büchi language inclusion is not supported")
    a, b = trim(a), trim(b)
    return _bfs_word(
        tuple(sorted(a.alphabet)),
        (frozenset([a.initial]), frozenset([b.initial])),
        lambda s, letter: _unless_dead(a.step(s[0], letter), lambda: b.step(s[1], letter)),
        lambda s: bool(s[0] & a.finals) and not s[1] & b.finals,
    )


_DEAD = (frozenset(), frozenset())


def _unless_dead(left: frozenset, right):
    # once ``a`` has no run left, the ``b`` side no longer matters
    return (left, right()) if left else _DEAD


def topdown_of_bottomup(a: BarNftaBottomUp) -> BarNftaTopDown:
    """Reverse the rules; several (or no) final states get a fresh initial state."""
    rules = {(t, letter, sym, ch) for sym, letter, ch, t in a.rules}
    if len(a.finals) == 1:
        (initial,) = a.finals
        return BarNftaTopDown(a.alphabet, a.signature, a.n_states, initial, frozenset(rules))
    fresh = a.n_states
    rules |= {(fresh, letter, sym, ch) for sym, letter, ch, t in a.rules if t in a.finals}
    return BarNftaTopDown(a.alphabet, a.signature, a.n_states + 1, fresh, frozenset(rules))


def bottomup_of_topdown(a: BarNftaTopDown) -> BarNftaBottomUp:
    rules = frozenset((sym, letter, ch, q) for q, letter, sym, ch in a.rules)
    return BarNftaBottomUp(a.alphabet, a.signature, a.n_states, frozenset([a.initial]), rules)


# ---------------------------------------------------------------------------
# singletons and alphabet restriction


def singleton_automaton(x, alphabet: Iterable[Letter], signature: Signature | None = None):
    """Automaton accepting exactly ``x`` (string, ultimately periodic word or tree)."""
    alphabet = frozenset(alphabet)
    missing = letters_of(x) - alphabet
    if missing:
        raise ValueError(f"letters {sorted(map(str, missing))} not in alphabet")
    if isinstance(x, BarTree):
        nodes = list(iter_nodes(x))
        ids = {id(n): i for i, n in enumerate(nodes)}
        if signature is None:
            signature = Signature(tuple({(n.symbol, len(n.children)) for n in nodes}))
        rules = frozenset(
            (n.symbol, n.letter, tuple(ids[id(c)] for c in n.children), ids[id(n)])
            for n in nodes
        )
        return BarNftaBottomUp(alphabet, signature, len(nodes), frozenset([0]), rules)
    if isinstance(x, UltPeriodicWord):
        u, v = x.stem, x.loop
        transitions = {(i, letter, i + 1) for i, letter in enumerate(u)}
        base = len(u)
        for j, letter in enumerate(v):
            target = base + j + 1 if j + 1 < len(v) else base
            transitions.add((base + j, letter, target))
        return BarBuchi(alphabet, len(u) + len(v), 0, frozenset([base]), frozenset(transitions))
    transitions = frozenset((i, letter, i + 1) for i, letter in enumerate(x))
    return BarNfa(alphabet, len(x) + 1, 0, frozenset([len(x)]), transitions)


def restrict_alphabet(a, alphabet: Iterable[Letter]):
    """Drop every transition/rule reading a letter outside ``alphabet``."""
    alphabet = frozenset(alphabet)
    if isinstance(a, BarNftaBottomUp):
        rules = frozenset(r for r in a.rules if r[1] in alphabet)
        return BarNftaBottomUp(alphabet, a.signature, a.n_states, a.finals, rules)
    transitions = frozenset(t for t in a.transitions if t[1] in alphabet)
    return a.with_transitions(alphabet=alphabet, transitions=transitions)
