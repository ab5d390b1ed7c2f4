"""Register-based α-closure of bar automata.

A closure state pairs a source state with a register assignment: a tuple
with one slot per plain name of the source alphabet (sorted), each slot
holding a name or ``None``. Register ``i`` remembers which target name the
source name ``a_i`` currently stands for.

Reading plain ``b`` needs a register holding ``b`` and a source step on the
matching plain. Reading ``|b`` along a source bar ``|c`` moves ``b`` into the
register of ``c`` (if ``c`` has one) and clears every other register that
held ``b``. Successor assignments may be any restriction of that maximal
assignment (``name_dropping=True``). Since a larger assignment never
accepts less, ``name_dropping=False`` keeps only the maximal one and gives
the same literal language with far fewer states.

Registers range over a finite pool: the source plains plus the names of the
target alphabet. Names outside the target can never be read, so nothing
else matters.
"""

from __future__ import annotations

import itertools
from collections import deque
from math import comb, perm
from typing import Iterable

from .automata import (
    BarBuchi,
    BarNfa,
    BarNftaBottomUp,
    BarNftaTopDown,
    bottomup_of_topdown,
    buchi_lasso_search,
    literal_member_tree,
    literal_member_word,
    product_intersection,
    singleton_automaton,
    topdown_of_bottomup,
    trim_tree,
)
from .nominal import BarTree, Letter, UltPeriodicWord, bar, is_clean, letters_of, plain

__all__ = [
    "ClosureBoundError",
    "RegisterError",
    "register_names",
    "closure_bound",
    "close",
    "close_word",
    "close_buchi",
    "close_tree",
    "is_closed_automaton",
    "alpha_member",
    "data_member_local",
    "data_member_global",
]


class ClosureBoundError(RuntimeError):
    """The closure produced more states than the register bound allows."""


class RegisterError(RuntimeError):
    """A register assignment stopped being injective."""


def register_names(alphabet: Iterable[Letter]) -> tuple:
    """Sorted plain names of ``alphabet``; these index the registers."""
    return tuple(sorted({l.name for l in alphabet if not l.bar}))


def _pool(source: Iterable[Letter], target: Iterable[Letter]) -> frozenset:
    return frozenset(register_names(source)) | {l.name for l in target}


def closure_bound(n_states: int, k: int, pool_size: int) -> int:
    """``n_states`` times the number of partial injective maps ``k -> pool``."""
    return n_states * sum(comb(k, j) * perm(pool_size, j) for j in range(k + 1))


def _check_injective(r: tuple) -> None:
    held = [x for x in r if x is not None]
    if len(held) != len(set(held)):
        raise RegisterError(f"register assignment {r} is not injective")


def _restrictions(r: tuple, name_dropping: bool) -> list:
    if not name_dropping:
        return [r]
    slots = [i for i, x in enumerate(r) if x is not None]
    out = []
    for n in range(len(slots), -1, -1):
        for keep in itertools.combinations(slots, n):
            out.append(tuple(x if i in keep else None for i, x in enumerate(r)))
    return out


def _bar_max(r: tuple, slot: int | None, b: str) -> tuple:
    return tuple(
        b if i == slot else (None if x == b else x) for i, x in enumerate(r)
    )


def _check_bound(n_closure: int, n_source: int, k: int, pool: frozenset) -> None:
    bound = closure_bound(n_source, k, len(pool))
    if n_closure > bound:
        raise ClosureBoundError(f"{n_closure} closure states exceed bound {bound}")


class _Moves:
    """Successor assignments shared by the word and tree constructions.

    ``live[q]`` holds the register slots that can still be read from source
    state ``q`` before being overwritten. Other slots are cleared on entry
    to ``q``; this is one of the permitted restrictions and never changes
    the language, but it keeps the closure small.
    """

    def __init__(self, source_alphabet: frozenset, target: frozenset, name_dropping: bool, uses):
        self.regs = register_names(source_alphabet)
        self.slot = {a: i for i, a in enumerate(self.regs)}
        self.source_bars = sorted(l for l in source_alphabet if l.bar)
        self.target = tuple(sorted(target))
        self.name_dropping = name_dropping
        self.live = _liveness(self.regs, uses)

    def settle(self, q: int, r: tuple) -> tuple:
        keep = self.live.get(q, ())
        return tuple(x if i in keep else None for i, x in enumerate(r))

    def initial(self, q: int) -> tuple:
        return self.settle(q, tuple(self.regs))

    def options(self, r: tuple, letter: Letter):
        """Yield ``(source letter, successor assignments)`` for a target letter."""
        if letter.bar:
            for src in self.source_bars:
                rmax = _bar_max(r, self.slot.get(src.name), letter.name)
                yield src, _restrictions(rmax, self.name_dropping)
        else:
            for i, x in enumerate(r):
                if x == letter.name:
                    yield plain(self.regs[i]), _restrictions(r, self.name_dropping)


def _liveness(regs: tuple, uses) -> dict:
    """Slots readable from each state; ``uses`` lists ``(state, letter, successors)``."""
    live: dict = {}
    for i, name in enumerate(regs):
        reads, blocks = plain(name), bar(name)
        found = {q for q, letter, _ in uses if letter == reads}
        changed = True
        while changed:
            changed = False
            for q, letter, succ in uses:
                if q not in found and letter != blocks and any(s in found for s in succ):
                    found.add(q)
                    changed = True
        for q in found:
            live.setdefault(q, set()).add(i)
    return live


def _close_words(a: BarNfa, target: frozenset, name_dropping: bool) -> BarNfa:
    uses = [(p, letter, (q,)) for p, letter, q in a.transitions]
    moves = _Moves(a.alphabet, target, name_dropping, uses)
    start = (a.initial, moves.initial(a.initial))
    ids = {start: 0}
    order = [start]
    transitions = set()
    queue = deque([start])
    while queue:
        state = queue.popleft()
        q, r = state
        for letter in moves.target:
            for src, successors in moves.options(r, letter):
                for q2 in a.successors(q, src):
                    for r2 in successors:
                        nxt = (q2, moves.settle(q2, r2))
                        if nxt not in ids:
                            _check_injective(nxt[1])
                            ids[nxt] = len(order)
                            order.append(nxt)
                            queue.append(nxt)
                        transitions.add((ids[state], letter, ids[nxt]))
    _check_bound(len(order), a.n_states, len(moves.regs), _pool(a.alphabet, target))
    finals = frozenset(i for i, (q, _) in enumerate(order) if q in a.finals)
    return type(a)(target, len(order), 0, finals, frozenset(transitions))


def close_word(a: BarNfa, target: Iterable[Letter], name_dropping: bool = True) -> BarNfa:
    """Finite-word automaton over ``target`` accepting the α-closure of ``L0(a)``.

    Words over ``target`` are accepted iff they are α-equivalent to some word
    literally accepted by ``a``.
    """
    if isinstance(a, BarBuchi):
        raise TypeError("use close_buchi for Büchi automata")
    return _close_words(a, frozenset(target), name_dropping)


def close_buchi(a: BarBuchi, target: Iterable[Letter], name_dropping: bool = True) -> BarBuchi:
    """Büchi automaton over ``target`` accepting the α-closure of ``L0(a)``."""
    if not isinstance(a, BarBuchi):
        raise TypeError("close_buchi needs a Büchi automaton")
    return _close_words(a, frozenset(target), name_dropping)


def close_tree(
    a: BarNftaBottomUp, target: Iterable[Letter], name_dropping: bool = True
) -> BarNftaBottomUp:
    """Bottom-up tree automaton over ``target`` accepting the α-closure of ``L0(a)``.

    Works top-down: every child of a node inherits (a restriction of) the
    assignment reached after the node's own letter.
    """
    target = frozenset(target)
    top = topdown_of_bottomup(a)
    uses = [(q, letter, children) for q, letter, _, children in top.rules]
    moves = _Moves(a.alphabet, target, name_dropping, uses)
    start = (top.initial, moves.initial(top.initial))
    ids = {start: 0}
    order = [start]
    rules = set()
    queue = deque([start])
    by_state: dict = {}
    for q, letter, sym, children in sorted(top.rules):
        by_state.setdefault((q, letter), []).append((sym, children))
    while queue:
        state = queue.popleft()
        q, r = state
        for letter in moves.target:
            for src, successors in moves.options(r, letter):
                for sym, children in by_state.get((q, src), ()):
                    per_child = [
                        [(c, moves.settle(c, r2)) for r2 in successors] for c in children
                    ]
                    for combo in itertools.product(*per_child):
                        child_ids = []
                        for nxt in combo:
                            if nxt not in ids:
                                _check_injective(nxt[1])
                                ids[nxt] = len(order)
                                order.append(nxt)
                                queue.append(nxt)
                            child_ids.append(ids[nxt])
                        rules.add((ids[state], letter, sym, tuple(child_ids)))
    _check_bound(len(order), top.n_states, len(moves.regs), _pool(a.alphabet, target))
    closed_top = BarNftaTopDown(target, a.signature, len(order), 0, frozenset(rules))
    return trim_tree(bottomup_of_topdown(closed_top))


def close(a, target: Iterable[Letter], name_dropping: bool = True):
    """Dispatch to the word, Büchi or tree closure."""
    if isinstance(a, BarNftaBottomUp):
        return close_tree(a, target, name_dropping)
    if isinstance(a, BarBuchi):
        return close_buchi(a, target, name_dropping)
    return close_word(a, target, name_dropping)


def is_closed_automaton(a) -> bool:
    """Whether ``L0(a)`` already equals the α-closure restricted to ``a.alphabet``."""
    from .automata import shortest_in_symmetric_difference

    if isinstance(a, BarBuchi):
        raise TypeError("closedness of Büchi automata is not decidable here")
    closed = close(a, a.alphabet, name_dropping=False)
    return shortest_in_symmetric_difference(a, closed) is None


def alpha_member(a, x) -> bool:
    """Whether ``x`` is α-equivalent to a word/tree literally accepted by ``a``."""
    target = a.alphabet | letters_of(x)
    closed = close(a, target, name_dropping=False)
    if isinstance(x, UltPeriodicWord):
        single = singleton_automaton(x, target)
        return buchi_lasso_search(product_intersection(closed, single)) is not None
    if isinstance(x, BarTree):
        return literal_member_tree(closed, x)
    return literal_member_word(closed, x)


def _barrings(u, max_size: int):
    """All bar strings/trees whose underlying data word/tree is ``u``."""
    if isinstance(u, BarTree):
        from .nominal import iter_nodes

        nodes = list(iter_nodes(u))
        if len(nodes) > max_size:
            raise ValueError(f"data tree of size {len(nodes)} exceeds bound {max_size}")
        for pattern in itertools.product((False, True), repeat=len(nodes)):
            flags = iter(pattern)
            yield _rebar(u, flags)
        return
    names = [l.name if isinstance(l, Letter) else l for l in u]
    if len(names) > max_size:
        raise ValueError(f"data word of length {len(names)} exceeds bound {max_size}")
    for pattern in itertools.product((False, True), repeat=len(names)):
        yield tuple(Letter(n, b) for n, b in zip(names, pattern))


def _rebar(t: BarTree, flags) -> BarTree:
    letter = Letter(t.letter.name, next(flags))
    return BarTree(letter, t.symbol, tuple(_rebar(c, flags) for c in t.children))


def _data_member(a, u, max_size: int, clean: bool) -> bool:
    candidates = list(_barrings(u, max_size))
    names = {l.name for c in candidates[:1] for l in letters_of(c)}
    target = a.alphabet | {plain(n) for n in names} | {bar(n) for n in names}
    closed = close(a, target, name_dropping=False)
    member = literal_member_tree if isinstance(a, BarNftaBottomUp) else literal_member_word
    for w in candidates:
        if clean and not _is_clean_any(w):
            continue
        if member(closed, w):
            return True
    return False


def _is_clean_any(w) -> bool:
    if isinstance(w, BarTree):
        from .nominal import free_names_tree, iter_nodes

        bound = [n.letter.name for n in iter_nodes(w) if n.letter.bar]
        return len(bound) == len(set(bound)) and not set(bound) & free_names_tree(w)
    return is_clean(w)


def data_member_local(a, u, max_size: int = 12) -> bool:
    """Local freshness: some barring of ``u`` lies in the bar language of ``a``.

    ``u`` is a sequence of names (or plain letters) or a tree whose letter
    bars are ignored.
    """
    return _data_member(a, u, max_size, clean=False)


def data_member_global(a, u, max_size: int = 12) -> bool:
    """Global freshness: as :func:`data_member_local` but the barring must be clean."""
    return _data_member(a, u, max_size, clean=True)
