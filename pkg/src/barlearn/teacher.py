"""A simulated α-teacher backed by a hidden bar automaton.

Why equivalence checking is sound: ``Lα(X)`` is the α-closure of
``L0(X)``, so ``Lα(H) = Lα(T)`` iff ``L0(H) ⊆ Lα(T)`` and
``L0(T) ⊆ Lα(H)``. Words of ``L0(H)`` use only letters of ``H``, and on
those words ``Lα(T)`` is the literal language of ``close(T, letters(H))``;
symmetrically for the other inclusion. Two one-sided searches therefore
decide equality, and any word they find lies in one bar language but not
the other, so it is a genuine counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .automata import (
    BarBuchi,
    BarNfa,
    BarNftaBottomUp,
    buchi_lasso_search,
    literal_member_tree,
    literal_member_word,
    product_intersection,
    shortest_in_difference,
    shortest_in_symmetric_difference,
    singleton_automaton,
    tree_key,
)
from .closure import close
from .nominal import (
    BarTree,
    Letter,
    UltPeriodicWord,
    alpha_eq_up,
    fresh_names,
    letters_of,
    names_of,
)

__all__ = [
    "HiddenTarget",
    "AdversaryConfig",
    "SimulatedTeacher",
    "RestrictionTeacher",
    "sim_mq",
    "sim_mq_up",
    "sim_eq",
    "adversarial_rename",
]


@dataclass
class HiddenTarget:
    """The hidden automaton; closures are cached per target alphabet."""

    hidden: BarNfa | BarNftaBottomUp
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def alphabet(self) -> frozenset:
        return self.hidden.alphabet

    def closed_over(self, letters: Iterable[Letter]):
        target = self.alphabet | frozenset(letters)
        if target not in self._cache:
            self._cache[target] = close(self.hidden, target, name_dropping=False)
        return self._cache[target]


@dataclass(frozen=True)
class AdversaryConfig:
    """``mode`` is ``"off"`` or ``"rename"`` (bound names moved outside ``U``)."""

    mode: str = "off"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("off", "rename"):
            raise ValueError(f"unknown adversary mode {self.mode!r}")


def _member(a, x) -> bool:
    if isinstance(x, BarTree):
        return literal_member_tree(a, x)
    return literal_member_word(a, x)


def sim_mq(target: HiddenTarget, w) -> bool:
    """Whether ``w`` belongs to the bar language of the hidden automaton."""
    if isinstance(target.hidden, BarBuchi):
        raise TypeError("use sim_mq_up for Büchi targets")
    return _member(target.closed_over(letters_of(w)), w)


def sim_mq_up(target: HiddenTarget, x: UltPeriodicWord) -> bool:
    """Membership of ``stem·loop^ω`` in the bar language of a hidden Büchi automaton."""
    if not isinstance(target.hidden, BarBuchi):
        raise TypeError("sim_mq_up needs a Büchi target")
    closed = target.closed_over(letters_of(x))
    lasso = buchi_lasso_search(product_intersection(closed, singleton_automaton(x, closed.alphabet)))
    if lasso is None:
        return False
    if not alpha_eq_up(lasso.word, x):
        raise AssertionError("product lasso does not spell the queried word")
    return True


def adversarial_rename(c, universe: Iterable[Letter], seed: int = 0):
    """Rename every binder of ``c`` to a distinct fresh name outside ``universe``.

    The fresh names ``z1, z2, ..`` are assigned to binders (in preorder) in
    an order shuffled by ``seed``. Free names are untouched, so the α-class
    is preserved.
    """
    avoid = {l.name for l in universe} | names_of(c)
    if isinstance(c, BarTree):
        from .nominal import iter_nodes

        n_bars = sum(1 for n in iter_nodes(c) if n.letter.bar)
    else:
        n_bars = sum(1 for l in c if l.bar)
    gen = fresh_names(avoid, prefix="z")
    names = [next(gen) for _ in range(n_bars)]
    order = np.random.default_rng(seed).permutation(n_bars) if n_bars else []
    pool = iter([names[i] for i in order])
    if isinstance(c, BarTree):
        return _rename_tree(c, pool)
    scope: dict = {}
    out = []
    for l in c:
        if l.bar:
            scope[l.name] = next(pool)
            out.append(Letter(scope[l.name], True))
        else:
            out.append(Letter(scope.get(l.name, l.name), False))
    return tuple(out)


def _rename_tree(t: BarTree, pool) -> BarTree:
    letters = []
    stack = [(t, {})]
    while stack:
        node, scope = stack.pop()
        if node.letter.bar:
            scope = {**scope, node.letter.name: next(pool)}
            letters.append(Letter(scope[node.letter.name], True))
        else:
            letters.append(Letter(scope.get(node.letter.name, node.letter.name), False))
        stack.extend((child, scope) for child in reversed(node.children))
    preorder = iter(letters)

    def rebuild(node: BarTree) -> BarTree:
        letter = next(preorder)
        return BarTree(letter, node.symbol, tuple(rebuild(ch) for ch in node.children))

    return rebuild(t)


def sim_eq(target: HiddenTarget, hypothesis, adversary: AdversaryConfig = AdversaryConfig()):
    """``None`` if the bar languages agree, else a word/tree in their symmetric difference.

    The least witness of the two inclusion checks is returned (see the
    module docstring), optionally renamed by the adversary.
    """
    if isinstance(hypothesis, BarBuchi) or isinstance(target.hidden, BarBuchi):
        raise TypeError("equivalence of Büchi automata is not supported")
    universe = target.alphabet | hypothesis.alphabet
    # closed_over(U) restricted to letters of H is close(T, letters(H))
    spurious = shortest_in_difference(hypothesis, target.closed_over(universe))
    closed_h = close(hypothesis, target.alphabet, name_dropping=False)
    missing = shortest_in_difference(target.hidden, closed_h)
    found = [w for w in (spurious, missing) if w is not None]
    if not found:
        return None
    key = tree_key if isinstance(found[0], BarTree) else (lambda w: (len(w), w))
    witness = min(found, key=key)
    if adversary.mode == "off":
        return witness
    return adversarial_rename(witness, universe, adversary.seed)


class SimulatedTeacher:
    """α-teacher with query counters: ``mq_alpha``/``eq_alpha`` over a hidden target."""

    def __init__(self, hidden, adversary: AdversaryConfig = AdversaryConfig()):
        self.target = hidden if isinstance(hidden, HiddenTarget) else HiddenTarget(hidden)
        self.adversary = adversary
        self.mq_count = 0
        self.eq_count = 0

    def mq_alpha(self, x) -> bool:
        self.mq_count += 1
        if isinstance(x, UltPeriodicWord):
            return sim_mq_up(self.target, x)
        return sim_mq(self.target, x)

    def eq_alpha(self, hypothesis):
        self.eq_count += 1
        return sim_eq(self.target, hypothesis, self.adversary)


class RestrictionTeacher:
    """Classical teacher for the hidden bar language restricted to ``alphabet``.

    Optionally replays a list of counterexamples, each used only while it
    still lies in the symmetric difference; otherwise the least literal
    witness is returned. Replaying the counterexamples of another session
    makes the two sessions directly comparable.
    """

    def __init__(self, hidden, alphabet: Iterable[Letter], replay: Iterable = ()):
        self.target = hidden if isinstance(hidden, HiddenTarget) else HiddenTarget(hidden)
        self.alphabet = frozenset(alphabet)
        self.restricted = close(self.target.hidden, self.alphabet, name_dropping=False)
        self.replay = list(replay)
        self.mq_count = 0
        self.eq_count = 0

    def mq(self, x) -> bool:
        self.mq_count += 1
        if not letters_of(x) <= self.alphabet:
            return False
        return _member(self.restricted, x)

    def eq(self, hypothesis) -> Optional[object]:
        self.eq_count += 1
        while self.replay:
            c = self.replay.pop(0)
            if _member(hypothesis, c) != _member(self.restricted, c):
                return c
        return shortest_in_symmetric_difference(hypothesis, self.restricted)
