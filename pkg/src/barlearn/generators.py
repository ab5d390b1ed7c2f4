"""Seeded random words, trees and automata for test corpora.

All randomness comes from :func:`numpy.random.default_rng`. Use
:func:`spawn` to derive independent streams from one seed.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .automata import BarBuchi, BarNfa, BarNftaBottomUp, Signature
from .nominal import BarTree, Letter, UltPeriodicWord, bar, plain

__all__ = [
    "make_rng",
    "spawn",
    "letters_over",
    "random_word",
    "random_up",
    "random_tree",
    "random_nfa",
    "random_nfta",
    "random_subset",
]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def spawn(seed: int, n: int) -> list:
    """``n`` independent generators derived from ``seed``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def letters_over(names: Sequence[str]) -> tuple:
    """Plain and bar letters over ``names``, sorted."""
    return tuple(sorted([plain(n) for n in names] + [bar(n) for n in names]))


def _pick(rng: np.random.Generator, letters: Sequence[Letter]) -> Letter:
    return letters[int(rng.integers(len(letters)))]


def random_word(rng: np.random.Generator, letters: Sequence[Letter], length: int) -> tuple:
    letters = sorted(letters)
    return tuple(_pick(rng, letters) for _ in range(length))


def random_up(
    rng: np.random.Generator, letters: Sequence[Letter], max_stem: int, max_loop: int
) -> UltPeriodicWord:
    stem = random_word(rng, letters, int(rng.integers(0, max_stem + 1)))
    loop = random_word(rng, letters, int(rng.integers(1, max_loop + 1)))
    return UltPeriodicWord(stem, loop)


def random_tree(
    rng: np.random.Generator, signature, letters: Sequence[Letter], max_depth: int
) -> BarTree:
    """A random tree of depth at most ``max_depth`` (a leaf has depth 1)."""
    sig = Signature.of(signature)
    letters = sorted(letters)
    leaves = [s for s, n in sig.items() if n == 0]
    if not leaves:
        raise ValueError("signature has no nullary symbol")
    if max_depth <= 1:
        choices = leaves
    else:
        choices = [s for s, _ in sig.items()]
    sym = choices[int(rng.integers(len(choices)))]
    kids = tuple(random_tree(rng, sig, letters, max_depth - 1) for _ in range(sig[sym]))
    return BarTree(_pick(rng, letters), sym, kids)


def random_subset(rng: np.random.Generator, items: Sequence, min_size: int = 0) -> frozenset:
    items = sorted(items)
    while True:
        mask = rng.random(len(items)) < 0.5
        chosen = frozenset(x for x, keep in zip(items, mask) if keep)
        if len(chosen) >= min_size:
            return chosen


def random_nfa(
    rng: np.random.Generator,
    letters: Sequence[Letter],
    n_states: int,
    density: float = 0.3,
    final_prob: float = 0.4,
    buchi: bool = False,
) -> BarNfa:
    if n_states < 1:
        raise ValueError("need at least one state")
    letters = sorted(letters)
    transitions = frozenset(
        (p, l, q)
        for p in range(n_states)
        for l in letters
        for q in range(n_states)
        if rng.random() < density
    )
    finals = frozenset(q for q in range(n_states) if rng.random() < final_prob)
    cls = BarBuchi if buchi else BarNfa
    return cls(frozenset(letters), n_states, 0, finals, transitions)


def random_nfta(
    rng: np.random.Generator,
    signature,
    letters: Sequence[Letter],
    n_states: int,
    leaf_density: float = 0.35,
    density: float = 0.12,
    final_prob: float = 0.5,
) -> BarNftaBottomUp:
    import itertools

    sig = Signature.of(signature)
    letters = sorted(letters)
    rules = set()
    for sym, arity in sig.items():
        p = leaf_density if arity == 0 else density
        for letter in letters:
            for kids in itertools.product(range(n_states), repeat=arity):
                for q in range(n_states):
                    if rng.random() < p:
                        rules.add((sym, letter, kids, q))
    finals = frozenset(q for q in range(n_states) if rng.random() < final_prob)
    return BarNftaBottomUp(frozenset(letters), sig, n_states, finals, frozenset(rules))
