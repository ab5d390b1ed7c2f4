"""Small named automata used by the tests, the CLI and the documentation."""

from __future__ import annotations

from .automata import BarNfa, BarNftaBottomUp, Signature, singleton_automaton
from .nominal import bar, parse_word, plain


def binding_chain_nfa() -> BarNfa:
    """Bar NFA for ``|a* |a |b (|c+a+b)* a |c (|d+b+c)* b c``.

    Its data language under local freshness consists of the words
    ``u a b v a c w b c`` where ``b`` is fresh when read and ``c`` is
    distinct from ``b``.
    """
    a, b, c = plain("a"), plain("b"), plain("c")
    ba, bb, bc, bd = bar("a"), bar("b"), bar("c"), bar("d")
    transitions = {
        (0, ba, 0),
        (0, ba, 1),
        (1, bb, 2),
        (2, bc, 2),
        (2, a, 2),
        (2, b, 2),
        (2, a, 3),
        (3, bc, 4),
        (4, bd, 4),
        (4, b, 4),
        (4, c, 4),
        (4, b, 5),
        (5, c, 6),
    }
    alphabet = {a, b, c, ba, bb, bc, bd}
    return BarNfa(frozenset(alphabet), 7, 0, frozenset({6}), frozenset(transitions))


def single_word_nfa(text: str, extra: str = "") -> BarNfa:
    """Automaton accepting exactly the word ``text``; ``extra`` adds alphabet letters."""
    w = parse_word(text)
    return singleton_automaton(w, set(w) | set(parse_word(extra)))


def empty_nfa(letters: str = "") -> BarNfa:
    return BarNfa(frozenset(parse_word(letters)), 1, 0, frozenset(), frozenset())


def root_bar_nfta() -> BarNftaBottomUp:
    """Trees over ``f/1, c/0`` and letters ``a, |a`` whose root letter is ``|a``."""
    a, ba = plain("a"), bar("a")
    sig = Signature.of("f/1 c/0")
    rules = set()
    for letter in (a, ba):
        target = 1 if letter == ba else 0
        rules.add(("c", letter, (), target))
        for q in (0, 1):
            rules.add(("f", letter, (q,), target))
    return BarNftaBottomUp(frozenset({a, ba}), sig, 2, frozenset({1}), frozenset(rules))
