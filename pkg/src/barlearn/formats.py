"""Plain-text automaton files.

Word and Büchi automata::

    alphabet: a b |a |b
    states: q0 q1 q2
    initial: q0
    final: q2
    trans: q0 |a q1
    trans: q1 a q2

Tree automata (bottom-up) add ``signature: f/2 c/0``, omit ``initial`` and
write rules as ``trans: f a q1 q2 -> q3``. Lines may come in any order,
list-valued keys may repeat, ``#`` starts a comment. Several initial states
are merged into a fresh one. Output is canonical: states renamed ``q0..``,
everything sorted.
"""

from __future__ import annotations

from .automata import BarBuchi, BarNfa, BarNftaBottomUp, Signature
from .nominal import ParseError, format_word, parse_word

__all__ = ["parse_automaton", "format_automaton", "parse_letters", "format_letters"]

_KEYS = ("alphabet", "states", "initial", "final", "trans", "signature")


def parse_letters(text: str) -> frozenset:
    return frozenset(parse_word(text.replace(",", " ")))


def format_letters(letters) -> str:
    return format_word(sorted(letters))


def _state(table: dict, token: str, line: int) -> int:
    if token not in table:
        raise ParseError(f"line {line}: undeclared state {token!r}")
    return table[token]


def parse_automaton(text: str, kind: str = "word"):
    """Parse a word (``kind="word"``), Büchi (``"buchi"``) or tree automaton.

    A ``signature`` line makes the file a tree automaton regardless of ``kind``.
    """
    entries: dict = {k: [] for k in _KEYS}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or key not in _KEYS:
            raise ParseError(f"line {number}: unknown entry {key!r}")
        entries[key].append((number, value.strip()))

    alphabet = frozenset(
        l for _, v in entries["alphabet"] for l in parse_word(v)
    )
    names = [tok for _, v in entries["states"] for tok in v.split()]
    if len(set(names)) != len(names):
        raise ParseError("duplicate state name")
    table = {name: i for i, name in enumerate(names)}
    finals = frozenset(
        _state(table, tok, n) for n, v in entries["final"] for tok in v.split()
    )
    if entries["signature"]:
        sig = Signature.of(" ".join(v for _, v in entries["signature"]))
        if entries["initial"]:
            raise ParseError("tree automata have no initial state")
        rules = set()
        for n, v in entries["trans"]:
            lhs, arrow, rhs = v.partition("->")
            tokens = lhs.split()
            if not arrow or len(tokens) < 2 or len(rhs.split()) != 1:
                raise ParseError(f"line {n}: expected 'symbol letter states -> state'")
            sym, letter = tokens[0], parse_word(tokens[1])[0]
            children = tuple(_state(table, t, n) for t in tokens[2:])
            if sym not in sig or sig[sym] != len(children):
                raise ParseError(f"line {n}: {sym}/{len(children)} not in signature")
            rules.add((sym, letter, children, _state(table, rhs.strip(), n)))
        return BarNftaBottomUp(alphabet, sig, len(names), finals, frozenset(rules))

    initials = [_state(table, tok, n) for n, v in entries["initial"] for tok in v.split()]
    if not initials:
        raise ParseError("word automata need an initial state")
    transitions = set()
    for n, v in entries["trans"]:
        tokens = v.split()
        if len(tokens) != 3:
            raise ParseError(f"line {n}: expected 'state letter state'")
        transitions.add(
            (_state(table, tokens[0], n), parse_word(tokens[1])[0], _state(table, tokens[2], n))
        )
    cls = BarBuchi if kind == "buchi" else BarNfa
    n_states = len(names)
    if len(set(initials)) == 1:
        return cls(alphabet, n_states, initials[0], finals, frozenset(transitions))
    fresh = n_states
    transitions |= {(fresh, l, q) for p, l, q in transitions if p in initials}
    # the fresh state is visited once, so Büchi acceptance does not need it
    if finals & set(initials) and cls is BarNfa:
        finals |= {fresh}
    return cls(alphabet, n_states + 1, fresh, finals, frozenset(transitions))


def format_automaton(a) -> str:
    q = lambda i: f"q{i}"  # noqa: E731
    lines = [f"alphabet: {format_letters(a.alphabet)}".rstrip()]
    if isinstance(a, BarNftaBottomUp):
        lines.append(f"signature: {a.signature}".rstrip())
    lines.append(("states: " + " ".join(q(i) for i in range(a.n_states))).rstrip())
    if not isinstance(a, BarNftaBottomUp):
        lines.append(f"initial: {q(a.initial)}")
    lines.append(("final: " + " ".join(q(i) for i in sorted(a.finals))).rstrip())
    if isinstance(a, BarNftaBottomUp):
        for sym, letter, children, target in sorted(a.rules):
            kids = "".join(f" {q(c)}" for c in children)
            lines.append(f"trans: {sym} {letter}{kids} -> {q(target)}")
    else:
        for p, letter, r in sorted(a.transitions):
            lines.append(f"trans: {q(p)} {letter} {q(r)}")
    return "\n".join(lines) + "\n"
