"""Internal MAT learners over a fixed finite alphabet.

:func:`lstar_learn` is Angluin's L* with the classical counterexample
handling (all prefixes become rows). :func:`tree_lstar_learn` is the
analogous observation-table learner for bottom-up tree automata: rows are
trees, columns are one-hole contexts, counterexamples contribute all of
their subtrees.

Both learners query each distinct word or tree at most once, and assert
that the table is closed and consistent before every equivalence query.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Protocol

from .automata import BarNfa, BarNftaBottomUp, Signature, tree_key
from .nominal import BarTree, iter_nodes

__all__ = [
    "InternalTeacher",
    "QueryStats",
    "InconsistentTeacher",
    "ObservationTable",
    "TreeObservationTable",
    "Context",
    "plug",
    "lstar_learn",
    "tree_lstar_learn",
]


class InternalTeacher(Protocol):
    def mq(self, x) -> bool: ...

    def eq(self, hypothesis) -> Optional[object]: ...


@dataclass
class QueryStats:
    membership_count: int = 0
    equivalence_count: int = 0
    restarts: int = 0

    def absorb(self, other: QueryStats) -> None:
        self.membership_count += other.membership_count
        self.equivalence_count += other.equivalence_count
        self.restarts += other.restarts


class InconsistentTeacher(RuntimeError):
    """The teacher's answers cannot come from a single language."""


def _word_key(w: tuple) -> tuple:
    return (len(w), w)


@dataclass
class ObservationTable:
    """Rows ``S`` (prefix-closed), columns ``E`` (suffix-closed), cached cells."""

    teacher: InternalTeacher
    alphabet: tuple
    stats: QueryStats = field(default_factory=QueryStats)
    rows: list = field(default_factory=lambda: [()])
    columns: list = field(default_factory=lambda: [()])
    cells: dict = field(default_factory=dict)

    def query(self, w: tuple) -> bool:
        if w not in self.cells:
            self.stats.membership_count += 1
            self.cells[w] = bool(self.teacher.mq(w))
        return self.cells[w]

    def row(self, s: tuple) -> tuple:
        return tuple(self.query(s + e) for e in self.columns)

    def add_row(self, s: tuple) -> None:
        if s not in self.rows:
            self.rows.append(s)

    def closedness_defect(self):
        """Least one-letter extension whose row is missing from ``S``."""
        known = {self.row(s) for s in self.rows}
        missing = [
            s + (a,)
            for s in self.rows
            for a in self.alphabet
            if self.row(s + (a,)) not in known
        ]
        return min(missing, key=_word_key) if missing else None

    def consistency_defect(self):
        """A new column ``a·e`` separating two equal rows, if any."""
        ordered = sorted(self.rows, key=_word_key)
        for s1, s2 in itertools.combinations(ordered, 2):
            if self.row(s1) != self.row(s2):
                continue
            for a in self.alphabet:
                for e in self.columns:
                    if self.query(s1 + (a,) + e) != self.query(s2 + (a,) + e):
                        return (a,) + e
        return None

    def is_closed(self) -> bool:
        return self.closedness_defect() is None

    def is_consistent(self) -> bool:
        return self.consistency_defect() is None

    def stabilize(self) -> None:
        while True:
            s = self.closedness_defect()
            if s is not None:
                self.add_row(s)
                continue
            e = self.consistency_defect()
            if e is not None:
                self.columns.append(e)
                continue
            return

    def hypothesis(self) -> BarNfa:
        ids: dict = {}
        for s in self.rows:
            ids.setdefault(self.row(s), len(ids))
        reps = {}
        for s in self.rows:
            reps.setdefault(self.row(s), s)
        transitions = frozenset(
            (ids[r], a, ids[self.row(s + (a,))]) for r, s in reps.items() for a in self.alphabet
        )
        finals = frozenset(i for r, i in ids.items() if r[0])
        return BarNfa(frozenset(self.alphabet), len(ids), ids[self.row(())], finals, transitions)


def lstar_learn(teacher: InternalTeacher, alphabet, max_rounds: int = 10_000):
    """Learn a complete DFA for the teacher's language over ``alphabet``."""
    from .automata import literal_member_word

    table = ObservationTable(teacher, tuple(sorted(alphabet)))
    for _ in range(max_rounds):
        table.stabilize()
        assert table.is_closed() and table.is_consistent()
        hyp = table.hypothesis()
        table.stats.equivalence_count += 1
        cex = teacher.eq(hyp)
        if cex is None:
            return hyp, table.stats
        cex = tuple(cex)
        if literal_member_word(hyp, cex) == table.query(cex):
            raise InconsistentTeacher(f"counterexample {cex} is classified correctly")
        for i in range(len(cex) + 1):
            table.add_row(cex[:i])
    raise RuntimeError("round limit reached")


# ---------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class Context:
    """A one-hole context, as frames from the root down to the hole.

    A frame ``(letter, symbol, left, right)`` is a node whose children are
    ``left``, then the hole, then ``right``.
    """

    frames: tuple = ()

    def extend(self, frame: tuple) -> Context:
        return Context(self.frames + (frame,))


def plug(ctx: Context, t: BarTree) -> BarTree:
    for letter, symbol, left, right in reversed(ctx.frames):
        t = BarTree(letter, symbol, left + (t,) + right)
    return t


@dataclass
class TreeObservationTable:
    """Rows: subtree-closed trees. Columns: contexts, starting with the hole."""

    teacher: InternalTeacher
    signature: Signature
    alphabet: tuple
    stats: QueryStats = field(default_factory=QueryStats)
    rows: list = field(default_factory=list)
    columns: list = field(default_factory=lambda: [Context()])
    cells: dict = field(default_factory=dict)

    def query(self, t: BarTree) -> bool:
        if t not in self.cells:
            self.stats.membership_count += 1
            self.cells[t] = bool(self.teacher.mq(t))
        return self.cells[t]

    def row(self, t: BarTree) -> tuple:
        return tuple(self.query(plug(c, t)) for c in self.columns)

    def add_row(self, t: BarTree) -> None:
        if t not in self.rows:
            self.rows.append(t)

    def extensions(self):
        """Trees one node above the rows: ``letter.symbol(s1, .., sn)``, ``si`` in ``S``."""
        for sym, arity in self.signature.items():
            for kids in itertools.product(self.rows, repeat=arity):
                for letter in self.alphabet:
                    yield BarTree(letter, sym, kids)

    def closedness_defect(self):
        known = {self.row(s) for s in self.rows}
        missing = [t for t in self.extensions() if self.row(t) not in known]
        return min(missing, key=tree_key) if missing else None

    def consistency_defect(self):
        """A context separating two equal rows after one more node."""
        ordered = sorted(self.rows, key=tree_key)
        for s1, s2 in itertools.combinations(ordered, 2):
            if self.row(s1) != self.row(s2):
                continue
            for sym, arity in self.signature.items():
                for pos in range(arity):
                    for others in itertools.product(self.rows, repeat=arity - 1):
                        left, right = others[:pos], others[pos:]
                        for letter in self.alphabet:
                            t1 = BarTree(letter, sym, left + (s1,) + right)
                            t2 = BarTree(letter, sym, left + (s2,) + right)
                            for c in self.columns:
                                if self.query(plug(c, t1)) != self.query(plug(c, t2)):
                                    return c.extend((letter, sym, left, right))
        return None

    def is_closed(self) -> bool:
        return self.closedness_defect() is None

    def is_consistent(self) -> bool:
        return self.consistency_defect() is None

    def stabilize(self) -> None:
        while True:
            t = self.closedness_defect()
            if t is not None:
                self.add_row(t)
                continue
            c = self.consistency_defect()
            if c is not None:
                self.columns.append(c)
                continue
            return

    def hypothesis(self) -> BarNftaBottomUp:
        ids: dict = {}
        reps: dict = {}
        for s in self.rows:
            r = self.row(s)
            if r not in ids:
                ids[r] = len(ids)
                reps[ids[r]] = s
        rules = set()
        for sym, arity in self.signature.items():
            for states in itertools.product(range(len(ids)), repeat=arity):
                kids = tuple(reps[q] for q in states)
                for letter in self.alphabet:
                    target = ids[self.row(BarTree(letter, sym, kids))]
                    rules.add((sym, letter, states, target))
        finals = frozenset(i for r, i in ids.items() if r[0])
        return BarNftaBottomUp(
            frozenset(self.alphabet), self.signature, len(ids), finals, frozenset(rules)
        )


def tree_lstar_learn(
    teacher: InternalTeacher, signature, alphabet, max_rounds: int = 10_000
):
    """Learn a complete deterministic bottom-up tree automaton."""
    from .automata import literal_member_tree

    table = TreeObservationTable(teacher, Signature.of(signature), tuple(sorted(alphabet)))
    for _ in range(max_rounds):
        table.stabilize()
        assert table.is_closed() and table.is_consistent()
        hyp = table.hypothesis()
        table.stats.equivalence_count += 1
        cex = teacher.eq(hyp)
        if cex is None:
            return hyp, table.stats
        if literal_member_tree(hyp, cex) == table.query(cex):
            raise InconsistentTeacher(f"counterexample {cex} is classified correctly")
        for node in reversed(list(iter_nodes(cex))):
            table.add_row(node)
    raise RuntimeError("round limit reached")
