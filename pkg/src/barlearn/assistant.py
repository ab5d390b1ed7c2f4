"""The teaching assistant and the outer learner for bar languages.

The assistant sits between a classical learner over a finite alphabet
``A0`` and an α-teacher. Membership and equivalence queries go to the
teacher unchanged. A counterexample from the teacher may use names outside
``A0``, so the assistant replaces it by an α-equivalent word over ``A0``
(its representative) and then, when the hypothesis accepts some
α-variant of it, hands back that variant instead. Either way the learner
receives a word on which its hypothesis and ``L_T`` restricted to ``A0``
disagree.

Every step is done with closure automata, so results are deterministic:
representatives and witnesses are the least ones in the automata order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Protocol

from .automata import (
    BarBuchi,
    BarNftaBottomUp,
    Signature,
    buchi_lasso_search,
    product_intersection,
    shortest_accepted,
    singleton_automaton,
)
from .closure import close
from .learners import QueryStats, lstar_learn, tree_lstar_learn
from .nominal import (
    BarTree,
    Letter,
    UltPeriodicWord,
    alpha_eq_string,
    alpha_eq_tree,
    alpha_eq_up,
    bar,
    free_names,
    free_names_tree,
    free_names_up,
    iter_nodes,
    letters_of,
    names_of,
    plain,
    tree_size,
)

__all__ = [
    "AlphaTeacher",
    "AlphabetTooSmall",
    "LimitExceeded",
    "TaConfig",
    "LearningResult",
    "TeachingAssistant",
    "representative",
    "representative_word",
    "representative_tree",
    "representative_up",
    "alpha_witness_in_hypothesis",
    "ta_process_counterexample",
    "learn_bar_language",
    "minimal_extension",
    "minimal_extension_up",
    "learn_unknown_alphabet",
]


class AlphaTeacher(Protocol):
    def mq_alpha(self, x) -> bool: ...

    def eq_alpha(self, hypothesis) -> Optional[object]: ...


class AlphabetTooSmall(Exception):
    """No α-variant of ``witness`` exists over the current alphabet."""

    def __init__(self, witness, alphabet: frozenset):
        super().__init__(f"no representative over an alphabet of {len(alphabet)} letters")
        self.witness = witness
        self.alphabet = alphabet
        self.stats = QueryStats()


class LimitExceeded(RuntimeError):
    """A configured limit (counterexample size, restarts) was exceeded."""


@dataclass(frozen=True)
class TaConfig:
    initial_alphabet: frozenset = frozenset()
    learner: str = "lstar"
    max_counterexample_size: int = 64
    max_restarts: int = 32
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "initial_alphabet", frozenset(self.initial_alphabet))
        if self.learner != "lstar":
            raise ValueError(f"unknown internal learner {self.learner!r}")
        if self.max_counterexample_size < 1 or self.max_restarts < 1:
            raise ValueError("limits must be positive")


@dataclass
class LearningResult:
    automaton: object
    stats: QueryStats
    alphabet: frozenset
    counterexamples: list = field(default_factory=list)
    alphabet_history: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# step 1: representatives over A0


def representative_word(w, alphabet: Iterable[Letter]):
    """Least word over ``alphabet`` α-equivalent to ``w``, or ``None``."""
    alphabet = frozenset(alphabet)
    single = singleton_automaton(tuple(w), alphabet | letters_of(w))
    return shortest_accepted(close(single, alphabet, name_dropping=False))


def representative_tree(t: BarTree, alphabet: Iterable[Letter], signature=None):
    """Least tree over ``alphabet`` α-equivalent to ``t``, or ``None``."""
    alphabet = frozenset(alphabet)
    single = singleton_automaton(t, alphabet | letters_of(t), signature)
    return shortest_accepted(close(single, alphabet, name_dropping=False))


def representative_up(x: UltPeriodicWord, alphabet: Iterable[Letter]):
    """An ultimately periodic word over ``alphabet`` α-equivalent to ``x``, or ``None``."""
    alphabet = frozenset(alphabet)
    single = singleton_automaton(x, alphabet | letters_of(x))
    lasso = buchi_lasso_search(close(single, alphabet, name_dropping=False))
    if lasso is None:
        return None
    found = lasso.word
    if not alpha_eq_up(found, x):
        raise AssertionError("closure lasso is not α-equivalent to its source")
    return found


def representative(x, alphabet: Iterable[Letter], signature=None):
    if isinstance(x, UltPeriodicWord):
        return representative_up(x, alphabet)
    if isinstance(x, BarTree):
        return representative_tree(x, alphabet, signature)
    return representative_word(x, alphabet)


# ---------------------------------------------------------------------------
# step 2: α-membership with a witness in the hypothesis


def alpha_witness_in_hypothesis(hypothesis, w):
    """A word/tree literally accepted by ``hypothesis`` and α-equivalent to ``w``."""
    alphabet = hypothesis.alphabet
    signature = hypothesis.signature if isinstance(hypothesis, BarNftaBottomUp) else None
    single = singleton_automaton(w, alphabet | letters_of(w), signature)
    variants = close(single, alphabet, name_dropping=False)
    both = product_intersection(variants, hypothesis)
    if isinstance(hypothesis, BarBuchi):
        lasso = buchi_lasso_search(both)
        if lasso is None:
            return None
        if not alpha_eq_up(lasso.word, w):
            raise AssertionError("product lasso is not α-equivalent to the query")
        return lasso.word
    found = shortest_accepted(both)
    if found is not None:
        same = alpha_eq_tree if isinstance(found, BarTree) else alpha_eq_string
        if not same(found, w):
            raise AssertionError("product witness is not α-equivalent to the query")
    return found


def ta_process_counterexample(hypothesis, witness, alphabet: Iterable[Letter]):
    """Turn an α-level counterexample into one over ``alphabet`` for the learner.

    If the hypothesis accepts an α-variant of the witness, that variant is
    returned (the hypothesis wrongly accepts it). Otherwise the
    representative is returned (the hypothesis wrongly rejects it).
    """
    alphabet = frozenset(alphabet)
    signature = hypothesis.signature if isinstance(hypothesis, BarNftaBottomUp) else None
    rep = representative(witness, alphabet, signature)
    if rep is None:
        raise AlphabetTooSmall(witness, alphabet)
    accepted = alpha_witness_in_hypothesis(hypothesis, rep)
    return rep if accepted is None else accepted


# ---------------------------------------------------------------------------
# the learning loop


def _size(x) -> int:
    if isinstance(x, BarTree):
        return tree_size(x)
    if isinstance(x, UltPeriodicWord):
        return len(x.stem) + len(x.loop)
    return len(x)


class TeachingAssistant:
    """Internal teacher for the classical learner, backed by an α-teacher."""

    def __init__(self, teacher: AlphaTeacher, alphabet: Iterable[Letter], config: TaConfig):
        self.teacher = teacher
        self.alphabet = frozenset(alphabet)
        self.config = config
        self.stats = QueryStats()
        self.counterexamples: list = []

    def mq(self, x) -> bool:
        self.stats.membership_count += 1
        return self.teacher.mq_alpha(x)

    def eq(self, hypothesis):
        self.stats.equivalence_count += 1
        witness = self.teacher.eq_alpha(hypothesis)
        if witness is None:
            return None
        if _size(witness) > self.config.max_counterexample_size:
            raise LimitExceeded(f"counterexample of size {_size(witness)} exceeds limit")
        try:
            processed = ta_process_counterexample(hypothesis, witness, self.alphabet)
        except AlphabetTooSmall as small:
            small.stats = self.stats
            raise
        self.counterexamples.append(processed)
        return processed


def learn_bar_language(
    teacher: AlphaTeacher,
    alphabet: Iterable[Letter],
    kind: str = "word",
    config: TaConfig = TaConfig(),
    signature=None,
) -> LearningResult:
    """Learn a bar automaton over ``alphabet`` whose bar language is ``L_T``.

    Raises :class:`AlphabetTooSmall` when a counterexample has no α-variant
    over ``alphabet``.
    """
    alphabet = frozenset(alphabet)
    ta = TeachingAssistant(teacher, alphabet, config)
    if kind == "word":
        hyp, stats = lstar_learn(ta, alphabet)
    elif kind == "tree":
        if signature is None:
            raise ValueError("tree learning needs a signature")
        hyp, stats = tree_lstar_learn(ta, Signature.of(signature), alphabet)
    else:
        raise ValueError(f"unsupported kind {kind!r}")
    if (stats.membership_count, stats.equivalence_count) != (
        ta.stats.membership_count,
        ta.stats.equivalence_count,
    ):
        raise AssertionError("assistant did not forward queries one to one")
    return LearningResult(hyp, stats, alphabet, ta.counterexamples, [alphabet])


# ---------------------------------------------------------------------------
# alphabet extension


def _bar_count(x) -> int:
    if isinstance(x, BarTree):
        return sum(1 for n in iter_nodes(x) if n.letter.bar)
    if isinstance(x, UltPeriodicWord):
        return sum(1 for l in x.stem + x.loop if l.bar)
    return sum(1 for l in x if l.bar)


def _free(x) -> set:
    if isinstance(x, BarTree):
        return free_names_tree(x)
    if isinstance(x, UltPeriodicWord):
        return free_names_up(x)
    return free_names(x)


def _fresh_in_canonical_order(chosen, fresh: list) -> bool:
    """Fresh names are interchangeable; accept one choice per renaming class.

    Usage patterns (bar and plain, bar only, plain only, unused) must be
    non-increasing along ``n1, n2, ..``.
    """
    rank = []
    for n in fresh:
        b, p = bar(n) in chosen, plain(n) in chosen
        rank.append(3 if b and p else 2 if b else 1 if p else 0)
    return all(x >= y for x, y in zip(rank, rank[1:]))


def minimal_extension(witness, alphabet: Iterable[Letter], signature=None) -> frozenset:
    """A smallest superset of ``alphabet`` over which ``witness`` has an α-variant.

    Free names are forced in as plain letters. The remaining letters are
    searched by increasing count among fresh names ``n1, n2, ..`` (one per
    binder suffices), then the names already in play. Each candidate is
    certified by :func:`representative`.
    """
    alphabet = frozenset(alphabet)
    if representative(witness, alphabet, signature) is not None:
        return alphabet
    base = alphabet | {plain(n) for n in _free(witness)}
    known = sorted({l.name for l in alphabet} | names_of(witness))
    fresh, i = [], 1
    while len(fresh) < _bar_count(witness):
        if f"n{i}" not in known:
            fresh.append(f"n{i}")
        i += 1
    pool = [l for n in fresh for l in (bar(n), plain(n))]
    pool += [l for n in known for l in (bar(n), plain(n)) if l not in base]
    for size in range(len(pool) + 1):
        for extra in itertools.combinations(pool, size):
            if not _fresh_in_canonical_order(set(extra), fresh):
                continue
            candidate = base | frozenset(extra)
            if representative(witness, candidate, signature) is not None:
                return candidate
    raise AssertionError("the full candidate pool always admits a representative")


def minimal_extension_up(x: UltPeriodicWord, alphabet: Iterable[Letter]) -> frozenset:
    """Smallest superset of ``alphabet`` within ``alphabet ∪ letters(x)`` admitting a variant."""
    alphabet = frozenset(alphabet)
    if representative_up(x, alphabet) is not None:
        return alphabet
    base = alphabet | {plain(n) for n in free_names_up(x)}
    pool = sorted(letters_of(x) - base)
    for size in range(len(pool) + 1):
        for extra in itertools.combinations(pool, size):
            candidate = base | frozenset(extra)
            if representative_up(x, candidate) is not None:
                return candidate
    raise AssertionError("the letters of the word itself always suffice")


def learn_unknown_alphabet(
    teacher: AlphaTeacher,
    kind: str = "word",
    config: TaConfig = TaConfig(),
    signature=None,
) -> LearningResult:
    """Learn from ``config.initial_alphabet``, growing the alphabet when needed."""
    alphabet = config.initial_alphabet
    history = [alphabet]
    total = QueryStats()
    while True:
        try:
            result = learn_bar_language(teacher, alphabet, kind, config, signature)
        except AlphabetTooSmall as small:
            total.membership_count += small.stats.membership_count
            total.equivalence_count += small.stats.equivalence_count
            bigger = minimal_extension(small.witness, alphabet, signature)
            if len(bigger) <= len(alphabet):
                raise AssertionError("alphabet extension did not grow the alphabet")
            total.restarts += 1
            if total.restarts > config.max_restarts:
                raise LimitExceeded(f"more than {config.max_restarts} restarts")
            alphabet = bigger
            history.append(alphabet)
            continue
        total.membership_count += result.stats.membership_count
        total.equivalence_count += result.stats.equivalence_count
        result.stats = total
        result.alphabet_history = history
        return result

