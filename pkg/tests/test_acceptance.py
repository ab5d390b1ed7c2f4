"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import json
import sys
import time
from math import comb, perm

import pytest

from barlearn.assistant import learn_bar_language, representative, representative_up
from barlearn.automata import (
    literal_member_tree,
    literal_member_word,
    shortest_in_symmetric_difference,
    singleton_automaton,
)
from barlearn.cli import main
from barlearn.closure import ClosureBoundError, close, close_buchi, close_tree, close_word, register_names
from barlearn.corpus import binding_chain_nfa, root_bar_nfta
from barlearn.formats import format_automaton, parse_automaton
from barlearn.generators import letters_over, random_nfa, random_nfta, random_up, random_word, spawn
from barlearn.learners import lstar_learn
from barlearn.nominal import (
    BarTree,
    Permutation,
    UltPeriodicWord,
    alpha_eq_string,
    alpha_eq_tree,
    alpha_eq_up,
    apply_perm,
    bar,
    brute_alpha_eq,
    free_names_up,
    letters_of,
    nf_string,
    parse_word,
    plain,
    up_prefix,
)
from barlearn.teacher import RestrictionTeacher, SimulatedTeacher
from oracles import canon, canon_tree, nfa_accepts, nfta_accepts, trees, words

AB = frozenset(letters_over("ab"))
SIG = {"f": 2, "c": 0}


def _report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    capture = _CAPTURE.get("capsys")
    if capture is not None:
        with capture.disabled():
            print(f"\n{line}")
    else:
        print(line)


_CAPTURE: dict = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _CAPTURE["capsys"] = capsys
    yield
    _CAPTURE.pop("capsys", None)


def _run_cli(*argv) -> int:
    capture = _CAPTURE.get("capsys")
    code = main(list(argv))
    if capture is not None:
        capture.readouterr()
    return code


# --- 1 -----------------------------------------------------------------------------------


def test_criterion_1_normal_form():
    w, v = parse_word("|a c |b b |a a"), parse_word("|d c |a a |a a")
    start = time.perf_counter()
    nw = nf_string(w)
    elapsed = time.perf_counter() - start
    code = _run_cli("nf", "|a c |b b |a a")
    from barlearn.nominal import format_nf

    text = format_nf(nw)
    ok = code == 0 and text == "1 c 2 2 3 3" and nf_string(v) == nw and elapsed < 1e-3
    _report(1, ok, f"nf = {text!r}, second word equal: {nf_string(v) == nw}, {elapsed * 1e6:.0f} us")
    assert ok


# --- 2 -----------------------------------------------------------------------------------


def test_criterion_2_exhaustive_oracle_agreement():
    letters = sorted(AB)
    start = time.perf_counter()
    pairs = disagreements = equivalent = 0
    for n in range(6):
        ws = list(itertools.product(letters, repeat=n))
        for i, v in enumerate(ws):
            for w in ws[i:]:
                pairs += 1
                fast = alpha_eq_string(v, w)
                equivalent += fast
                disagreements += fast != brute_alpha_eq(v, w)
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and elapsed < 60
    _report(
        2,
        ok,
        f"{pairs} unordered pairs, {equivalent} equivalent, {disagreements} disagreements, {elapsed:.1f} s",
    )
    assert ok


# --- 3 -----------------------------------------------------------------------------------


def _up_pair(rng, i: int):
    """Mix of unrelated pairs, reshaped copies and renamed closed words."""
    names = "abc"[: 1 + i % 3]
    letters = letters_over(names)
    x = random_up(rng, letters, 4, 4)
    mode = i % 4
    if mode == 0:
        return x, random_up(rng, letters, 4, 4)
    if mode == 1:
        r = int(rng.integers(len(x.loop)))
        y = UltPeriodicWord(x.stem + x.loop[:r], x.loop[r:] + x.loop[:r])
        return x, y if len(y.stem) <= 4 else x
    if mode == 2:
        # bar-first loops keep every name bound
        loop = (bar(names[0]),) + x.loop[1:]
        closed = UltPeriodicWord((), loop)
        image = list(names)
        rng.shuffle(image)
        return closed, apply_perm(Permutation(dict(zip(names, image))), closed)
    one = letters_over("a")
    return random_up(rng, one, 4, 4), random_up(rng, one, 4, 4)


def test_criterion_3_ultimately_periodic_consistency():
    start = time.perf_counter()
    bad = positives = 0
    for i, rng in enumerate(spawn(70, 1000)):
        x, y = _up_pair(rng, i)
        limit = len(x.stem) + len(y.stem) + 10 * len(x.loop) * len(y.loop)
        prefixes = [alpha_eq_string(up_prefix(x, n), up_prefix(y, n)) for n in range(limit + 1)]
        verdict = alpha_eq_up(x, y)
        positives += verdict
        bad += verdict != all(prefixes)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 60
    _report(3, ok, f"1000 pairs, {positives} equivalent, {bad} mismatches, {elapsed:.1f} s")
    assert ok


# --- 4 -----------------------------------------------------------------------------------


def _word_closure_mismatches(automata, max_length: int) -> int:
    corpus = list(words(AB, max_length))
    keys = [canon(w) for w in corpus]
    bad = 0
    for a in automata:
        accepted = {k for w, k in zip(corpus, keys) if nfa_accepts(a.transitions, a.initial, a.finals, w)}
        closed = close_word(a, AB)
        bad += sum(literal_member_word(closed, w) != (k in accepted) for w, k in zip(corpus, keys))
    return bad


def _tree_closure_mismatches(automata, max_depth: int) -> int:
    corpus = trees(SIG, sorted(AB), max_depth)
    keys = [canon_tree(t) for t in corpus]
    bad = 0
    for a in automata:
        accepted = {k for t, k in zip(corpus, keys) if nfta_accepts(a.rules, a.finals, t)}
        closed = close_tree(a, AB)
        bad += sum(literal_member_tree(closed, t) != (k in accepted) for t, k in zip(corpus, keys))
    return bad


def _criterion_4_nfas():
    return [random_nfa(rng, sorted(AB), int(rng.integers(1, 5)), density=0.2) for rng in spawn(71, 200)]


def _criterion_4_nftas():
    return [random_nfta(rng, SIG, sorted(AB), int(rng.integers(1, 4)), density=0.1) for rng in spawn(72, 50)]


def test_criterion_4_closure_correctness():
    start = time.perf_counter()
    word_bad = _word_closure_mismatches(_criterion_4_nfas(), 6)
    tree_bad = _tree_closure_mismatches(_criterion_4_nftas(), 3)
    elapsed = time.perf_counter() - start
    ok = word_bad == 0 and tree_bad == 0 and elapsed < 300
    _report(
        4,
        ok,
        f"200 NFAs x words <= 6: {word_bad} mismatches; 50 NFTAs x trees depth <= 3: {tree_bad}; {elapsed:.1f} s",
    )
    assert ok


# --- 5 -----------------------------------------------------------------------------------


def _independent_bound(a, target) -> int:
    k = len(register_names(a.alphabet))
    pool = set(register_names(a.alphabet)) | {l.name for l in target}
    return a.n_states * sum(comb(k, j) * perm(len(pool), j) for j in range(k + 1))


def test_criterion_5_state_bound():
    abc = frozenset(letters_over("abc"))
    runs = fired = over = 0
    word_sources = _criterion_4_nfas() + [binding_chain_nfa()]
    word_sources += [random_nfa(rng, sorted(abc), 4, density=0.3) for rng in spawn(73, 40)]
    for a in word_sources:
        for target in (a.alphabet, AB, abc):
            for mode in (True, False):
                runs += 1
                try:
                    b = close_word(a, target, name_dropping=mode)
                except ClosureBoundError:
                    fired += 1
                    continue
                over += b.n_states > _independent_bound(a, target)
    for rng in spawn(74, 40):
        a = random_nfa(rng, sorted(AB), 3, density=0.3, buchi=True)
        runs += 1
        try:
            b = close_buchi(a, abc)
            over += b.n_states > _independent_bound(a, abc)
        except ClosureBoundError:
            fired += 1
    for a in _criterion_4_nftas() + [root_bar_nfta()]:
        for mode in (True, False):
            runs += 1
            try:
                close_tree(a, abc, name_dropping=mode)
            except ClosureBoundError:
                fired += 1
    ok = fired == 0 and over == 0
    _report(5, ok, f"{runs} closure runs, bound fired {fired} times, {over} independent-bound violations")
    assert ok


# --- 6 -----------------------------------------------------------------------------------


class _LoggingTeacher(SimulatedTeacher):
    def __init__(self, hidden):
        super().__init__(hidden)
        self.queries: list = []

    def mq_alpha(self, x):
        self.queries.append(x)
        return super().mq_alpha(x)


class _LoggingRestriction(RestrictionTeacher):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.queries: list = []
        self.answers: list = []

    def mq(self, x):
        self.queries.append(x)
        return super().mq(x)

    def eq(self, hypothesis):
        c = super().eq(hypothesis)
        self.answers.append(c)
        return c


def _paired_runs():
    hidden = binding_chain_nfa()
    alphabet = hidden.alphabet
    ta_teacher = _LoggingTeacher(hidden)
    session = learn_bar_language(ta_teacher, alphabet)
    direct_teacher = _LoggingRestriction(hidden, alphabet, replay=session.counterexamples)
    direct, direct_stats = lstar_learn(direct_teacher, alphabet)
    return hidden, session, ta_teacher, direct, direct_stats, direct_teacher


def test_criterion_6_end_to_end_learning(tmp_path):
    start = time.perf_counter()
    hidden = binding_chain_nfa()
    path = tmp_path / "chain.aut"
    path.write_text(format_automaton(hidden))
    reports = {}
    for mode in ("off", "rename"):
        stats = tmp_path / f"{mode}.json"
        out = tmp_path / f"{mode}.aut"
        code = _run_cli("learn", str(path), "--adversary", mode, "--seed", "5", "--stats", str(stats), "-o", str(out))
        assert code == 0
        reports[mode] = (json.loads(stats.read_text()), parse_automaton(out.read_text()))
    alphabet = hidden.alphabet
    closed = {m: close(a, alphabet, name_dropping=False) for m, (_, a) in reports.items()}
    same = shortest_in_symmetric_difference(closed["off"], closed["rename"]) is None
    _, session, _, _, direct_stats, _ = _paired_runs()
    mq, eq = reports["off"][0]["membership_queries"], reports["off"][0]["equivalence_queries"]
    assert (mq, eq) == (session.stats.membership_count, session.stats.equivalence_count)
    elapsed = time.perf_counter() - start
    ok = (
        same
        and mq == direct_stats.membership_count
        and eq <= direct_stats.equivalence_count
        and elapsed < 120
    )
    _report(
        6,
        ok,
        f"terminated, adversary language identical: {same}; session {mq} MQ / {eq} EQ vs "
        f"direct run {direct_stats.membership_count} MQ / {direct_stats.equivalence_count} EQ; {elapsed:.1f} s",
    )
    assert ok


def test_criterion_6_session_is_prefix_of_direct_run():
    """The assistant session asks exactly the direct run's opening queries."""
    _, session, ta_teacher, direct, direct_stats, direct_teacher = _paired_runs()
    n = len(ta_teacher.queries)
    assert direct_teacher.queries[:n] == ta_teacher.queries
    assert direct_teacher.answers[: len(session.counterexamples)] == session.counterexamples
    assert session.stats.membership_count <= direct_stats.membership_count
    assert session.stats.equivalence_count <= direct_stats.equivalence_count
    # the direct run continues only to make the hypothesis literally closed
    learned = close(session.automaton, direct.alphabet, name_dropping=False)
    assert shortest_in_symmetric_difference(learned, direct) is None


# --- 7 -----------------------------------------------------------------------------------


def _closure_of(text: str):
    w = parse_word(text)
    a = singleton_automaton(w, set(w))
    return w, close(a, a.alphabet, name_dropping=False)


def _discover(tmp_path, text: str):
    w, hidden = _closure_of(text)
    path = tmp_path / "hidden.aut"
    path.write_text(format_automaton(hidden))
    stats = tmp_path / "stats.json"
    code = _run_cli("learn", str(path), "--discover-alphabet", "--stats", str(stats))
    report = json.loads(stats.read_text())
    return w, code, report


def _certified_minimal(w, alphabet) -> bool:
    """No alphabet with fewer letters, over the same names, admits an α-variant of ``w``."""
    names = sorted({l.name for l in alphabet} | {l.name for l in w})
    pool = letters_over(names)
    return all(
        representative(w, frozenset(c)) is None
        for n in range(len(alphabet))
        for c in itertools.combinations(pool, n)
    )


def _final_alphabet(report) -> frozenset:
    return frozenset(parse_word(" ".join(report["final_alphabet"])))


def test_criterion_7_unknown_alphabet(tmp_path):
    start = time.perf_counter()
    sizes, certified, codes = [], [], []
    for text in ("|a a", "a b |c c"):
        w, code, report = _discover(tmp_path, text)
        final = _final_alphabet(report)
        codes.append(code)
        sizes.append(len(final))
        certified.append(_certified_minimal(w, final))
    elapsed = time.perf_counter() - start
    ok = codes == [0, 0] and sizes == [2, 4] and all(certified) and elapsed < 120
    _report(
        7,
        ok,
        f"exit codes {codes}, final sizes {sizes} (expected [2, 4]), minimality certified {certified}, {elapsed:.2f} s",
    )
    assert ok


@pytest.mark.parametrize("text", ["|a a", "a b |c c"])
def test_criterion_7_found_alphabet_is_minimal(tmp_path, text):
    w, code, report = _discover(tmp_path, text)
    final = _final_alphabet(report)
    assert code == 0
    assert representative(w, final) is not None
    assert _certified_minimal(w, final)
    assert report["restarts"] >= 1


def test_criterion_7_restarts_grow_alphabet():
    from barlearn.assistant import learn_unknown_alphabet

    for text in ("|a a", "a b |c c"):
        _, hidden = _closure_of(text)
        result = learn_unknown_alphabet(SimulatedTeacher(hidden))
        sizes = [len(a) for a in result.alphabet_history]
        assert all(x < y for x, y in zip(sizes, sizes[1:]))
        assert all(a < b for a, b in zip(result.alphabet_history, result.alphabet_history[1:]))


# --- 8 -----------------------------------------------------------------------------------


def test_criterion_8_property_suites():
    import test_properties as props

    suites = [
        props.test_nf_string_equivariant,
        props.test_nf_tree_equivariant,
        props.test_nf_stable_under_left_concatenation,
        props.test_nf_stable_under_contexts,
    ]
    start = time.perf_counter()
    failed = []
    for suite in suites:
        try:
            suite()
        except AssertionError:
            failed.append(suite.__name__)
    elapsed = time.perf_counter() - start
    ok = not failed and props.N >= 500 and elapsed < 60
    _report(8, ok, f"{len(suites)} suites x {props.N} instances, failed: {failed or 'none'}, {elapsed:.1f} s")
    assert ok


# --- 9 -----------------------------------------------------------------------------------


def _big_tree(rng, n_nodes: int, letters) -> BarTree:
    """A random tree over ``f/2``, ``g/1`` and ``c/0`` with exactly ``n_nodes`` nodes."""
    letters = sorted(letters)

    def pick():
        return letters[int(rng.integers(len(letters)))]

    def build(n):
        if n == 1:
            return BarTree(pick(), "c")
        if n == 2:
            return BarTree(pick(), "g", (build(1),))
        left = int(rng.integers(1, n - 1))
        return BarTree(pick(), "f", (build(left), build(n - 1 - left)))

    return build(n_nodes)


def _timed(f, *args):
    start = time.perf_counter()
    result = f(*args)
    return result, time.perf_counter() - start


def test_criterion_9_polynomial_alpha_equivalence():
    from barlearn.nominal import tree_size

    rng = spawn(75, 1)[0]
    letters = letters_over("abcde")
    w = random_word(rng, letters, 10_000)
    renamed = apply_perm(Permutation.swap("a", "q"), w)
    _, t_s = _timed(alpha_eq_string, w, renamed)
    _, t_s2 = _timed(alpha_eq_string, w, random_word(rng, letters, 10_000))
    t = _big_tree(rng, 10_000, letters)
    assert tree_size(t) == 10_000
    _, t_t = _timed(alpha_eq_tree, t, apply_perm(Permutation.swap("b", "q"), t))
    x = UltPeriodicWord(random_word(rng, letters, 200), random_word(rng, letters, 200))
    shifted = UltPeriodicWord(x.stem + x.loop[:1], x.loop[1:] + x.loop[:1])
    other = UltPeriodicWord(random_word(rng, letters, 200), random_word(rng, letters, 199))
    same, t_u = _timed(alpha_eq_up, x, shifted)
    _, t_u2 = _timed(alpha_eq_up, x, other)
    assert same
    times = {"string": max(t_s, t_s2), "tree": t_t, "up": max(t_u, t_u2)}
    ok = all(v < 1.0 for v in times.values())
    _report(9, ok, ", ".join(f"{k} {v * 1000:.0f} ms" for k, v in times.items()))
    assert ok


# --- 10 ----------------------------------------------------------------------------------


def _criterion_10_instance(rng):
    """A lasso over up to three names and an alphabet with ample bound capacity."""
    letters = letters_over("abc")
    x = random_up(rng, letters, 4, 4)
    bars = sum(l.bar for l in x.stem + x.loop)
    spare = frozenset(l for i in range(bars) for l in (bar(f"s{i}"), plain(f"s{i}")))
    own = sorted(letters_of(x))
    keep = frozenset(l for l in own if rng.random() < 0.6)
    return x, keep | spare


def test_criterion_10_representative_up():
    checked = nones = bad = 0
    for rng in spawn(76, 200):
        x, a0 = _criterion_10_instance(rng)
        forced = {plain(n) for n in free_names_up(x)}
        expect_none = not forced <= a0
        r = representative_up(x, a0)
        checked += 1
        if r is None:
            nones += 1
            bad += not expect_none
        else:
            bad += expect_none or not alpha_eq_up(r, x) or not letters_of(r) <= a0
    ok = bad == 0 and checked == 200
    _report(10, ok, f"{checked} instances, {nones} forced failures, {bad} mismatches")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
