from __future__ import annotations

import pytest

from barlearn.automata import (
    BarBuchi,
    BarNfa,
    BarNftaBottomUp,
    Signature,
    bottomup_of_topdown,
    buchi_lasso_search,
    complement_tree,
    complement_word,
    determinize_tree,
    determinize_word,
    empty_automaton,
    literal_member_tree,
    literal_member_up,
    literal_member_word,
    product_intersection,
    shortest_accepted,
    shortest_in_symmetric_difference,
    singleton_automaton,
    topdown_of_bottomup,
    tree_key,
    trim,
)
from barlearn.corpus import binding_chain_nfa, root_bar_nfta
from barlearn.generators import random_nfa, random_nfta, spawn
from barlearn.nominal import bar, parse_tree, parse_up, parse_word, plain
from oracles import nfta_accepts, trees, words

W = parse_word
AB = frozenset([plain("a"), plain("b"), bar("a"), bar("b")])
SIG2 = {"f": 2, "c": 0}


def _lang(a, max_length=6, letters=AB):
    return {w for w in words(letters, max_length) if literal_member_word(a, w)}


def test_rejects_malformed_automata():
    with pytest.raises(ValueError):
        BarNfa(AB, 1, 0, {1}, set())
    with pytest.raises(ValueError):
        BarNfa(frozenset([plain("a")]), 1, 0, set(), {(0, plain("b"), 0)})
    with pytest.raises(ValueError):
        BarNftaBottomUp(AB, Signature.of("f/2"), 1, set(), {("f", plain("a"), (0,), 0)})


def test_literal_membership():
    s = singleton_automaton(W("|a a"), AB)
    assert literal_member_word(s, W("|a a"))
    assert not literal_member_word(s, W("|b b"))
    assert not literal_member_word(s, W("|c c"))
    assert literal_member_word(binding_chain_nfa(), W("|a |a |b a |c b c"))
    assert not literal_member_word(binding_chain_nfa(), W("a"))


def test_tree_membership():
    sig = Signature.of("f/1 c/0")
    t = parse_tree("|a.f(a.c)")
    s = singleton_automaton(t, AB, sig)
    assert literal_member_tree(s, t)
    assert not literal_member_tree(s, parse_tree("|b.f(b.c)"))
    assert not literal_member_tree(s, parse_tree("a.c"))
    with pytest.raises(ValueError):
        literal_member_tree(s, parse_tree("a.g(a.c)"))


def test_determinize_examples():
    a, b = plain("a"), plain("b")
    nfa = BarNfa({a, b}, 2, 0, {1}, {(0, a, 0), (0, b, 0), (0, a, 1)})
    dfa = determinize_word(nfa)
    assert dfa.is_deterministic_complete()
    assert _lang(dfa, letters={a, b}) == _lang(nfa, letters={a, b})
    empty = determinize_word(empty_automaton(AB))
    assert empty.n_states == 1 and not empty.finals
    assert determinize_word(dfa).n_states == dfa.n_states


def test_determinize_complement_random():
    for rng in spawn(11, 25):
        a = random_nfa(rng, sorted(AB), int(rng.integers(1, 4)))
        d = determinize_word(a)
        c = complement_word(d)
        expected = _lang(a, 5)
        assert _lang(d, 5) == expected
        assert _lang(complement_word(c), 5) == expected
        for w in words(AB, 5):
            assert literal_member_word(d, w) != literal_member_word(c, w)


def test_complement_requires_dfa():
    with pytest.raises(ValueError):
        complement_word(singleton_automaton(W("a"), AB))
    universal = complement_word(determinize_word(empty_automaton(AB)))
    assert _lang(universal, 3) == set(words(AB, 3))


def test_product_random():
    gens = spawn(12, 20)
    for g1, g2 in zip(gens[::2], gens[1::2]):
        a = random_nfa(g1, sorted(AB), 3)
        b = random_nfa(g2, sorted(AB), 3)
        p = product_intersection(a, b)
        assert _lang(p, 5) == _lang(a, 5) & _lang(b, 5)
    a = random_nfa(gens[0], sorted(AB), 3)
    assert not _lang(product_intersection(a, empty_automaton(AB)), 5)
    with pytest.raises(ValueError):
        product_intersection(a, empty_automaton({plain("a")}))


def test_symmetric_difference_examples():
    a = singleton_automaton(W("a"), AB)
    assert shortest_in_symmetric_difference(a, a) is None
    assert shortest_in_symmetric_difference(a, empty_automaton(AB)) == W("a")


def _least(ws):
    return min(ws, key=lambda w: (len(w), w)) if ws else None


def test_symmetric_difference_is_least_witness():
    gens = spawn(13, 40)
    for g1, g2 in zip(gens[::2], gens[1::2]):
        a = random_nfa(g1, sorted(AB), int(g1.integers(1, 4)))
        b = random_nfa(g2, sorted(AB), int(g2.integers(1, 4)))
        diff = _lang(a) ^ _lang(b)
        got = shortest_in_symmetric_difference(a, b)
        if got is not None and len(got) <= 6:
            assert got == _least(diff)
        else:
            assert got is None and not diff or got is not None and not diff


def test_shortest_accepted():
    assert shortest_accepted(singleton_automaton(W("|a b"), AB)) == W("|a b")
    assert shortest_accepted(empty_automaton(AB)) is None


def test_trim_keeps_language():
    for rng in spawn(14, 15):
        a = random_nfa(rng, sorted(AB), 4, density=0.15)
        t = trim(a)
        assert t.n_states <= a.n_states
        assert _lang(t, 5) == _lang(a, 5)


# --- Büchi -------------------------------------------------------------------


def _run_lasso(a, lasso):
    for states, letters in ((lasso.stem_states, lasso.stem), (lasso.loop_states, lasso.loop)):
        for p, letter, q in zip(states, letters, states[1:]):
            assert q in a.successors(p, letter)
    assert lasso.stem_states[0] == a.initial
    assert lasso.stem_states[-1] == lasso.loop_states[0] == lasso.loop_states[-1]
    assert lasso.loop and any(q in a.finals for q in lasso.loop_states)


def test_lasso_examples():
    a = plain("a")
    loop = BarBuchi({a}, 1, 0, {0}, {(0, a, 0)})
    lasso = buchi_lasso_search(loop)
    assert lasso.stem == () and lasso.loop == (a,)
    assert buchi_lasso_search(BarBuchi({a}, 2, 0, {1}, {(0, a, 0)})) is None
    hand = BarBuchi(
        AB, 3, 0, {2}, {(0, plain("a"), 1), (1, bar("b"), 2), (2, plain("b"), 1), (1, plain("a"), 1)}
    )
    _run_lasso(hand, buchi_lasso_search(hand))


def test_lasso_random_reverifies():
    found = 0
    for rng in spawn(15, 40):
        a = random_nfa(rng, sorted(AB), 3, density=0.15, buchi=True)
        lasso = buchi_lasso_search(a)
        if lasso is not None:
            found += 1
            _run_lasso(a, lasso)
            assert literal_member_up(a, lasso.word)
    assert found > 5


def test_buchi_product_flag():
    a, b = plain("a"), plain("b")
    # left accepts infinitely many a, right infinitely many b
    left = BarBuchi({a, b}, 2, 0, {1}, {(0, a, 1), (1, a, 1), (0, b, 0), (1, b, 0)})
    right = BarBuchi({a, b}, 2, 0, {1}, {(0, b, 1), (1, b, 1), (0, a, 0), (1, a, 0)})
    both = product_intersection(left, right)
    assert literal_member_up(both, parse_up("; a b"))
    assert not literal_member_up(both, parse_up("; a"))
    assert not literal_member_up(both, parse_up("a ; b"))


def test_singletons():
    s = singleton_automaton(W("|a a"), {bar("a"), plain("a")})
    assert s.n_states == 3
    assert _lang(s, 4, {bar("a"), plain("a")}) == {W("|a a")}
    up = singleton_automaton(parse_up("; a"), {plain("a")})
    assert up.n_states == 1 and literal_member_up(up, parse_up("; a a"))
    with pytest.raises(ValueError):
        singleton_automaton(W("b"), {plain("a")})
    t = parse_tree("|a.f(a.c)")
    ts = singleton_automaton(t, AB, Signature.of("f/1 c/0"))
    accepted = [x for x in trees({"f": 1, "c": 0}, AB, 3) if literal_member_tree(ts, x)]
    assert accepted == [t]


def test_up_singleton_exact():
    x = parse_up("a ; |b a")
    s = singleton_automaton(x, AB)
    assert literal_member_up(s, parse_up("a |b a ; |b a"))
    assert not literal_member_up(s, parse_up("a ; |b b"))


# --- trees ---------------------------------------------------------------------


def _tree_lang(a, letters=AB, depth=3):
    return {t for t in trees(SIG2, letters, depth) if literal_member_tree(a, t)}


def test_tree_algorithms_random():
    letters = [plain("a"), bar("a")]
    all_trees = trees(SIG2, letters, 3)
    gens = spawn(16, 16)
    for g1, g2 in zip(gens[::2], gens[1::2]):
        a = random_nfta(g1, SIG2, letters, 2)
        b = random_nfta(g2, SIG2, letters, 2)
        la = {t for t in all_trees if nfta_accepts(a.rules, a.finals, t)}
        lb = {t for t in all_trees if nfta_accepts(b.rules, b.finals, t)}
        assert {t for t in all_trees if literal_member_tree(a, t)} == la
        d = determinize_tree(a)
        assert d.is_deterministic_complete()
        assert {t for t in all_trees if literal_member_tree(d, t)} == la
        c = complement_tree(d)
        assert {t for t in all_trees if literal_member_tree(c, t)} == set(all_trees) - la
        p = product_intersection(a, b)
        assert {t for t in all_trees if literal_member_tree(p, t)} == la & lb
        back = bottomup_of_topdown(topdown_of_bottomup(a))
        assert {t for t in all_trees if literal_member_tree(back, t)} == la
        diff = la ^ lb
        got = shortest_in_symmetric_difference(a, b)
        if diff:
            assert got == min(diff, key=tree_key)
        elif got is not None:
            assert tree_key(got)[0] > 7


def test_tree_edge_cases():
    sig = Signature.of(SIG2)
    empty = BarNftaBottomUp(AB, sig, 0, set(), set())
    assert shortest_accepted(empty) is None
    assert shortest_accepted(bottomup_of_topdown(topdown_of_bottomup(empty))) is None
    t = parse_tree("|a.f(a.c, b.c)")
    single = singleton_automaton(t, AB, sig)
    assert _tree_lang(bottomup_of_topdown(topdown_of_bottomup(single))) == {t}
    with pytest.raises(ValueError):
        complement_tree(single)
    assert literal_member_tree(root_bar_nfta(), parse_tree("|a.f(a.c)"))
    assert not literal_member_tree(root_bar_nfta(), parse_tree("a.f(|a.c)"))


def test_signature_parsing():
    sig = Signature.of("f/2 c/0")
    assert sig["f"] == 2 and "c" in sig and "g" not in sig
    assert str(sig) == "c/0 f/2"
    with pytest.raises(ValueError):
        Signature.of("f/x")
