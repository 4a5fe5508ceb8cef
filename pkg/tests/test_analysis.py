"""Productiveness analysis: actions, closures, universe, matrices, reach."""

import pytest
from hypothesis import given, strategies as st

from ixdcl.analysis import Analysis, CapExceeded
from ixdcl.families import g1_grammar, square_grammar
from ixdcl.grammar import grammar_from_text


def test_useful_goldens(fixtures):
    assert fixtures["g1"].analysis.useful() == frozenset({"B", "S"})
    assert fixtures["loop"].analysis.useful() == frozenset({"A", "S"})
    sq = fixtures["square"].analysis.useful()
    assert "S" in sq and "A" not in sq and "B" not in sq


def test_is_empty():
    assert not Analysis(g1_grammar()).is_empty()
    g = grammar_from_text("start S\nterminals a\nstack f\nS -> S + f\n")
    assert Analysis(g).is_empty()


def test_act_golden_g1(g1):
    an = g1.analysis
    useful = an.useful()
    # pushing f makes A (one pending pop away from B) productive too
    assert an.act("f", useful) == frozenset({"A", "B", "S"})
    assert an.act("f", frozenset()) == frozenset({"A", "B", "S"})


def test_act_word_folds_topmost_first(g1):
    an = g1.analysis
    assert an.act_word(("f", "f"), frozenset()) == \
        an.act("f", an.act("f", frozenset()))
    assert an.act_word((), an.useful()) == an.useful()


def test_universe_goldens(fixtures):
    assert len(fixtures["g1"].analysis.universe()) == 2
    assert len(fixtures["loop"].analysis.universe()) == 1
    assert len(fixtures["square"].analysis.universe()) == 2
    for st_ in fixtures.values():
        uni = st_.analysis.universe()
        assert uni[0] == st_.analysis.useful()
        assert len(set(uni)) == len(uni)


def test_universe_closed_under_actions(fixtures):
    for st_ in fixtures.values():
        an = st_.analysis
        uni = set(an.universe())
        for X in list(uni):
            for f in an.g.symbols.stack_symbols:
                assert an.act(f, X) in uni


def test_cl_contains_terminal_lhs(fixtures):
    for st_ in fixtures.values():
        an = st_.analysis
        from ixdcl.grammar import TerminalRule
        terminal_lhs = {p.lhs for p in an.g.productions
                        if isinstance(p, TerminalRule)}
        for X in an.universe():
            assert terminal_lhs <= an.cl(X)
            assert X <= an.cl(X)


@given(st.sets(st.sampled_from(sorted(
    square_grammar().symbols.nonterminals)), max_size=6),
    st.sets(st.sampled_from(sorted(
        square_grammar().symbols.nonterminals)), max_size=6))
def test_act_monotone(x, y):
    an = test_act_monotone.an
    for f in sorted(an.g.symbols.stack_symbols):
        small = an.act(f, frozenset(x) & frozenset(y))
        assert small <= an.act(f, frozenset(x))
        assert small <= an.act(f, frozenset(y))


test_act_monotone.an = Analysis(square_grammar())


def test_matrix_golden_g1(g1):
    an = g1.analysis
    m = an.matrix("f", an.useful())
    # the pop rule A - f -> B focuses A onto B under any annotation
    assert ("A", "B") in m
    assert ("A", "A") not in m


def test_matrix_entries_within_nonterminals(fixtures):
    for st_ in fixtures.values():
        an = st_.analysis
        nts = an.g.symbols.nonterminals
        for X in an.universe():
            for f in an.g.symbols.stack_symbols:
                for (a, b) in an.matrix(f, X):
                    assert a in nts and b in nts


def test_reach_reflexive_and_transitive(fixtures):
    for st_ in fixtures.values():
        an = st_.analysis
        for X in an.universe():
            r = an.reach(X)
            for a in X:
                assert (a, a) in r
            for (a, b) in r:
                for (b2, c) in r:
                    if b == b2:
                        assert (a, c) in r


def test_term_empty(g1):
    an = g1.analysis
    assert not an.term_empty("S", ())
    assert not an.term_empty("B", ())
    assert an.term_empty("A", ())       # A needs a stack to pop
    assert not an.term_empty("A", ("f",))
    assert not an.term_empty("S", ("f",))


def test_universe_cap():
    with pytest.raises(CapExceeded):
        Analysis(square_grammar(), universe_cap=1).universe()
