"""Productive annotation of indexed grammars.

Every nonterminal and stack symbol is annotated with the set of
nonterminals that must stay productive below it: nonterminals become
pairs (A, X) with A in X, stack symbols become pairs (f, X), and the
annotation of a stack threads the one-letter actions bottom-up.  The
resulting grammar generates the same language and every reachable
sentential form is productive.

Only nonterminals and stack letters reachable from the annotated start
symbol are materialized.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .grammar import (BinaryRule, IndexedGrammar, PopRule, PushRule,
                      SymbolTable, TerminalRule)
from .oracle import Term


@dataclass
class AnnotatedGrammar:
    grammar: IndexedGrammar   # symbols are (A, X) and (f, X) tuples
    base: IndexedGrammar
    analysis: object

    @property
    def letters(self):
        return self.grammar.symbols.stack_symbols


def build_annotated(g, analysis):
    """The annotated grammar, restricted to its reachable part."""
    start = (g.start, analysis.useful())
    nts = {start} if g.start in start[1] else set()
    letters = set()
    rules = []
    rule_set = set()
    labels = {}

    def add_rule(r):
        if r not in rule_set:
            rule_set.add(r)
            rules.append(r)
            return True
        return False

    changed = bool(nts)
    while changed:
        changed = False
        for item in sorted(nts, key=str):
            A, X = item
            for p in g.productions:
                if p.lhs != A:
                    continue
                if isinstance(p, TerminalRule):
                    changed |= add_rule(TerminalRule(item, p.word))
                elif isinstance(p, BinaryRule):
                    if p.left in X and p.right in X:
                        for child in ((p.left, X), (p.right, X)):
                            if child not in nts:
                                nts.add(child)
                                changed = True
                        changed |= add_rule(
                            BinaryRule(item, (p.left, X), (p.right, X)))
                elif isinstance(p, PushRule):
                    Y = analysis.act(p.sym, X)
                    if p.rhs in Y:
                        child, letter = (p.rhs, Y), (p.sym, X)
                        if child not in nts:
                            nts.add(child)
                            changed = True
                        if letter not in letters:
                            letters.add(letter)
                            changed = True
                        labels[letter] = (item, child)
                        changed |= add_rule(PushRule(item, child, letter))
        for letter in sorted(letters, key=str):
            f, X = letter
            Y = analysis.act(f, X)
            for q in g.productions:
                if isinstance(q, PopRule) and q.sym == f \
                        and q.lhs in Y and q.rhs in X and (q.lhs, Y) in nts:
                    tgt = (q.rhs, X)
                    if tgt not in nts:
                        nts.add(tgt)
                        changed = True
                    changed |= add_rule(PopRule((q.lhs, Y), letter, tgt))

    if not nts:
        nts = {start}   # empty language: keep a bare start symbol
    table = SymbolTable(frozenset(nts), g.symbols.terminals,
                        frozenset(letters))
    ag = IndexedGrammar(table, start, tuple(rules), labels)
    return AnnotatedGrammar(ag, g, analysis)


def annotate_stack(z, X, analysis):
    """Annotate a stack word (topmost-first) with base annotation X."""
    out = []
    for f in reversed(z):
        out.append((f, X))
        X = analysis.act(f, X)
    return tuple(reversed(out))


def project_form(form):
    """Erase annotations from a sentential form of the annotated grammar."""
    out = []
    for item in form:
        if isinstance(item, Term):
            out.append(Term(item.nt[0], tuple(f for (f, _) in item.stack)))
        else:
            out.append(item)
    return tuple(out)


def check_productive_sample(ag, depth=8, samples=200, seed=0):
    """Randomly walk derivations of the annotated grammar and verify that
    every nonterminal occurrence in every visited form is productive.

    Productiveness of a term (A, X)[annotated z] is checked exactly via a
    productiveness analysis of the annotated grammar itself.  Returns a
    report dict with the list of violating (form, term) pairs.
    """
    from .analysis import Analysis
    from .oracle import derive_successors, start_form

    check = Analysis(ag.grammar)
    rng = random.Random(seed)
    violations = []
    checked = 0
    for _ in range(samples):
        form = start_form(ag.grammar)
        for _ in range(depth):
            for item in form:
                if isinstance(item, Term):
                    checked += 1
                    if check.term_empty(item.nt, item.stack):
                        violations.append((form, item))
            succ = derive_successors(form, ag.grammar)
            if not succ:
                break
            form = succ[rng.randrange(len(succ))]
    return {"samples": samples, "depth": depth, "seed": seed,
            "terms_checked": checked, "violations": violations}
