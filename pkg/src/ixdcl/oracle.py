"""Brute-force derivation semantics for indexed grammars.

This module is the ground truth the rest of the package is tested
against.  It implements the one-step derivation relation directly on
sentential forms, breadth-first word enumeration with explicit witness
derivations, a compositional dynamic program over (nonterminal, stack)
pairs, and a downward-closure membership oracle.

All searches carry explicit budgets and report whether they were
complete.  A pruned stack push makes a result incomplete unless an
`emptiness` callback certifies that the pruned configuration generates
the empty language.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .grammar import BinaryRule, PopRule, PushRule, TerminalRule


@dataclass(frozen=True)
class Term:
    """A nonterminal with its stack; stack[0] is the topmost symbol."""

    nt: object
    stack: tuple


@dataclass(frozen=True)
class OracleBudget:
    max_word_len: int = 8
    max_stack_height: int = 8
    max_steps: int = 100000


@dataclass
class EnumerationResult:
    words: set
    complete: bool
    witnesses: dict   # word -> list of sentential forms, start to finish


@dataclass
class DpResult:
    table: dict       # (nt, stack) -> frozenset of words (or lengths)
    complete: bool
    incomplete_keys: frozenset


def start_form(g):
    return (Term(g.start, ()),)


def is_terminal_form(form):
    return all(isinstance(x, str) for x in form)


def form_word(form):
    return "".join(form)


def derive_successors(form, g):
    """All sentential forms reachable in one derivation step."""
    out = []
    for i, item in enumerate(form):
        if not isinstance(item, Term):
            continue
        pre, post = form[:i], form[i + 1:]
        for p in g.productions:
            if p.lhs != item.nt:
                continue
            if isinstance(p, TerminalRule):
                out.append(pre + tuple(p.word) + post)
            elif isinstance(p, BinaryRule):
                out.append(pre + (Term(p.left, item.stack),
                                  Term(p.right, item.stack)) + post)
            elif isinstance(p, PushRule):
                out.append(pre + (Term(p.rhs, (p.sym,) + item.stack),) + post)
            elif isinstance(p, PopRule):
                if item.stack and item.stack[0] == p.sym:
                    out.append(pre + (Term(p.rhs, item.stack[1:]),) + post)
    return out


def enumerate_words(g, budget, form=None, emptiness=None):
    """Breadth-first search over sentential forms.

    Collects every derivable terminal word of length <= max_word_len,
    with one witness derivation per word.  The completeness flag is
    dropped when a lossy prune happens: running out of steps, or cutting
    a push past max_stack_height whose target is not certified empty.
    """
    if form is None:
        form = start_form(g)
    seen = {form: None}
    queue = deque([form])
    words = {}
    complete = True
    steps = 0
    while queue:
        cur = queue.popleft()
        if steps >= budget.max_steps:
            complete = False
            break
        steps += 1
        for nxt in derive_successors(cur, g):
            if nxt in seen:
                continue
            letters = sum(1 for x in nxt if isinstance(x, str))
            if letters > budget.max_word_len:
                continue   # lossless: only yields words past the cap
            tall = [x for x in nxt if isinstance(x, Term)
                    and len(x.stack) > budget.max_stack_height]
            if tall:
                if not all(emptiness and emptiness(t.nt, t.stack)
                           for t in tall):
                    complete = False
                continue
            seen[nxt] = cur
            if is_terminal_form(nxt):
                w = form_word(nxt)
                if w not in words:
                    words[w] = nxt
            else:
                queue.append(nxt)
    witnesses = {}
    for w, end in words.items():
        trace = []
        f = end
        while f is not None:
            trace.append(f)
            f = seen[f]
        witnesses[w] = list(reversed(trace))
    return EnumerationResult(set(words), complete, witnesses)


def term_successors(term, g):
    """All terms a single term can rewrite to in one step.  Binary rules
    contribute both children: each appears in the successor form, and
    sibling context is unconstrained here."""
    out = []
    for p in g.productions:
        if p.lhs != term.nt:
            continue
        if isinstance(p, BinaryRule):
            out.append(Term(p.left, term.stack))
            out.append(Term(p.right, term.stack))
        elif isinstance(p, PushRule):
            out.append(Term(p.rhs, (p.sym,) + term.stack))
        elif isinstance(p, PopRule):
            if term.stack and term.stack[0] == p.sym:
                out.append(Term(p.rhs, term.stack[1:]))
    return out


def term_reachable(g, start, goal, max_height, max_steps=1000000):
    """Does some derivable sentential form contain `goal`, starting from
    the form (start,)?  Equivalent to term-lineage reachability; bounded
    by stack height, so the search space is finite and a False answer is
    conclusive whenever no derivation needs taller stacks."""
    seen = {start}
    queue = deque([start])
    steps = 0
    while queue and steps < max_steps:
        cur = queue.popleft()
        steps += 1
        if cur == goal:
            return True
        for nxt in term_successors(cur, g):
            if len(nxt.stack) <= max_height and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def context_table(g, X, max_height):
    """Bounded least fixpoint: which terms (A, stack), with stacks up to
    max_height, derive a form consisting only of terminal letters and
    empty-stack terms over X?"""
    import itertools

    syms = sorted(g.symbols.stack_symbols)
    stacks = [()]
    for h in range(1, max_height + 1):
        stacks.extend(tuple(p) for p in itertools.product(syms, repeat=h))
    by_lhs = {}
    for p in g.productions:
        by_lhs.setdefault(p.lhs, []).append(p)
    val = {}
    for A in g.symbols.nonterminals:
        for s in stacks:
            val[(A, s)] = (not s) and A in X
    changed = True
    while changed:
        changed = False
        for (A, s), cur in val.items():
            if cur:
                continue
            ok = False
            for p in by_lhs.get(A, ()):
                if isinstance(p, TerminalRule):
                    ok = True
                elif isinstance(p, BinaryRule):
                    ok = val[(p.left, s)] and val[(p.right, s)]
                elif isinstance(p, PushRule):
                    tall = (p.sym,) + s
                    ok = len(tall) <= max_height and val[(p.rhs, tall)]
                elif isinstance(p, PopRule):
                    ok = bool(s) and s[0] == p.sym and val[(p.rhs, s[1:])]
                if ok:
                    break
            if ok:
                val[(A, s)] = True
                changed = True
    return val


def term_routes(g, X, start, goal, max_height, max_steps=1000000):
    """Does start derive a form  u goal v  with u, v over terminal
    letters and empty-stack terms from X?  Bounded by stack height; at a
    binary rule the lineage may continue into a child only if its sibling
    reduces to such a context."""
    ctx = context_table(g, X, max_height)
    seen = {start}
    queue = deque([start])
    steps = 0
    while queue and steps < max_steps:
        cur = queue.popleft()
        steps += 1
        if cur == goal:
            return True
        nxts = []
        for p in g.productions:
            if p.lhs != cur.nt:
                continue
            if isinstance(p, BinaryRule):
                if ctx[(p.right, cur.stack)]:
                    nxts.append(Term(p.left, cur.stack))
                if ctx[(p.left, cur.stack)]:
                    nxts.append(Term(p.right, cur.stack))
            elif isinstance(p, PushRule):
                nxts.append(Term(p.rhs, (p.sym,) + cur.stack))
            elif isinstance(p, PopRule):
                if cur.stack and cur.stack[0] == p.sym:
                    nxts.append(Term(p.rhs, cur.stack[1:]))
        for nxt in nxts:
            if len(nxt.stack) <= max_height and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def find_context_derivation(g, start, goal, budget, others_ok=None):
    """Bounded search for a derivation  start => ... => u goal v.

    Looks for a sentential form containing the term `goal` in which every
    other item satisfies `others_ok` (by default anything is allowed).
    The search starts from the single-term form (start,).  Returns True
    when such a form is found; False means none was found within the
    budget, which is conclusive only if the budget covers the search
    space.
    """
    if others_ok is None:
        others_ok = lambda item: True
    form = (start,)
    seen = {form}
    queue = deque([form])
    steps = 0
    while queue and steps < budget.max_steps:
        cur = queue.popleft()
        steps += 1
        for i, item in enumerate(cur):
            if item == goal and all(others_ok(x) for j, x in enumerate(cur)
                                    if j != i):
                return True
        for nxt in derive_successors(cur, g):
            if nxt in seen:
                continue
            if sum(1 for x in nxt if isinstance(x, str)) > budget.max_word_len:
                continue
            if any(isinstance(x, Term)
                   and len(x.stack) > budget.max_stack_height for x in nxt):
                continue
            seen.add(nxt)
            queue.append(nxt)
    return False


def is_subword(u, v):
    """Scattered-subword order: u embeds into v preserving letter order."""
    it = iter(v)
    return all(c in it for c in u)


def subwords(w):
    """All distinct scattered subwords of w."""
    out = {""}
    for c in w:
        out |= {u + c for u in out}
    return out


# ---------------------------------------------------------------------------
# compositional dynamic programs over (nonterminal, stack) keys


class _KeyDp:
    """Demand-driven least fixpoint over (nonterminal, stack) keys."""

    def __init__(self, g, budget, emptiness):
        self.g = g
        self.budget = budget
        self.emptiness = emptiness
        self.val = {}
        self.deps = {}     # key -> set of keys it reads
        self.pruned = {}   # key -> True if it lossily pruned a push
        self.by_lhs = {}
        for p in g.productions:
            self.by_lhs.setdefault(p.lhs, []).append(p)

    def seed(self, key):
        if key not in self.val:
            self.val[key] = self.empty_value()
            self.deps[key] = set()
            self.pruned[key] = False

    def solve(self, roots):
        for k in roots:
            self.seed(k)
        changed = True
        while changed:
            changed = False
            before = len(self.val)
            for key in list(self.val):
                new = self.step(key)
                if new != self.val[key]:
                    self.val[key] = new
                    changed = True
            if len(self.val) != before:
                changed = True
        # propagate incompleteness through dependencies
        bad = {k for k, p in self.pruned.items() if p}
        grow = True
        while grow:
            grow = False
            for k, ds in self.deps.items():
                if k not in bad and ds & bad:
                    bad.add(k)
                    grow = True
        return bad

    def step(self, key):
        nt, stack = key
        acc = set(self.val[key])
        for p in self.by_lhs.get(nt, ()):
            if isinstance(p, TerminalRule):
                v = self.terminal_value(p.word)
                if v is not None:
                    acc.add(v)
            elif isinstance(p, BinaryRule):
                a = self.read(key, (p.left, stack))
                b = self.read(key, (p.right, stack))
                acc |= self.combine(a, b)
            elif isinstance(p, PushRule):
                tall = (p.sym,) + stack
                if len(tall) > self.budget.max_stack_height:
                    if not (self.emptiness and self.emptiness(p.rhs, tall)):
                        self.pruned[key] = True
                    continue
                acc |= self.read(key, (p.rhs, tall))
            elif isinstance(p, PopRule):
                if stack and stack[0] == p.sym:
                    acc |= self.read(key, (p.rhs, stack[1:]))
        return frozenset(acc)

    def read(self, src, key):
        self.seed(key)
        self.deps[src].add(key)
        return self.val[key]

    # value-domain hooks -----------------------------------------------
    def empty_value(self):
        return frozenset()

    def terminal_value(self, word):
        raise NotImplementedError

    def combine(self, a, b):
        raise NotImplementedError


class _WordDp(_KeyDp):
    def terminal_value(self, word):
        return word if len(word) <= self.budget.max_word_len else None

    def combine(self, a, b):
        cap = self.budget.max_word_len
        return {u + v for u in a for v in b if len(u) + len(v) <= cap}


class _LengthDp(_KeyDp):
    def terminal_value(self, word):
        return len(word) if len(word) <= self.budget.max_word_len else None

    def combine(self, a, b):
        cap = self.budget.max_word_len
        return {x + y for x in a for y in b if x + y <= cap}


class _DclDp(_KeyDp):
    """Values are sets of scattered subwords of a fixed target word."""

    def __init__(self, g, budget, emptiness, target):
        super().__init__(g, budget, emptiness)
        self.domain = subwords(target)

    def terminal_value(self, word):
        return None   # handled in step via combine on singletons

    def step(self, key):
        nt, stack = key
        acc = set(self.val[key])
        for p in self.by_lhs.get(nt, ()):
            if isinstance(p, TerminalRule):
                acc |= {u for u in self.domain if is_subword(u, p.word)}
        acc |= super().step(key)
        return frozenset(acc)

    def combine(self, a, b):
        return {u + v for u in a for v in b if u + v in self.domain}


def term_language_dp(g, budget, roots=None, emptiness=None, lengths=False):
    """Exact bounded language (or length) sets per (nonterminal, stack).

    Returns a DpResult whose table maps each materialized key to the set
    of derivable terminal words (lengths when lengths=True) up to
    max_word_len.  Keys that lossily pruned a push, or depend on one,
    are reported incomplete.
    """
    if roots is None:
        roots = [(g.start, ())]
    dp = (_LengthDp if lengths else _WordDp)(g, budget, emptiness)
    bad = dp.solve(roots)
    return DpResult(dict(dp.val), not bad & set(roots), frozenset(bad))


def dcl_member_oracle(g, word, budget, emptiness=None):
    """Does the downward closure of L(g) contain `word`?

    Computes, per (nonterminal, stack) key, the set of scattered
    subwords of `word` that embed into some derivable word.  Returns
    (member, complete); positive answers are always sound, a negative
    answer is only conclusive when complete is True.
    """
    root = (g.start, ())
    dp = _DclDp(g, budget, emptiness, word)
    bad = dp.solve([root])
    return word in dp.val[root], root not in bad
