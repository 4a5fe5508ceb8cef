"""Productiveness analysis of indexed grammars.

For a set X of nonterminals, a stack word z acts on X by

    z . X = { A | A[z] derives a sentential form over (X union T)* }

where the surviving nonterminals all carry an empty stack.  This module
computes the one-letter actions `act(f, X)` (and the empty-stack closure
`cl(X)` they need), the set of useful nonterminals, the universe of
annotation sets reachable from Useful, the focus matrices

    M[f, X](A, B)  iff  A[f] derives u B v with u, v over (X union T)*

and the per-set reachability relations used by the stack abstraction:

    A ~X~ B  iff  (A, X) derives u (B, X) v in the annotated grammar.

Everything is a demand-driven least fixpoint; each lookup key grows
monotonically, and the driver iterates rounds until no key changes.
"""

from __future__ import annotations

from .grammar import BinaryRule, PopRule, PushRule, TerminalRule


class CapExceeded(RuntimeError):
    """A configurable resource cap was hit; the result would be partial."""


class Analysis:
    def __init__(self, g, universe_cap=4096):
        self.g = g
        self.universe_cap = universe_cap
        self.by_lhs = {}
        for p in g.productions:
            self.by_lhs.setdefault(p.lhs, []).append(p)
        self.nts = sorted(g.symbols.nonterminals, key=str)
        self._act = {}    # (f, X) -> set
        self._cl = {}     # X -> set
        self._stale = False
        self._foc = {}    # (f, X) -> set of pairs
        self._efoc = {}   # X -> set of pairs
        self._stale_foc = False
        self._reach = None
        self._universe = None
        self._fold = {}   # stack tuple -> frozenset (action on empty set)

    # -- actions -----------------------------------------------------------

    def _need_cl(self, X):
        if X not in self._cl:
            self._cl[X] = set(X)
            self._stale = True
        return self._cl[X]

    def _need_act(self, f, X):
        if (f, X) not in self._act:
            if len(self._act) >= self.universe_cap:
                raise CapExceeded("action table cap exceeded")
            self._act[(f, X)] = set()
            self._stale = True
        return self._act[(f, X)]

    def _cl_round(self, X):
        cur = self._cl[X]
        changed = True
        while changed:
            changed = False
            for A in self.nts:
                if A in cur:
                    continue
                for p in self.by_lhs.get(A, ()):
                    if isinstance(p, TerminalRule):
                        ok = True
                    elif isinstance(p, BinaryRule):
                        ok = p.left in cur and p.right in cur
                    elif isinstance(p, PushRule):
                        ok = p.rhs in self._need_act(p.sym, X)
                    else:
                        ok = False
                    if ok:
                        cur.add(A)
                        changed = True
                        break

    def _act_round(self, f, X):
        cur = self._act[(f, X)]
        cl = self._need_cl(X)
        changed = True
        while changed:
            changed = False
            for A in self.nts:
                if A in cur:
                    continue
                for p in self.by_lhs.get(A, ()):
                    if isinstance(p, TerminalRule):
                        ok = True
                    elif isinstance(p, PopRule):
                        ok = p.sym == f and p.rhs in cl
                    elif isinstance(p, BinaryRule):
                        ok = p.left in cur and p.right in cur
                    else:
                        ok = p.rhs in self._need_act(
                            p.sym, frozenset(cur))
                    if ok:
                        cur.add(A)
                        changed = True
                        break

    def _settle(self):
        while self._stale:
            self._stale = False
            snapshot = {k: frozenset(v) for k, v in self._act.items()}
            snap_cl = {k: frozenset(v) for k, v in self._cl.items()}
            for X in list(self._cl):
                self._cl_round(X)
            for (f, X) in list(self._act):
                self._act_round(f, X)
            if any(frozenset(v) != snapshot.get(k) for k, v in self._act.items()) \
                    or any(frozenset(v) != snap_cl.get(k) for k, v in self._cl.items()):
                self._stale = True

    def cl(self, X):
        """Nonterminals A with A[empty stack] deriving into (X union T)*."""
        X = frozenset(X)
        self._need_cl(X)
        self._settle()
        return frozenset(self._cl[X])

    def act(self, f, X):
        """The one-letter action f . X."""
        X = frozenset(X)
        self._need_act(f, X)
        self._settle()
        return frozenset(self._act[(f, X)])

    def act_word(self, z, X):
        """z . X for a stack word z given topmost-first."""
        val = frozenset(X)
        for f in reversed(z):
            val = self.act(f, val)
        return val

    def useful(self):
        """Nonterminals deriving a terminal word from the empty stack."""
        return self.cl(frozenset())

    def is_empty(self):
        return self.g.start not in self.useful()

    def term_empty(self, nt, stack):
        """Exact emptiness of the language of nt[stack]."""
        stack = tuple(stack)
        if stack not in self._fold:
            if stack:
                self._fold[stack] = self.act_word(stack, frozenset())
            else:
                self._fold[stack] = self.useful()
        return nt not in self._fold[stack]

    # -- annotation universe ------------------------------------------------

    def universe(self):
        """All sets reachable from Useful under the one-letter actions."""
        if self._universe is None:
            letters = sorted(self.g.symbols.stack_symbols, key=str)
            seen = [self.useful()]
            seen_set = {seen[0]}
            i = 0
            while i < len(seen):
                X = seen[i]
                i += 1
                for f in letters:
                    Y = self.act(f, X)
                    if Y not in seen_set:
                        if len(seen) >= self.universe_cap:
                            raise CapExceeded("annotation universe cap exceeded")
                        seen_set.add(Y)
                        seen.append(Y)
            self._universe = seen
        return list(self._universe)

    # -- focus matrices -----------------------------------------------------

    def _need_foc(self, f, X):
        if (f, X) not in self._foc:
            self._foc[(f, X)] = set()
            self._stale_foc = True
        return self._foc[(f, X)]

    def _need_efoc(self, X):
        if X not in self._efoc:
            self._efoc[X] = {(B, B) for B in self.nts}
            self._stale_foc = True
        return self._efoc[X]

    def _efoc_round(self, X):
        cur = self._efoc[X]
        cl = self._need_cl(X)
        changed = True
        while changed:
            changed = False
            for A in self.nts:
                for p in self.by_lhs.get(A, ()):
                    new = set()
                    if isinstance(p, BinaryRule):
                        if p.right in cl:
                            new |= {(A, B) for (C, B) in cur if C == p.left}
                        if p.left in cl:
                            new |= {(A, B) for (C, B) in cur if C == p.right}
                    elif isinstance(p, PushRule):
                        new |= {(A, B) for (C, B)
                                in self._need_foc(p.sym, X) if C == p.rhs}
                    if not new <= cur:
                        cur |= new
                        changed = True

    def _foc_round(self, f, X):
        cur = self._foc[(f, X)]
        ef = self._need_efoc(X)
        gen = self._need_act(f, X)
        changed = True
        while changed:
            changed = False
            for A in self.nts:
                for p in self.by_lhs.get(A, ()):
                    new = set()
                    if isinstance(p, PopRule) and p.sym == f:
                        new |= {(A, B) for (C, B) in ef if C == p.rhs}
                    elif isinstance(p, BinaryRule):
                        if p.right in gen:
                            new |= {(A, B) for (C, B) in cur if C == p.left}
                        if p.left in gen:
                            new |= {(A, B) for (C, B) in cur if C == p.right}
                    elif isinstance(p, PushRule):
                        inner = self._need_foc(p.sym, frozenset(gen))
                        mids = {C for (D, C) in inner if D == p.rhs}
                        new |= {(A, B) for (C, B) in cur if C in mids}
                    if not new <= cur:
                        cur |= new
                        changed = True

    def _settle_foc(self):
        self._settle()
        while self._stale_foc:
            self._stale_foc = False
            snap_f = {k: frozenset(v) for k, v in self._foc.items()}
            snap_e = {k: frozenset(v) for k, v in self._efoc.items()}
            for X in list(self._efoc):
                self._efoc_round(X)
            for (f, X) in list(self._foc):
                self._foc_round(f, X)
            self._settle()
            if any(frozenset(v) != snap_f.get(k) for k, v in self._foc.items()) \
                    or any(frozenset(v) != snap_e.get(k) for k, v in self._efoc.items()):
                self._stale_foc = True

    def matrix(self, f, X):
        """Boolean matrix of focus pairs for the letter f under X."""
        X = frozenset(X)
        self._need_foc(f, X)
        self._settle_foc()
        return frozenset(self._foc[(f, X)])

    # -- reachability within the annotated grammar --------------------------

    def reach_all(self):
        """For each X in the universe, the relation A ~X~ B (see module doc)."""
        if self._reach is not None:
            return self._reach
        uni = self.universe()
        letters = sorted(self.g.symbols.stack_symbols, key=str)
        rel = {X: {(A, A) for A in X} for X in uni}
        uni_set = set(uni)
        changed = True
        while changed:
            changed = False
            for X in uni:
                cur = rel[X]
                new = set()
                for p in self.g.productions:
                    if isinstance(p, BinaryRule):
                        if p.lhs in X and p.left in X and p.right in X:
                            new.add((p.lhs, p.left))
                            new.add((p.lhs, p.right))
                    elif isinstance(p, PushRule):
                        Y = self.act(p.sym, X)
                        if p.lhs in X and p.rhs in Y and Y in uni_set:
                            m = self.matrix(p.sym, X)
                            for (B, D) in rel[Y]:
                                if B != p.rhs:
                                    continue
                                for (D2, C) in m:
                                    if D2 == D and C in X:
                                        new.add((p.lhs, C))
                if not new <= cur:
                    cur |= new
                    changed = True
                # transitive closure step
                extra = {(a, c) for (a, b) in cur for (b2, c) in cur
                         if b == b2} - cur
                if extra:
                    cur |= extra
                    changed = True
        self._reach = {X: frozenset(r) for X, r in rel.items()}
        return self._reach

    def reach(self, X):
        return self.reach_all()[frozenset(X)]
