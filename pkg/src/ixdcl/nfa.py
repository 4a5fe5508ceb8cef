"""NFAs with epsilon transitions, and the CFG-to-downward-closure-NFA
construction.

The downward closure of any context-free language is regular; this
module computes it symbolically.  A subword-closed language is a finite
union of ideals, each a product of atoms: an optional letter (a + eps)
or a star block B* over a letter set B.  The grammar's nonterminal
dependency graph is processed one strongly connected component at a
time, bottom-up:

  * a non-recursive nonterminal takes the union over its productions of
    products of child ideals;
  * an expansive component (some binary production stays entirely inside
    the component) can pump every letter it can ever produce, so each
    member denotes Gamma* over the component's reachable letters;
  * a non-expansive recursive component is linear: one derivation path
    can visit every in-component production arbitrarily often, so under
    subword closure every member denotes U* E V*, where U and V collect
    the letters of left and right factors and E joins the productions
    leaving the component.

The final expression for the start symbol is then unfolded into a small
NFA.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .cfg import CfgBinary, CfgTerminal, CfgUnary, trim_cfg

INFINITE = "infinite"


@dataclass
class Nfa:
    alphabet: frozenset
    n_states: int = 0
    transitions: list = field(default_factory=list)  # (src, letter|None, dst)
    initial: set = field(default_factory=set)
    final: set = field(default_factory=set)

    def add_state(self):
        self.n_states += 1
        return self.n_states - 1

    def add_edge(self, src, letter, dst):
        self.transitions.append((src, letter, dst))

    def embed(self, other):
        """Copy another NFA into this one; returns its state offset."""
        off = self.n_states
        self.n_states += other.n_states
        for (s, a, t) in other.transitions:
            self.transitions.append((s + off, a, t + off))
        return off

    def to_dict(self):
        return {
            "states": list(range(self.n_states)),
            "alphabet": sorted(self.alphabet),
            "initial": sorted(self.initial),
            "final": sorted(self.final),
            "transitions": sorted(
                [s, a if a is not None else "", t]
                for (s, a, t) in self.transitions),
        }


def nfa_from_dict(d):
    nfa = Nfa(frozenset(d["alphabet"]))
    nfa.n_states = len(d["states"])
    nfa.initial = set(d["initial"])
    nfa.final = set(d["final"])
    for (s, a, t) in d["transitions"]:
        nfa.add_edge(s, a if a != "" else None, t)
    return nfa


def _eps_closure(nfa, states):
    adj = {}
    for (s, a, t) in nfa.transitions:
        if a is None:
            adj.setdefault(s, []).append(t)
    out = set(states)
    queue = list(states)
    while queue:
        s = queue.pop()
        for t in adj.get(s, ()):
            if t not in out:
                out.add(t)
                queue.append(t)
    return out


def nfa_member(nfa, word):
    cur = _eps_closure(nfa, nfa.initial)
    step = {}
    for (s, a, t) in nfa.transitions:
        if a is not None:
            step.setdefault((s, a), set()).add(t)
    for c in word:
        nxt = set()
        for s in cur:
            nxt |= step.get((s, c), set())
        cur = _eps_closure(nfa, nxt)
        if not cur:
            return False
    return bool(cur & nfa.final)


def word_subword_nfa(word, alphabet=None):
    """An NFA for all scattered subwords of a single word."""
    nfa = Nfa(frozenset(alphabet if alphabet is not None else set(word)))
    states = [nfa.add_state() for _ in range(len(word) + 1)]
    nfa.initial = {states[0]}
    nfa.final = {states[-1]}
    for i, c in enumerate(word):
        nfa.add_edge(states[i], c, states[i + 1])
        nfa.add_edge(states[i], None, states[i + 1])
    return nfa


def dcl_close(nfa):
    """The downward closure of an NFA language: every letter transition
    also becomes an epsilon transition."""
    out = Nfa(nfa.alphabet, nfa.n_states, list(nfa.transitions),
              set(nfa.initial), set(nfa.final))
    for (s, a, t) in nfa.transitions:
        if a is not None:
            out.add_edge(s, None, t)
    return out


# ---------------------------------------------------------------------------
# determinization, minimization, comparison


@dataclass
class Dfa:
    alphabet: frozenset
    n_states: int
    delta: dict          # (state, letter) -> state, total
    initial: int
    final: set


def determinize(nfa, cap=100000):
    """Subset construction; the result is total (has a sink if needed)."""
    from .analysis import CapExceeded

    alphabet = sorted(nfa.alphabet)
    step = {}
    eps = {}
    for (s, a, t) in nfa.transitions:
        if a is not None:
            step.setdefault((s, a), set()).add(t)
        else:
            eps.setdefault(s, []).append(t)

    def close(states):
        out = set(states)
        queue = list(states)
        while queue:
            s = queue.pop()
            for t in eps.get(s, ()):
                if t not in out:
                    out.add(t)
                    queue.append(t)
        return out

    start = frozenset(close(nfa.initial))
    ids = {start: 0}
    order = [start]
    delta = {}
    i = 0
    while i < len(order):
        cur = order[i]
        i += 1
        for a in alphabet:
            nxt = set()
            for s in cur:
                nxt |= step.get((s, a), set())
            nxt = frozenset(close(nxt))
            if nxt not in ids:
                if len(order) >= cap:
                    raise CapExceeded("determinization cap exceeded")
                ids[nxt] = len(order)
                order.append(nxt)
            delta[(ids[cur], a)] = ids[nxt]
    final = {ids[st] for st in order if st & nfa.final}
    return Dfa(frozenset(alphabet), len(order), delta, 0, final)


def minimize(dfa):
    """Moore partition refinement; keeps an explicit dead state if present."""
    alphabet = sorted(dfa.alphabet)
    part = {q: (q in dfa.final) for q in range(dfa.n_states)}
    while True:
        sig = {q: (part[q],) + tuple(part[dfa.delta[(q, a)]]
                                     for a in alphabet)
               for q in range(dfa.n_states)}
        classes = {}
        for q in range(dfa.n_states):
            classes.setdefault(sig[q], []).append(q)
        new = {}
        for i, (_, qs) in enumerate(sorted(classes.items(),
                                           key=lambda kv: min(kv[1]))):
            for q in qs:
                new[q] = i
        if new == part:
            break
        part = new
    n = len(set(part.values()))
    delta = {(part[q], a): part[dfa.delta[(q, a)]]
             for q in range(dfa.n_states) for a in alphabet}
    final = {part[q] for q in dfa.final}
    # drop unreachable classes
    reach = {part[dfa.initial]}
    queue = [part[dfa.initial]]
    while queue:
        q = queue.pop()
        for a in alphabet:
            t = delta[(q, a)]
            if t not in reach:
                reach.add(t)
                queue.append(t)
    keep = sorted(reach)
    remap = {q: i for i, q in enumerate(keep)}
    return Dfa(dfa.alphabet, len(keep),
               {(remap[q], a): remap[delta[(q, a)]]
                for q in keep for a in alphabet},
               remap[part[dfa.initial]], {remap[q] for q in final if q in remap})


def dfa_member(dfa, word):
    q = dfa.initial
    for c in word:
        q = dfa.delta[(q, c)]
    return q in dfa.final


def nfa_inclusion(n1, n2, cap=100000):
    """Is L(n1) a subset of L(n2)?  Returns (bool, counterexample|None)
    with a shortest counterexample on failure."""
    alphabet = sorted(n1.alphabet | n2.alphabet)
    d1 = determinize(Nfa(frozenset(alphabet), n1.n_states,
                         list(n1.transitions), set(n1.initial),
                         set(n1.final)), cap)
    d2 = determinize(Nfa(frozenset(alphabet), n2.n_states,
                         list(n2.transitions), set(n2.initial),
                         set(n2.final)), cap)
    start = (d1.initial, d2.initial)
    seen = {start: None}
    queue = deque([start])
    while queue:
        (q1, q2) = queue.popleft()
        if q1 in d1.final and q2 not in d2.final:
            # rebuild the witness word
            word = []
            cur = (q1, q2)
            while seen[cur] is not None:
                cur, a = seen[cur]
                word.append(a)
            return False, "".join(reversed(word))
        for a in alphabet:
            nxt = (d1.delta[(q1, a)], d2.delta[(q2, a)])
            if nxt not in seen:
                seen[nxt] = ((q1, q2), a)
                queue.append(nxt)
    return True, None


def nfa_equivalence(n1, n2, cap=100000):
    """Returns (equal, counterexample|None); the counterexample is a
    shortest word in the symmetric difference."""
    ok12, cex12 = nfa_inclusion(n1, n2, cap)
    ok21, cex21 = nfa_inclusion(n2, n1, cap)
    if ok12 and ok21:
        return True, None
    cands = [c for c in (cex12, cex21) if c is not None]
    return False, min(cands, key=lambda w: (len(w), w))


def longest_word_or_infinite(nfa):
    """Length of a longest accepted word, INFINITE if unbounded, or None
    for the empty language.  Epsilon-only cycles do not pump length."""
    # trim to states on an accepting path
    fwd = {}
    bwd = {}
    for (s, a, t) in nfa.transitions:
        fwd.setdefault(s, []).append((a, t))
        bwd.setdefault(t, []).append((a, s))
    def closure(starts, adj):
        out = set(starts)
        queue = list(starts)
        while queue:
            s = queue.pop()
            for (_, t) in adj.get(s, ()):
                if t not in out:
                    out.add(t)
                    queue.append(t)
        return out
    live = closure(nfa.initial, fwd) & closure(nfa.final, bwd)
    if not live:
        return None
    edges = [(s, a, t) for (s, a, t) in nfa.transitions
             if s in live and t in live]
    # contract epsilon-connected components, then longest path in the DAG
    # over letter edges; a letter edge within a cycle means unbounded.
    n = nfa.n_states
    index = {}
    order = []
    comp = {}
    # Tarjan over ALL live edges to find cycles
    import sys
    sys.setrecursionlimit(10000)
    adj = {}
    for (s, a, t) in edges:
        adj.setdefault(s, []).append(t)
    sccs = _tarjan(sorted(live), adj)
    for i, c in enumerate(sccs):
        for q in c:
            comp[q] = i
    for (s, a, t) in edges:
        if a is not None and comp[s] == comp[t]:
            return INFINITE
    # condensation DAG: longest letter-path
    cadj = {}
    for (s, a, t) in edges:
        if comp[s] != comp[t] or a is not None:
            cadj.setdefault(comp[s], []).append((1 if a is not None else 0,
                                                 comp[t]))
    memo = {}
    def longest(c):
        if c not in memo:
            memo[c] = 0
            best = 0
            for (w, c2) in cadj.get(c, ()):
                if c2 == c:
                    continue
                best = max(best, w + longest(c2))
            memo[c] = best
        return memo[c]
    starts = {comp[q] for q in nfa.initial if q in live}
    return max(longest(c) for c in starts)


def _tarjan(nodes, adj):
    index = {}
    low = {}
    on = set()
    stack = []
    out = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(adj.get(w, ()))))
                    advanced = True
                    break
                elif w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


# ---------------------------------------------------------------------------
# CFG -> downward-closure NFA


# Ideals are tuples of atoms ("l", letter) for an optional letter and
# ("s", frozenset) for a star block; a subword-closed language is a
# frozenset of ideals kept as an antichain under ideal inclusion.


def _norm_ideal(atoms):
    """Drop empty star blocks and atoms absorbed by an adjacent star."""
    out = []
    for atom in atoms:
        kind, val = atom
        if kind == "s":
            if not val:
                continue
            while out:
                pk, pv = out[-1]
                if (pk == "l" and pv in val) or (pk == "s" and pv <= val):
                    out.pop()
                else:
                    break
            if out and out[-1][0] == "s" and val <= out[-1][1]:
                continue
        else:
            if out and out[-1][0] == "s" and val in out[-1][1]:
                continue
        out.append(atom)
    return tuple(out)


def _ideal_le(small, big):
    """Ideal inclusion by greedy left-to-right matching."""
    j = 0
    for kind, val in small:
        ok = False
        while j < len(big):
            bk, bv = big[j]
            if bk == "s":
                if kind == "l" and val in bv:
                    ok = True
                    break
                if kind == "s" and val <= bv:
                    ok = True
                    break
                j += 1
            else:
                j += 1
                if kind == "l" and bv == val:
                    ok = True
                    break
        if not ok:
            return False
    return True


def _ideal_key(ideal):
    return tuple((k, v if k == "l" else tuple(sorted(v))) for k, v in ideal)


def _antichain(ideals):
    items = sorted(set(ideals), key=_ideal_key)
    out = []
    for i, small in enumerate(items):
        dominated = False
        for k, big in enumerate(items):
            if k == i:
                continue
            if _ideal_le(small, big):
                if k > i and _ideal_le(big, small):
                    continue   # mutual inclusion: keep the earlier one
                dominated = True
                break
        if not dominated:
            out.append(small)
    return frozenset(out)


def _sre_concat(xs, ys):
    return _antichain(_norm_ideal(x + y) for x in xs for y in ys)


def _word_ideal(word):
    return _norm_ideal(tuple(("l", c) for c in word))


def cfg_dcl_nfa(cfg, cap=100000):
    """An NFA for the downward closure of a context-free language."""
    cfg = trim_cfg(cfg)
    alphabet = frozenset(c for r in cfg.rules
                         if isinstance(r, CfgTerminal) for c in r.word)
    out = Nfa(frozenset(cfg.terminals) | alphabet)
    if not cfg.rules or cfg.start not in {r.lhs for r in cfg.rules}:
        s = out.add_state()
        out.initial = {s}
        return out   # empty language, no final state

    by_lhs = {}
    for r in cfg.rules:
        by_lhs.setdefault(r.lhs, []).append(r)

    dep = {nt: set() for nt in by_lhs}
    for r in cfg.rules:
        kids = ([r.left, r.right] if isinstance(r, CfgBinary)
                else [r.rhs] if isinstance(r, CfgUnary) else [])
        dep[r.lhs].update(k for k in kids if k in by_lhs)
    order = {nt: i for i, nt in enumerate(by_lhs)}
    sccs = _tarjan(sorted(by_lhs, key=lambda nt: order[nt]),
                   {nt: sorted(dep[nt], key=lambda k: order[k])
                    for nt in dep})
    comp_of = {}
    for i, c in enumerate(sccs):
        for nt in c:
            comp_of[nt] = i

    # letters each nonterminal can ever produce
    alph = {nt: set() for nt in by_lhs}
    changed = True
    while changed:
        changed = False
        for r in cfg.rules:
            cur = alph[r.lhs]
            if isinstance(r, CfgTerminal):
                new = set(r.word)
            elif isinstance(r, CfgBinary):
                new = alph[r.left] | alph[r.right]
            else:
                new = alph[r.rhs]
            if not new <= cur:
                cur |= new
                changed = True

    sre = {}   # nt -> frozenset of ideals

    def rule_sre(r):
        if isinstance(r, CfgTerminal):
            return frozenset([_word_ideal(r.word)])
        if isinstance(r, CfgBinary):
            return _sre_concat(sre[r.left], sre[r.right])
        return sre[r.rhs]

    # Tarjan emits components dependencies-first.
    for members in map(set, sccs):
        recursive = any(
            (isinstance(r, CfgBinary) and (r.left in members
                                           or r.right in members)) or
            (isinstance(r, CfgUnary) and r.rhs in members)
            for nt in members for r in by_lhs[nt])
        if not recursive:
            for nt in members:
                ideals = frozenset()
                for r in by_lhs[nt]:
                    ideals |= rule_sre(r)
                sre[nt] = _antichain(ideals)
                if len(sre[nt]) > cap:
                    from .analysis import CapExceeded
                    raise CapExceeded("closure expression cap exceeded")
            continue
        expansive = any(
            isinstance(r, CfgBinary) and r.left in members
            and r.right in members
            for nt in members for r in by_lhs[nt])
        if expansive:
            gamma = frozenset().union(*(alph[nt] for nt in members))
            value = frozenset([_norm_ideal((("s", gamma),))])
            for nt in members:
                sre[nt] = value
            continue
        # linear component: U* E V*, shared by every member
        up, down = set(), set()
        exits = frozenset()
        for nt in members:
            for r in by_lhs[nt]:
                if isinstance(r, CfgBinary) and r.left in members:
                    down |= alph[r.right]
                elif isinstance(r, CfgBinary) and r.right in members:
                    up |= alph[r.left]
                elif isinstance(r, CfgUnary) and r.rhs in members:
                    pass
                else:
                    exits |= rule_sre(r)
        pre = (("s", frozenset(up)),)
        post = (("s", frozenset(down)),)
        value = _antichain(_norm_ideal(pre + e + post) for e in exits)
        for nt in members:
            sre[nt] = value

    init = out.add_state()
    fin = out.add_state()
    out.initial = {init}
    out.final = {fin}
    for ideal in sorted(sre[cfg.start], key=_ideal_key):
        cur = init
        for kind, val in ideal:
            nxt = out.add_state()
            if kind == "l":
                out.add_edge(cur, val, nxt)
                out.add_edge(cur, None, nxt)
            else:
                out.add_edge(cur, None, nxt)
                for c in sorted(val):
                    out.add_edge(nxt, c, nxt)
            cur = nxt
        out.add_edge(cur, None, fin)
    if not sre[cfg.start]:
        out.final = set()
    return out
