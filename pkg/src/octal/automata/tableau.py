"""LTL to Buchi translation via on-the-fly tableau expansion, plus the
implication and equivalence checks built on top of it.

The construction is the classical cover one: tableau nodes carry obligations
split into ``new`` (not yet decomposed), ``old`` (holding now) and ``nxt``
(deferred one step).  Completed nodes that agree on (old, nxt) are merged.  The
result is a generalized Buchi automaton with one acceptance set per least-
fixpoint obligation (U and F subformulas), degeneralized round-robin into a
plain Buchi automaton.  Weak until and strong release are rewritten before
expansion::

    a W b  ->  (a U b) | G a
    a M b  ->  b U (a & b)

Transition labels are literal conjunctions; choice is represented by parallel
edges, never by disjunctive guards.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from octal.automata.buchi import Buchi, Label, Transition, is_empty
from octal.ltl import (
    Formula,
    and_,
    binary,
    is_nnf,
    iter_postfix,
    not_,
    to_nnf,
    unary,
    variables,
)


class TranslationBudgetError(RuntimeError):
    """Raised when the tableau exceeds an explicit node budget."""


def _expand_weak_strong(f: Formula) -> Formula:
    kind = f.kind
    if kind in ("var", "1", "N"):
        return f
    if f.right is None:
        return unary(kind, _expand_weak_strong(f.left))
    left = _expand_weak_strong(f.left)
    right = _expand_weak_strong(f.right)
    if kind == "W":
        return binary("|", binary("U", left, right), unary("G", left))
    if kind == "M":
        return binary("U", right, binary("&", left, right))
    return binary(kind, left, right)


@dataclass
class _Node:
    incoming: set[int]
    new: set[Formula]
    old: set[Formula]
    nxt: set[Formula]


_INIT = -1


def translate(f: Formula, node_budget: int | None = None) -> Buchi:
    """Build a Buchi automaton with the same language as the NNF formula ``f``.

    ``node_budget`` optionally bounds the number of tableau nodes; exceeding it
    raises :class:`TranslationBudgetError`.  The construction is exponential in
    the worst case, so callers are expected to bound formula size.
    """
    if not is_nnf(f):
        raise ValueError("translate requires a formula in negation normal form")
    g = _expand_weak_strong(f)

    # nodes: id -> (old, nxt, incoming); merged is keyed by frozen (old, nxt).
    old_sets: dict[int, frozenset[Formula]] = {}
    incoming: dict[int, set[int]] = {}
    merged: dict[tuple[frozenset[Formula], frozenset[Formula]], int] = {}
    ids = itertools.count()

    pending = [_Node(incoming={_INIT}, new={g}, old=set(), nxt=set())]
    while pending:
        node = pending.pop()
        if node.new:
            h = min(node.new, key=lambda x: x.key)
            node.new.discard(h)
            follow = _process(node, h)
            pending.extend(follow)
            continue
        key = (frozenset(node.old), frozenset(node.nxt))
        existing = merged.get(key)
        if existing is not None:
            incoming[existing] |= node.incoming
            continue
        nid = next(ids)
        if node_budget is not None and nid >= node_budget:
            raise TranslationBudgetError(f"tableau exceeded {node_budget} nodes")
        merged[key] = nid
        old_sets[nid] = key[0]
        incoming[nid] = set(node.incoming)
        pending.append(_Node(incoming={nid}, new=set(node.nxt), old=set(), nxt=set()))

    return _degeneralize(g, old_sets, incoming)


def _process(node: _Node, h: Formula) -> list[_Node]:
    """Decompose one obligation; returns the nodes to keep expanding (0, 1 or 2)."""
    kind = h.kind
    if h in node.old:
        return [node]
    if kind == "1":
        # Recorded so that an obligation fulfilled by the constant counts as met.
        node.old.add(h)
        return [node]
    if kind == "N":
        return []
    if kind == "var" or kind == "!":
        complement = h.left if kind == "!" else not_(h)
        if complement in node.old:
            return []
        node.old.add(h)
        return [node]
    node.old.add(h)
    if kind == "&":
        node.new |= {h.left, h.right} - node.old
        return [node]
    if kind == "X":
        node.nxt.add(h.left)
        return [node]
    if kind == "G":
        node.new |= {h.left} - node.old
        node.nxt.add(h)
        return [node]
    if kind == "|":
        first = _split(node, {h.left}, set())
        second = _split(node, {h.right}, set())
        return [first, second]
    if kind == "U":
        first = _split(node, {h.left}, {h})
        second = _split(node, {h.right}, set())
        return [first, second]
    if kind == "R":
        first = _split(node, {h.right}, {h})
        second = _split(node, {h.left, h.right}, set())
        return [first, second]
    if kind == "F":
        first = _split(node, set(), {h})
        second = _split(node, {h.left}, set())
        return [first, second]
    raise AssertionError(f"unexpected obligation kind {kind!r}")


def _split(node: _Node, extra_new: set[Formula], extra_nxt: set[Formula]) -> _Node:
    return _Node(
        incoming=set(node.incoming),
        new=node.new | (extra_new - node.old),
        old=set(node.old),
        nxt=node.nxt | extra_nxt,
    )


def _liveness_obligations(g: Formula) -> list[tuple[Formula, Formula]]:
    """(obligation, fulfilling subformula) pairs for U and F nodes, postfix order."""
    seen: set[Formula] = set()
    out: list[tuple[Formula, Formula]] = []
    for sub in iter_postfix(g):
        if sub in seen:
            continue
        if sub.kind == "U":
            seen.add(sub)
            out.append((sub, sub.right))
        elif sub.kind == "F":
            seen.add(sub)
            out.append((sub, sub.left))
    return out


def _node_label(old: frozenset[Formula]) -> Label:
    pos = frozenset(h.name for h in old if h.kind == "var")
    neg = frozenset(h.left.name for h in old if h.kind == "!")
    return Label(pos, neg)


def _degeneralize(
    g: Formula,
    old_sets: dict[int, frozenset[Formula]],
    incoming: dict[int, set[int]],
) -> Buchi:
    ap = tuple(sorted(variables(g)))
    n_nodes = len(old_sets)
    labels = {nid: _node_label(old) for nid, old in old_sets.items()}

    # Generalized edges, source-grouped.  A tableau node's label constrains the
    # letter read while entering it, so every edge into nid carries labels[nid].
    gba_adj: dict[int, list[tuple[int, Label]]] = {nid: [] for nid in range(n_nodes)}
    gba_adj[_INIT] = []
    for nid in range(n_nodes):
        for src in sorted(incoming[nid]):
            gba_adj[src].append((nid, labels[nid]))

    obligations = _liveness_obligations(g)
    accept_sets: list[set[int]] = []
    for obligation, fulfil in obligations:
        accept_sets.append(
            {nid for nid, old in old_sets.items() if obligation not in old or fulfil in old}
        )
    k = len(accept_sets)

    if k == 0:
        # No liveness obligations: the cover automaton with every state accepting.
        index = {_INIT: 0}
        for nid in range(n_nodes):
            index[nid] = nid + 1
        transitions = tuple(
            Transition(index[src], index[dst], lbl)
            for src in [_INIT, *range(n_nodes)]
            for dst, lbl in gba_adj[src]
        )
        return Buchi(
            n_states=n_nodes + 1,
            init=0,
            accepting=frozenset(range(n_nodes + 1)),
            ap=ap,
            transitions=transitions,
        )

    # Round-robin counter: advance past set i when leaving a state in it; a run
    # meets every acceptance set infinitely often iff it keeps revisiting
    # counter 0 at a state of set 0.
    start = (_INIT, 0)
    index: dict[tuple[int, int], int] = {start: 0}
    order = [start]
    transitions_list: list[Transition] = []
    frontier = [start]
    while frontier:
        state = frontier.pop(0)
        nid, counter = state
        src = index[state]
        advance = nid != _INIT and nid in accept_sets[counter]
        nxt_counter = (counter + 1) % k if advance else counter
        for dst_nid, lbl in gba_adj[nid]:
            nxt = (dst_nid, nxt_counter)
            dst = index.get(nxt)
            if dst is None:
                dst = len(order)
                index[nxt] = dst
                order.append(nxt)
                frontier.append(nxt)
            transitions_list.append(Transition(src, dst, lbl))
    accepting = frozenset(
        i for i, (nid, counter) in enumerate(order)
        if counter == 0 and nid != _INIT and nid in accept_sets[0]
    )
    return Buchi(
        n_states=len(order),
        init=0,
        accepting=accepting,
        ap=ap,
        transitions=tuple(transitions_list),
    )


def lang_empty(f: Formula, node_budget: int | None = None) -> bool:
    """Whether the NNF-normalized formula has an empty language."""
    empty, _ = is_empty(translate(to_nnf(f), node_budget=node_budget))
    return empty


def holds(source: Formula, spec: Formula, node_budget: int | None = None) -> bool:
    """Language inclusion: every behavior of ``source`` satisfies ``spec``.

    Decided as emptiness of ``source & !spec``; both inputs are normalized to
    NNF internally.
    """
    return lang_empty(and_(source, not_(spec)), node_budget=node_budget)


def equivalent(f1: Formula, f2: Formula, node_budget: int | None = None) -> bool:
    """Language equality, via inclusion in both directions."""
    return holds(f1, f2, node_budget=node_budget) and holds(f2, f1, node_budget=node_budget)
