"""Nondeterministic Buchi automata with literal-conjunction transition labels.

Automata are immutable after construction and all operations here are pure, so
independent inputs can be processed in parallel without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from octal.ltl import VARIABLES

Assignment = Mapping[str, bool]


@dataclass(frozen=True)
class Label:
    """A satisfiable conjunction of literals; the empty conjunction is true."""

    pos: frozenset[str] = frozenset()
    neg: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        clash = self.pos & self.neg
        if clash:
            raise ValueError(f"contradictory label: {sorted(clash)} both positive and negated")
        for v in self.pos | self.neg:
            if len(v) != 1 or v not in VARIABLES:
                raise ValueError(f"label variable must be a single letter a-z, got {v!r}")

    @property
    def is_true(self) -> bool:
        return not self.pos and not self.neg

    def variables(self) -> frozenset[str]:
        return self.pos | self.neg

    def mentions(self, name: str) -> bool:
        return name in self.pos or name in self.neg

    def satisfied_by(self, assignment: Assignment) -> bool:
        return all(assignment[v] for v in self.pos) and not any(assignment[v] for v in self.neg)

    def conjoin(self, other: "Label") -> "Label | None":
        """Conjunction of two labels, or None when jointly unsatisfiable."""
        pos = self.pos | other.pos
        neg = self.neg | other.neg
        if pos & neg:
            return None
        return Label(pos, neg)

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.pos)), tuple(sorted(self.neg)))

    def format(self) -> str:
        if self.is_true:
            return "1"
        parts = sorted(self.pos) + ["!" + v for v in sorted(self.neg)]
        return " & ".join(parts)


TRUE_LABEL = Label()


class Transition(NamedTuple):
    src: int
    dst: int
    label: Label


@dataclass(frozen=True)
class Buchi:
    """Tuple (states 0..n-1, single initial state, accepting set, AP list, edges)."""

    n_states: int
    init: int
    accepting: frozenset[int]
    ap: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def __post_init__(self) -> None:
        if self.n_states < 1:
            raise ValueError("automaton needs at least one state")
        if not 0 <= self.init < self.n_states:
            raise ValueError(f"initial state {self.init} out of range")
        if not all(0 <= q < self.n_states for q in self.accepting):
            raise ValueError("accepting state out of range")
        if list(self.ap) != sorted(set(self.ap)):
            raise ValueError("AP list must be sorted and duplicate-free")
        for name in self.ap:
            if len(name) != 1 or name not in VARIABLES:
                raise ValueError(f"AP must be a single letter a-z, got {name!r}")
        for t in self.transitions:
            if not (0 <= t.src < self.n_states and 0 <= t.dst < self.n_states):
                raise ValueError(f"transition endpoint out of range: {t}")
            extra = t.label.variables() - set(self.ap)
            if extra:
                raise ValueError(f"transition label uses undeclared APs {sorted(extra)}")

    def out_edges(self) -> list[list[tuple[int, Label]]]:
        adj: list[list[tuple[int, Label]]] = [[] for _ in range(self.n_states)]
        for t in self.transitions:
            adj[t.src].append((t.dst, t.label))
        return adj


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic word ``prefix . cycle^omega`` over truth assignments."""

    prefix: tuple[Assignment, ...]
    cycle: tuple[Assignment, ...]

    def __post_init__(self) -> None:
        if len(self.cycle) < 1:
            raise ValueError("cycle must be nonempty")

    @property
    def n_positions(self) -> int:
        """Number of distinct positions: prefix letters plus one per cycle letter."""
        return len(self.prefix) + len(self.cycle)

    def letter(self, position: int) -> Assignment:
        if position < len(self.prefix):
            return self.prefix[position]
        return self.cycle[position - len(self.prefix)]

    def succ(self, position: int) -> int:
        nxt = position + 1
        return nxt if nxt < self.n_positions else len(self.prefix)

    def covers(self, names: Iterable[str]) -> bool:
        wanted = set(names)
        return all(wanted <= set(a) for a in self.prefix + self.cycle)


def universal_buchi(ap: Iterable[str] = ()) -> Buchi:
    """Single accepting state with a true self-loop; accepts every word."""
    return Buchi(
        n_states=1,
        init=0,
        accepting=frozenset({0}),
        ap=tuple(sorted(set(ap))),
        transitions=(Transition(0, 0, TRUE_LABEL),),
    )


def product(b1: Buchi, b2: Buchi) -> Buchi:
    """Intersection automaton via the three-flag construction.

    Flag 0 waits for an accepting state of ``b1``, flag 1 for one of ``b2``, and
    flag 2 marks completion of one round before resetting.  States are triples
    (q1, q2, flag) restricted to what is reachable, so the result has at most
    3 * |Q1| * |Q2| states.  Edges exist only where the two labels are jointly
    satisfiable.
    """
    ap = tuple(sorted(set(b1.ap) | set(b2.ap)))
    adj1 = b1.out_edges()
    adj2 = b2.out_edges()

    start = (b1.init, b2.init, 0)
    index: dict[tuple[int, int, int], int] = {start: 0}
    order = [start]
    transitions: list[Transition] = []
    frontier = [start]
    while frontier:
        state = frontier.pop(0)
        q1, q2, flag = state
        src = index[state]
        for d1, l1 in adj1[q1]:
            for d2, l2 in adj2[q2]:
                joint = l1.conjoin(l2)
                if joint is None:
                    continue
                if flag == 0:
                    nxt_flag = 1 if d1 in b1.accepting else 0
                elif flag == 1:
                    nxt_flag = 2 if d2 in b2.accepting else 1
                else:
                    nxt_flag = 0
                nxt = (d1, d2, nxt_flag)
                dst = index.get(nxt)
                if dst is None:
                    dst = len(order)
                    index[nxt] = dst
                    order.append(nxt)
                    frontier.append(nxt)
                transitions.append(Transition(src, dst, joint))
    accepting = frozenset(i for i, (_, _, flag) in enumerate(order) if flag == 2)
    return Buchi(
        n_states=len(order),
        init=0,
        accepting=accepting,
        ap=ap,
        transitions=tuple(transitions),
    )


def accepts(b: Buchi, w: LassoWord) -> bool:
    """Whether some run of ``b`` over ``w`` visits an accepting state infinitely often.

    Decided on the finite product of the lasso's position structure with the
    automaton: the word is accepted iff a reachable cycle of that product contains
    a node whose automaton component is accepting.
    """
    if not w.covers(b.ap):
        raise ValueError("word assignments do not cover the automaton's AP list")
    n_pos = w.n_positions
    adj = b.out_edges()

    def node(q: int, p: int) -> int:
        return q * n_pos + p

    succ: list[list[int]] = [[] for _ in range(b.n_states * n_pos)]
    for q in range(b.n_states):
        for p in range(n_pos):
            letter = w.letter(p)
            np_ = w.succ(p)
            succ[node(q, p)] = [node(d, np_) for d, lbl in adj[q] if lbl.satisfied_by(letter)]

    start = node(b.init, 0)
    reachable = _reachable_from(start, succ)
    comp = _scc_components(len(succ), succ)
    cyclic = _cyclic_components(comp, succ)
    for q in b.accepting:
        for p in range(n_pos):
            v = node(q, p)
            if v in reachable and comp[v] in cyclic:
                return True
    return False


def is_empty(b: Buchi) -> tuple[bool, LassoWord | None]:
    """Nested depth-first emptiness check.

    Returns ``(True, None)`` when no reachable accepting cycle exists, otherwise
    ``(False, w)`` with a witness lasso accepted by ``b``.  The outer (blue)
    search launches the inner (red) search from accepting states in postorder;
    the red search reports a cycle as soon as it reaches a state on the blue
    path, which includes its own seed.
    """
    adj = b.out_edges()
    blue = [False] * b.n_states
    red = [False] * b.n_states
    on_path: dict[int, int] = {}

    # Frames: [state, next edge index, label of the edge that entered the state].
    stack: list[list] = [[b.init, 0, None]]
    blue[b.init] = True
    on_path[b.init] = 0
    while stack:
        frame = stack[-1]
        state, edge_i = frame[0], frame[1]
        if edge_i < len(adj[state]):
            frame[1] += 1
            dst, lbl = adj[state][edge_i]
            if not blue[dst]:
                blue[dst] = True
                on_path[dst] = len(stack)
                stack.append([dst, 0, lbl])
            continue
        if state in b.accepting:
            hit = _red_search(state, adj, red, on_path)
            if hit is not None:
                red_labels, hit_state = hit
                return False, _witness(b, stack, on_path[hit_state], red_labels)
        del on_path[state]
        stack.pop()
    return True, None


def _red_search(seed, adj, red, on_path):
    red[seed] = True
    frames: list[list] = [[seed, 0, None]]
    while frames:
        frame = frames[-1]
        state, edge_i = frame[0], frame[1]
        if edge_i < len(adj[state]):
            frame[1] += 1
            dst, lbl = adj[state][edge_i]
            if dst in on_path:
                labels = [f[2] for f in frames[1:]] + [lbl]
                return labels, dst
            if not red[dst]:
                red[dst] = True
                frames.append([dst, 0, lbl])
            continue
        frames.pop()
    return None


def _witness(b: Buchi, stack, hit_depth: int, red_labels) -> LassoWord:
    blue_labels = [frame[2] for frame in stack[1:]]
    prefix = blue_labels[:hit_depth]
    cycle = blue_labels[hit_depth:] + red_labels
    return LassoWord(
        prefix=tuple(_pick_assignment(lbl, b.ap) for lbl in prefix),
        cycle=tuple(_pick_assignment(lbl, b.ap) for lbl in cycle),
    )


def _pick_assignment(label: Label, ap: tuple[str, ...]) -> dict[str, bool]:
    # Variables the label does not constrain default to false.
    return {v: v in label.pos for v in ap}


def _reachable_from(start: int, succ: list[list[int]]) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for u in succ[v]:
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return seen


def _scc_components(n: int, succ: list[list[int]]) -> list[int]:
    """Tarjan's algorithm, iterative.  Returns a component id per node."""
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    tarjan_stack: list[int] = []
    counter = 0
    n_comps = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, child_i = work.pop()
            if child_i == 0:
                index[v] = low[v] = counter
                counter += 1
                tarjan_stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(child_i, len(succ[v])):
                u = succ[v][i]
                if index[u] == -1:
                    work.append((v, i + 1))
                    work.append((u, 0))
                    advanced = True
                    break
                if on_stack[u]:
                    low[v] = min(low[v], index[u])
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    u = tarjan_stack.pop()
                    on_stack[u] = False
                    comp[u] = n_comps
                    if u == v:
                        break
                n_comps += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def _cyclic_components(comp: list[int], succ: list[list[int]]) -> set[int]:
    """Components that contain a cycle: size > 1, or a single node with a self-loop."""
    size: dict[int, int] = {}
    for c in comp:
        size[c] = size.get(c, 0) + 1
    cyclic = {c for c, s in size.items() if s > 1}
    for v, outs in enumerate(succ):
        if v in outs:
            cyclic.add(comp[v])
    return cyclic
