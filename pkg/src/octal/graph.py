"""Union graph construction and node feature encoding.

A system automaton becomes an undirected bipartite graph (state nodes on one
side, transition nodes on the other), the specification becomes its expression
tree with negation folded into the leaves, and the two are joined by linking
every leaf to every transition whose label mentions the same variable, in
either polarity.  Each node carries a 66-slot feature vector:

====  =====  ========================================================
part  slots  meaning
====  =====  ========================================================
I     1      constant true/false (shared slot)
II    26     variables a..z
III   26     negated variables !a..!z
IV    9      operators, fixed order G F R W M X U & |
V     2      state flags: is-initial, is-final
VI    2      raw source and destination state indices (transitions)
====  =====  ========================================================

Parts I-V are 0/1 indicators; part VI holds unnormalized state numbers and is
zero outside transition nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from octal.automata.buchi import Buchi, Label
from octal.ltl import Formula, formula_length, is_nnf

FEATURE_WIDTH = 66

OPERATOR_ORDER = ("G", "F", "R", "W", "M", "X", "U", "&", "|")

SLOT_CONST = 0
SLOT_VAR_BASE = 1
SLOT_NEG_BASE = 27
SLOT_OP_BASE = 53
SLOT_INITIAL = 62
SLOT_FINAL = 63
SLOT_SRC = 64
SLOT_DST = 65


@dataclass(frozen=True)
class FeatureLayout:
    """Slot arithmetic for the 66-wide node encoding."""

    width: int = FEATURE_WIDTH
    operators: tuple[str, ...] = OPERATOR_ORDER

    @staticmethod
    def var_slot(name: str, negated: bool = False) -> int:
        base = SLOT_NEG_BASE if negated else SLOT_VAR_BASE
        return base + (ord(name) - ord("a"))

    @staticmethod
    def op_slot(op: str) -> int:
        return SLOT_OP_BASE + OPERATOR_ORDER.index(op)


@dataclass(frozen=True)
class StateNode:
    role = "state"
    index: int
    is_initial: bool
    is_accepting: bool


@dataclass(frozen=True)
class TransitionNode:
    role = "transition"
    index: int
    src: int
    dst: int
    label: Label


@dataclass(frozen=True)
class OperatorNode:
    role = "operator"
    op: str


@dataclass(frozen=True)
class LeafNode:
    role = "leaf"
    var: str = ""
    negated: bool = False
    const: str = ""

    @property
    def is_const(self) -> bool:
        return bool(self.const)


GraphNode = StateNode | TransitionNode | OperatorNode | LeafNode


@dataclass
class UnionGraph:
    """Node list in canonical order (states, transitions, then tree postfix)
    plus an undirected edge list over node indices."""

    nodes: list[GraphNode] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)
    n_states: int = 0
    n_transitions: int = 0

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def tree_nodes(self) -> range:
        return range(self.n_states + self.n_transitions, len(self.nodes))


def build_system_graph(b: Buchi) -> UnionGraph:
    """Bipartite system fragment: one node per state and per transition, an edge
    between a state and a transition iff the state is its source or destination.
    A self-loop contributes a single edge."""
    g = UnionGraph(n_states=b.n_states, n_transitions=len(b.transitions))
    for q in range(b.n_states):
        g.nodes.append(StateNode(index=q, is_initial=q == b.init, is_accepting=q in b.accepting))
    for i, t in enumerate(b.transitions):
        node_index = b.n_states + i
        g.nodes.append(TransitionNode(index=i, src=t.src, dst=t.dst, label=t.label))
        g.edges.append((t.src, node_index))
        if t.dst != t.src:
            g.edges.append((t.dst, node_index))
    return g


def build_spec_tree(f: Formula) -> UnionGraph:
    """Expression-tree fragment of an NNF formula, nodes in postfix order.

    Negation is folded into the leaves, so internal nodes range over the nine
    operators of the encoding and leaves are literals or constants.
    """
    if not is_nnf(f):
        raise ValueError("specification tree requires a formula in negation normal form")
    g = UnionGraph()

    def walk(node: Formula) -> int:
        if node.kind == "var":
            g.nodes.append(LeafNode(var=node.name))
            return len(g.nodes) - 1
        if node.kind == "!":
            g.nodes.append(LeafNode(var=node.left.name, negated=True))
            return len(g.nodes) - 1
        if node.kind in ("1", "N"):
            g.nodes.append(LeafNode(const=node.kind))
            return len(g.nodes) - 1
        child_ids = [walk(c) for c in node.children()]
        g.nodes.append(OperatorNode(op=node.kind))
        me = len(g.nodes) - 1
        for c in child_ids:
            g.edges.append((c, me))
        return me

    walk(f)
    return g


def build_union(system: UnionGraph, tree: UnionGraph) -> UnionGraph:
    """Join the fragments; the extra edges link each leaf to each transition
    mentioning the same variable (either polarity on either side).  A constant
    true leaf links to transitions with the empty (true) label."""
    offset = system.n_states + system.n_transitions
    nodes = list(system.nodes) + list(tree.nodes)
    edges = list(system.edges) + [(u + offset, v + offset) for u, v in tree.edges]

    transitions = [
        (i, node) for i, node in enumerate(system.nodes) if isinstance(node, TransitionNode)
    ]
    for leaf_at, leaf in enumerate(tree.nodes):
        if not isinstance(leaf, LeafNode):
            continue
        leaf_index = leaf_at + offset
        for trans_index, trans in transitions:
            if leaf.is_const:
                if leaf.const == "1" and trans.label.is_true:
                    edges.append((trans_index, leaf_index))
            elif trans.label.mentions(leaf.var):
                edges.append((trans_index, leaf_index))
    return UnionGraph(
        nodes=nodes,
        edges=edges,
        n_states=system.n_states,
        n_transitions=system.n_transitions,
    )


def build_union_graph(b: Buchi, f: Formula) -> UnionGraph:
    """Full pipeline for one (system, specification) pair."""
    return build_union(build_system_graph(b), build_spec_tree(f))


def encode_nodes(c: UnionGraph) -> np.ndarray:
    """Feature matrix of shape (n_nodes, 66), canonical node order."""
    feats = np.zeros((c.n_nodes, FEATURE_WIDTH), dtype=np.float64)
    for i, node in enumerate(c.nodes):
        if isinstance(node, StateNode):
            feats[i, SLOT_INITIAL] = 1.0 if node.is_initial else 0.0
            feats[i, SLOT_FINAL] = 1.0 if node.is_accepting else 0.0
        elif isinstance(node, TransitionNode):
            if node.label.is_true:
                feats[i, SLOT_CONST] = 1.0
            for v in node.label.pos:
                feats[i, FeatureLayout.var_slot(v)] = 1.0
            for v in node.label.neg:
                feats[i, FeatureLayout.var_slot(v, negated=True)] = 1.0
            feats[i, SLOT_SRC] = float(node.src)
            feats[i, SLOT_DST] = float(node.dst)
        elif isinstance(node, OperatorNode):
            feats[i, FeatureLayout.op_slot(node.op)] = 1.0
        else:
            if node.is_const:
                feats[i, SLOT_CONST] = 1.0
            else:
                feats[i, FeatureLayout.var_slot(node.var, negated=node.negated)] = 1.0
    return feats


def graph_stats(pairs: Iterable[tuple[Formula, Buchi]]) -> list[tuple[int, int, int]]:
    """Per-sample (formula length, state count, transition count) rows."""
    return [(formula_length(f), b.n_states, len(b.transitions)) for f, b in pairs]


def dump_union_graph(c: UnionGraph) -> str:
    """Debug text form: one node per line with role tag and the 66 feature
    values, then one line per undirected edge.  Stable across rebuilds of the
    same inputs, so it can be compared against golden files."""
    feats = encode_nodes(c)
    lines = [f"nodes {c.n_nodes} edges {len(c.edges)}"]
    for i, node in enumerate(c.nodes):
        values = ",".join(_fmt(x) for x in feats[i])
        lines.append(f"node {i} {node.role} {values}")
    for u, v in c.edges:
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))
