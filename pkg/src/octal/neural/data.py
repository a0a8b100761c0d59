"""Dense-array views of union graphs and block-diagonal batching."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from octal.graph import UnionGraph, build_union_graph, encode_nodes
from octal.ltl import to_nnf


@dataclass
class EncodedGraph:
    """One classification instance: features, edge lists, and the system/tree
    split needed by models that look at the parts in isolation."""

    x: np.ndarray            # (n, 66)
    edges: np.ndarray        # (m, 2) all undirected edges, each once
    n_system: int            # states + transitions; tree nodes follow
    sys_edges: np.ndarray    # bipartite edges, indices into the system part
    tree_edges: np.ndarray   # tree edges re-indexed into the tree part
    label: float
    scenario: str = ""

    @property
    def n_nodes(self) -> int:
        return len(self.x)

    @property
    def n_tree(self) -> int:
        return self.n_nodes - self.n_system


def encode_graph(c: UnionGraph, label: float = 0.0, scenario: str = "") -> EncodedGraph:
    n_system = c.n_states + c.n_transitions
    edges = np.asarray(c.edges, dtype=np.int64).reshape(-1, 2)
    sys_mask = (edges < n_system).all(axis=1) if len(edges) else np.zeros(0, dtype=bool)
    tree_mask = (edges >= n_system).all(axis=1) if len(edges) else np.zeros(0, dtype=bool)
    return EncodedGraph(
        x=encode_nodes(c),
        edges=edges,
        n_system=n_system,
        sys_edges=edges[sys_mask],
        tree_edges=edges[tree_mask] - n_system,
        label=float(label),
        scenario=scenario,
    )


def encode_sample(sample) -> EncodedGraph:
    """Union graph and features for one dataset sample.

    The stored specification is normalized to NNF here, since that is what the
    tree construction expects.
    """
    graph = build_union_graph(sample.system, to_nnf(sample.phi))
    return encode_graph(graph, label=float(sample.label), scenario=sample.scenario_tag)


@dataclass
class GraphBatch:
    """Several graphs stacked block-diagonally.

    ``src``/``dst`` list every undirected edge in both directions, so a plain
    scatter-sum over them is the symmetric neighbor aggregation.  The system
    and tree parts carry their own node arrays for models that process the two
    fragments separately.
    """

    x: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    seg: np.ndarray
    n_graphs: int
    labels: np.ndarray
    x_sys: np.ndarray
    src_sys: np.ndarray
    dst_sys: np.ndarray
    seg_sys: np.ndarray
    x_tree: np.ndarray
    src_tree: np.ndarray
    dst_tree: np.ndarray
    seg_tree: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.x)


def _doubled(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(edges) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    return src, dst


def collate(graphs: list[EncodedGraph]) -> GraphBatch:
    xs, seg, edge_parts = [], [], []
    xs_sys, seg_sys, sys_edge_parts = [], [], []
    xs_tree, seg_tree, tree_edge_parts = [], [], []
    offset = offset_sys = offset_tree = 0
    for gi, g in enumerate(graphs):
        xs.append(g.x)
        seg.append(np.full(g.n_nodes, gi, dtype=np.int64))
        edge_parts.append(g.edges + offset)
        offset += g.n_nodes

        xs_sys.append(g.x[: g.n_system])
        seg_sys.append(np.full(g.n_system, gi, dtype=np.int64))
        sys_edge_parts.append(g.sys_edges + offset_sys)
        offset_sys += g.n_system

        xs_tree.append(g.x[g.n_system :])
        seg_tree.append(np.full(g.n_tree, gi, dtype=np.int64))
        tree_edge_parts.append(g.tree_edges + offset_tree)
        offset_tree += g.n_tree

    src, dst = _doubled(np.concatenate(edge_parts))
    src_sys, dst_sys = _doubled(np.concatenate(sys_edge_parts))
    src_tree, dst_tree = _doubled(np.concatenate(tree_edge_parts))
    return GraphBatch(
        x=np.concatenate(xs),
        src=src,
        dst=dst,
        seg=np.concatenate(seg),
        n_graphs=len(graphs),
        labels=np.array([g.label for g in graphs], dtype=np.float64),
        x_sys=np.concatenate(xs_sys),
        src_sys=src_sys,
        dst_sys=dst_sys,
        seg_sys=np.concatenate(seg_sys),
        x_tree=np.concatenate(xs_tree),
        src_tree=src_tree,
        dst_tree=dst_tree,
        seg_tree=np.concatenate(seg_tree),
    )
