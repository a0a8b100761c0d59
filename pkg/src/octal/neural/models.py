"""Classifier heads over union graphs, plus checkpoint serialization.

All models share one duck-typed surface: ``forward(batch, train, rng)``
returning one logit per graph, ``backward(dlogits)``, and named parameter /
gradient / persistent-array dictionaries.  Eval-mode forwards are pure
functions of the inputs, so evaluation over a dataset can fan out across
threads with the model shared read-only.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from octal._accel import segment_mean
from octal.graph import UnionGraph
from octal.neural.data import GraphBatch, collate, encode_graph
from octal.neural.layers import BatchNorm1d, Dropout, GCNConv, GINConv, Linear, ReLU

FEATURE_DIM = 66
HIDDEN_DIM = 128
HEAD_DIM = 64
N_LAYERS = 3
MODEL_KINDS = ("gin", "gcn", "mlp", "linkpred")


class _MeanPool:
    """Arithmetic mean of node rows per graph segment."""

    def __init__(self):
        self._cache: tuple | None = None

    def forward(self, h: np.ndarray, seg: np.ndarray, n_graphs: int) -> np.ndarray:
        counts = np.bincount(seg, minlength=n_graphs).astype(np.float64)
        counts[counts == 0] = 1.0
        self._cache = (seg, counts)
        return segment_mean(h, seg, n_graphs)

    def backward(self, g: np.ndarray) -> np.ndarray:
        seg, counts = self._cache
        return g[seg] / counts[seg][:, None]


class _Head:
    """Dropout, then a two-layer MLP down to one logit."""

    def __init__(self, n_in: int, rng: np.random.Generator, dropout: float):
        self.drop = Dropout(dropout)
        self.lin1 = Linear(n_in, HEAD_DIM, rng)
        self.relu = ReLU()
        self.lin2 = Linear(HEAD_DIM, 1, rng)

    def forward(self, pooled: np.ndarray, train: bool, rng) -> np.ndarray:
        h = self.drop.forward(pooled, train, rng)
        return self.lin2.forward(self.relu.forward(self.lin1.forward(h))).ravel()

    def backward(self, dlogits: np.ndarray) -> np.ndarray:
        g = self.lin2.backward(dlogits[:, None])
        g = self.lin1.backward(self.relu.backward(g))
        return self.drop.backward(g)

    def _subs(self):
        return {"lin1": self.lin1, "lin2": self.lin2}


class GraphClassifier:
    """Three rounds of message passing over the whole union graph, mean pooling,
    and the MLP head.  ``kind`` selects GIN or GCN convolution."""

    def __init__(
        self,
        kind: str = "gin",
        seed: int = 0,
        hidden: int = HIDDEN_DIM,
        dropout: float = 0.1,
        gin_eps: float = 0.0,
    ):
        if kind not in ("gin", "gcn"):
            raise ValueError(f"kind must be gin or gcn, got {kind!r}")
        self.kind = kind
        self.hidden = hidden
        self.dropout = dropout
        self.gin_eps = gin_eps
        rng = np.random.default_rng(seed)
        dims = [FEATURE_DIM] + [hidden] * N_LAYERS
        if kind == "gin":
            self.convs = [GINConv(dims[i], dims[i + 1], rng, eps=gin_eps) for i in range(N_LAYERS)]
        else:
            self.convs = [GCNConv(dims[i], dims[i + 1], rng) for i in range(N_LAYERS)]
        self.pool = _MeanPool()
        self.head = _Head(hidden, rng, dropout)

    def forward(
        self,
        batch: GraphBatch,
        train: bool = False,
        rng: np.random.Generator | None = None,
        update_stats: bool = True,
    ) -> np.ndarray:
        h = batch.x
        for conv in self.convs:
            h = conv.forward(h, batch.src, batch.dst, train, update_stats)
        pooled = self.pool.forward(h, batch.seg, batch.n_graphs)
        return self.head.forward(pooled, train, rng)

    def backward(self, dlogits: np.ndarray) -> None:
        g = self.pool.backward(self.head.backward(dlogits))
        for conv in reversed(self.convs):
            g = conv.backward(g)

    def _subs(self):
        subs = {f"conv{i}": conv for i, conv in enumerate(self.convs)}
        subs.update(self.head._subs())
        return subs

    def hyper(self) -> dict:
        return {
            "hidden": self.hidden,
            "dropout": self.dropout,
            "gin_eps": self.gin_eps,
        }


class MlpBaseline:
    """Mean of the raw 66-wide node features straight into an MLP; the graph
    structure is never consulted."""

    kind = "mlp"

    def __init__(self, seed: int = 0, hidden: int = HIDDEN_DIM, dropout: float = 0.0):
        self.hidden = hidden
        self.dropout = dropout
        rng = np.random.default_rng(seed)
        self.lin1 = Linear(FEATURE_DIM, hidden, rng)
        self.relu1 = ReLU()
        self.lin2 = Linear(hidden, HEAD_DIM, rng)
        self.relu2 = ReLU()
        self.lin3 = Linear(HEAD_DIM, 1, rng)
        self.pool = _MeanPool()

    def forward(self, batch: GraphBatch, train: bool = False, rng=None, update_stats: bool = True):
        pooled = self.pool.forward(batch.x, batch.seg, batch.n_graphs)
        h = self.relu1.forward(self.lin1.forward(pooled))
        h = self.relu2.forward(self.lin2.forward(h))
        return self.lin3.forward(h).ravel()

    def backward(self, dlogits: np.ndarray) -> None:
        g = self.lin3.backward(dlogits[:, None])
        g = self.lin2.backward(self.relu2.backward(g))
        g = self.lin1.backward(self.relu1.backward(g))
        self.pool.backward(g)

    def _subs(self):
        return {"lin1": self.lin1, "lin2": self.lin2, "lin3": self.lin3}

    def hyper(self) -> dict:
        return {"hidden": self.hidden, "dropout": self.dropout}


class LinkPredictor:
    """System and specification encoded separately (no union edges): one GCN
    stack per fragment, mean-pooled, concatenated, then linear layers."""

    kind = "linkpred"

    def __init__(self, seed: int = 0, hidden: int = HIDDEN_DIM, dropout: float = 0.1):
        self.hidden = hidden
        self.dropout = dropout
        rng = np.random.default_rng(seed)
        dims = [FEATURE_DIM] + [hidden] * N_LAYERS
        self.sys_convs = [GCNConv(dims[i], dims[i + 1], rng) for i in range(N_LAYERS)]
        self.tree_convs = [GCNConv(dims[i], dims[i + 1], rng) for i in range(N_LAYERS)]
        self.sys_pool = _MeanPool()
        self.tree_pool = _MeanPool()
        self.head = _Head(2 * hidden, rng, dropout)

    def forward(self, batch: GraphBatch, train: bool = False, rng=None, update_stats: bool = True):
        hs = batch.x_sys
        for conv in self.sys_convs:
            hs = conv.forward(hs, batch.src_sys, batch.dst_sys, train, update_stats)
        ht = batch.x_tree
        for conv in self.tree_convs:
            ht = conv.forward(ht, batch.src_tree, batch.dst_tree, train, update_stats)
        pooled = np.hstack(
            [
                self.sys_pool.forward(hs, batch.seg_sys, batch.n_graphs),
                self.tree_pool.forward(ht, batch.seg_tree, batch.n_graphs),
            ]
        )
        return self.head.forward(pooled, train, rng)

    def backward(self, dlogits: np.ndarray) -> None:
        g = self.head.backward(dlogits)
        gs = self.sys_pool.backward(g[:, : self.hidden])
        gt = self.tree_pool.backward(g[:, self.hidden :])
        for conv in reversed(self.sys_convs):
            gs = conv.backward(gs)
        for conv in reversed(self.tree_convs):
            gt = conv.backward(gt)

    def _subs(self):
        subs = {f"sys_conv{i}": c for i, c in enumerate(self.sys_convs)}
        subs.update({f"tree_conv{i}": c for i, c in enumerate(self.tree_convs)})
        subs.update(self.head._subs())
        return subs

    def hyper(self) -> dict:
        return {"hidden": self.hidden, "dropout": self.dropout}


Model = GraphClassifier | MlpBaseline | LinkPredictor


def _collect(model, what: str) -> dict[str, np.ndarray]:
    out: dict[str, np.ndarray] = {}
    for prefix, sub in model._subs().items():
        for name, arr in getattr(sub, what)().items():
            out[f"{prefix}.{name}"] = arr
    return out


def named_params(model) -> dict[str, np.ndarray]:
    """Trainable arrays, by stable name."""
    return _collect(model, "params")


def named_grads(model) -> dict[str, np.ndarray]:
    return _collect(model, "grads")


def named_arrays(model) -> dict[str, np.ndarray]:
    """All persistent arrays: parameters plus batch-norm running statistics."""
    return _collect(model, "arrays")


def make_model(kind: str, seed: int = 0, **hyper):
    if kind in ("gin", "gcn"):
        return GraphClassifier(kind=kind, seed=seed, **hyper)
    if kind == "mlp":
        return MlpBaseline(seed=seed, **hyper)
    if kind == "linkpred":
        return LinkPredictor(seed=seed, **hyper)
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def forward_graph(model, c: UnionGraph, train: bool = False) -> float:
    """Single-graph convenience wrapper; returns the logit."""
    batch = collate([encode_graph(c)])
    return float(model.forward(batch, train=train)[0])


# --- checkpoints -------------------------------------------------------------
#
# magic | u32 version | u32 meta_len | meta json | u32 n_arrays |
#   ( u32 name_len | name | u32 ndim | u64 dims... | f8 row-major data )*

_MAGIC = b"OCTALCK1"
_VERSION = 1


def save_checkpoint(model) -> bytes:
    meta = {"kind": model.kind, "hyper": model.hyper()}
    meta_bytes = json.dumps(meta, sort_keys=True).encode("utf-8")
    arrays = named_arrays(model)
    chunks = [_MAGIC, struct.pack("<II", _VERSION, len(meta_bytes)), meta_bytes]
    chunks.append(struct.pack("<I", len(arrays)))
    for name in sorted(arrays):
        arr = np.ascontiguousarray(arrays[name], dtype=np.float64)
        name_bytes = name.encode("utf-8")
        chunks.append(struct.pack("<I", len(name_bytes)))
        chunks.append(name_bytes)
        chunks.append(struct.pack("<I", arr.ndim))
        chunks.append(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        chunks.append(arr.tobytes())
    return b"".join(chunks)


class CheckpointError(ValueError):
    pass


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.at = 0

    def take(self, n: int) -> bytes:
        if self.at + n > len(self.data):
            raise CheckpointError("truncated checkpoint")
        out = self.data[self.at : self.at + n]
        self.at += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def done(self) -> bool:
        return self.at == len(self.data)


def load_checkpoint(data: bytes, kind: str | None = None):
    """Rebuild a model from bytes; bit-identical arrays, all-or-nothing.

    ``kind`` cross-checks the stored model kind and raises on mismatch.
    """
    r = _Reader(data)
    if r.take(len(_MAGIC)) != _MAGIC:
        raise CheckpointError("bad magic; not a checkpoint")
    version = r.u32()
    if version != _VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    meta = json.loads(r.take(r.u32()).decode("utf-8"))
    if kind is not None and meta["kind"] != kind:
        raise CheckpointError(f"checkpoint holds a {meta['kind']!r} model, expected {kind!r}")
    loaded: dict[str, np.ndarray] = {}
    for _ in range(r.u32()):
        name = r.take(r.u32()).decode("utf-8")
        ndim = r.u32()
        shape = struct.unpack(f"<{ndim}Q", r.take(8 * ndim))
        size = int(np.prod(shape)) if ndim else 1
        arr = np.frombuffer(r.take(8 * size), dtype="<f8").reshape(shape).copy()
        loaded[name] = arr
    if not r.done():
        raise CheckpointError("trailing bytes after checkpoint payload")

    model = make_model(meta["kind"], seed=0, **meta["hyper"])
    target = named_arrays(model)
    if set(target) != set(loaded):
        missing = sorted(set(target) ^ set(loaded))
        raise CheckpointError(f"array set mismatch: {missing}")
    for name, arr in target.items():
        if arr.shape != loaded[name].shape:
            raise CheckpointError(
                f"shape mismatch for {name}: {arr.shape} vs {loaded[name].shape}"
            )
        arr[...] = loaded[name]
    return model
