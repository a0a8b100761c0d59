"""From-scratch GNN stack: dense layers, models, optimizer, and training."""

from octal.neural.data import EncodedGraph, GraphBatch, collate, encode_graph, encode_sample
from octal.neural.models import (
    CheckpointError,
    GraphClassifier,
    LinkPredictor,
    MlpBaseline,
    MODEL_KINDS,
    forward_graph,
    load_checkpoint,
    make_model,
    named_arrays,
    named_grads,
    named_params,
    save_checkpoint,
)
from octal.neural.optim import adam_init, adam_step, bce_loss, sigmoid
from octal.neural.training import (
    Metrics,
    TrainConfig,
    TrainResult,
    compute_metrics,
    evaluate,
    predict,
    stratified_split,
    summarize,
    train,
    train_runs,
)

__all__ = [
    "CheckpointError",
    "EncodedGraph",
    "GraphBatch",
    "GraphClassifier",
    "LinkPredictor",
    "Metrics",
    "MlpBaseline",
    "MODEL_KINDS",
    "TrainConfig",
    "TrainResult",
    "adam_init",
    "adam_step",
    "bce_loss",
    "collate",
    "compute_metrics",
    "encode_graph",
    "encode_sample",
    "evaluate",
    "forward_graph",
    "load_checkpoint",
    "make_model",
    "named_arrays",
    "named_grads",
    "named_params",
    "predict",
    "save_checkpoint",
    "sigmoid",
    "stratified_split",
    "summarize",
    "train",
    "train_runs",
]
