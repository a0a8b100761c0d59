"""Training loop with stratified splitting, early stopping, and metrics."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from octal.neural.data import EncodedGraph, collate
from octal.neural.models import make_model, named_arrays, named_grads, named_params
from octal.neural.optim import adam_init, adam_step, bce_loss


@dataclass(frozen=True)
class TrainConfig:
    model: str = "gin"
    lr: float = 1e-5
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 5
    val_fraction: float = 0.2
    seed: int = 0
    runs: int = 5
    hidden: int = 128
    dropout: float = 0.1

    def __post_init__(self) -> None:
        if self.patience < 1:
            raise ValueError("patience must be at least 1")
        if not 0.0 < self.val_fraction < 1.0:
            raise ValueError("val_fraction must be in (0, 1)")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")


@dataclass(frozen=True)
class Metrics:
    """Positive class is label 1.  Precision and recall fall back to 0 when the
    denominator is empty."""

    accuracy: float
    precision: float
    recall: float


@dataclass
class TrainResult:
    model: object
    history: list[tuple[int, float, float]] = field(default_factory=list)
    best_epoch: int = 0
    val_metrics: Metrics | None = None
    val_indices: list[int] = field(default_factory=list)


def compute_metrics(predictions: np.ndarray, labels: np.ndarray) -> Metrics:
    predictions = np.asarray(predictions, dtype=bool)
    labels = np.asarray(labels, dtype=bool)
    tp = int(np.sum(predictions & labels))
    fp = int(np.sum(predictions & ~labels))
    fn = int(np.sum(~predictions & labels))
    correct = int(np.sum(predictions == labels))
    return Metrics(
        accuracy=correct / len(labels),
        precision=tp / (tp + fp) if tp + fp else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
    )


def predict(model, graphs: list[EncodedGraph], batch_size: int = 64) -> np.ndarray:
    """Eval-mode logits for a dataset."""
    logits = []
    for start in range(0, len(graphs), batch_size):
        batch = collate(graphs[start : start + batch_size])
        logits.append(model.forward(batch, train=False))
    return np.concatenate(logits) if logits else np.zeros(0)


def evaluate(model, graphs: list[EncodedGraph], batch_size: int = 64) -> Metrics:
    logits = predict(model, graphs, batch_size)
    labels = np.array([g.label for g in graphs], dtype=bool)
    return compute_metrics(logits > 0, labels)


def stratified_split(
    labels: list[float], val_fraction: float, rng: np.random.Generator
) -> tuple[list[int], list[int]]:
    """Shuffled train/validation indices with equal class counts in each split.

    Classes are trimmed to the size of the smaller one so both splits stay
    exactly balanced.  Raises on single-class data.
    """
    pos = [i for i, y in enumerate(labels) if y >= 0.5]
    neg = [i for i, y in enumerate(labels) if y < 0.5]
    if not pos or not neg:
        raise ValueError("training data must contain both labels")
    pos = list(np.array(pos)[rng.permutation(len(pos))])
    neg = list(np.array(neg)[rng.permutation(len(neg))])
    per_class = min(len(pos), len(neg))
    n_val = max(1, round(per_class * val_fraction))
    if n_val >= per_class:
        raise ValueError("not enough data for the requested validation fraction")
    val = pos[:n_val] + neg[:n_val]
    train = pos[n_val:per_class] + neg[n_val:per_class]
    return [int(i) for i in train], [int(i) for i in val]


def train(cfg: TrainConfig, graphs: list[EncodedGraph]) -> TrainResult:
    """One training run: shuffle, split, fit with early stopping, restore the
    best-validation-accuracy snapshot.  Deterministic for a fixed seed."""
    if not graphs:
        raise ValueError("empty training data")
    rng = np.random.default_rng(cfg.seed)
    dropout_rng = np.random.default_rng(np.random.SeedSequence(cfg.seed).spawn(1)[0])
    train_idx, val_idx = stratified_split([g.label for g in graphs], cfg.val_fraction, rng)
    val_graphs = [graphs[i] for i in val_idx]

    model = make_model(cfg.model, seed=cfg.seed, hidden=cfg.hidden, dropout=cfg.dropout)
    params = named_params(model)
    state = adam_init(params)

    result = TrainResult(model=model, val_indices=val_idx)
    best_acc = -1.0
    best_snapshot: dict[str, np.ndarray] | None = None
    stale = 0
    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(len(train_idx))
        total_loss = 0.0
        total_n = 0
        for start in range(0, len(order), cfg.batch_size):
            chosen = [graphs[train_idx[i]] for i in order[start : start + cfg.batch_size]]
            batch = collate(chosen)
            logits = model.forward(batch, train=True, rng=dropout_rng)
            loss, dlogits = bce_loss(logits, batch.labels)
            model.backward(dlogits)
            adam_step(params, named_grads(model), state, cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps)
            total_loss += loss * len(chosen)
            total_n += len(chosen)

        val_acc = evaluate(model, val_graphs, cfg.batch_size).accuracy
        result.history.append((epoch, total_loss / total_n, val_acc))
        if val_acc > best_acc:
            best_acc = val_acc
            result.best_epoch = epoch
            best_snapshot = {k: v.copy() for k, v in named_arrays(model).items()}
            stale = 0
        else:
            stale += 1
            if stale >= cfg.patience:
                break

    if best_snapshot is not None:
        for name, arr in named_arrays(model).items():
            arr[...] = best_snapshot[name]
    result.val_metrics = evaluate(model, val_graphs, cfg.batch_size)
    return result


def train_runs(cfg: TrainConfig, graphs: list[EncodedGraph]) -> list[TrainResult]:
    """Independent repetitions with derived seeds, for mean/std reporting."""
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.runs)]
    return [train(replace(cfg, seed=s), graphs) for s in seeds]


def summarize(metrics: list[Metrics]) -> dict[str, tuple[float, float]]:
    """Mean and standard deviation per metric over runs."""
    out = {}
    for name in ("accuracy", "precision", "recall"):
        values = np.array([getattr(m, name) for m in metrics], dtype=np.float64)
        out[name] = (float(values.mean()), float(values.std()))
    return out
