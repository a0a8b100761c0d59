"""Timing harness: classical decision time versus neural inference time.

The neural side is reported in two ways, mirroring how the speedups are read:
inference only (I), and inference plus the graph-construction overhead (O).
Overhead covers union-graph construction, feature encoding, and batch assembly;
model load and dataset parsing are excluded.  Every measurement is the median
of three repeats on a monotone clock, and the harness runs strictly
single-threaded so timed sections never interleave.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from statistics import median

import numpy as np

from octal.automata import equivalent, holds
from octal.datagen import Sample
from octal.ltl import formula_length
from octal.neural.data import collate, encode_sample

_REPEATS = 3


class BenchmarkError(RuntimeError):
    pass


@dataclass(frozen=True)
class TimingRecord:
    sample_id: int
    classical_s: float
    overhead_s: float
    inference_s: float
    formula_len: int
    n_states: int
    n_transitions: int


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    n: int
    classical_total: float
    overhead_total: float
    inference_total: float
    speedup_i: float
    speedup_o: float


def time_classical(sample: Sample, scenario: str, repeats: int = _REPEATS) -> float:
    """Median wall-clock of the full classical decision for one sample.

    The classical verdict is cross-checked against the stored label; a mismatch
    means the dataset is corrupt and aborts the run.
    """
    durations = []
    verdict = None
    for _ in range(repeats):
        start = time.perf_counter()
        if scenario == "general":
            verdict = holds(sample.phi_src, sample.phi)
        else:
            verdict = equivalent(sample.phi_src, sample.phi)
        durations.append(time.perf_counter() - start)
    if int(verdict) != sample.label:
        raise BenchmarkError(
            f"classical verdict {int(verdict)} disagrees with stored label "
            f"{sample.label} for phi={sample.phi}"
        )
    return median(durations)


def time_neural(model, sample: Sample, repeats: int = _REPEATS) -> tuple[float, float, float]:
    """(overhead seconds, inference seconds, logit) for one sample."""
    overheads = []
    batch = None
    for _ in range(repeats):
        start = time.perf_counter()
        batch = collate([encode_sample(sample)])
        overheads.append(time.perf_counter() - start)
    inferences = []
    logit = 0.0
    for _ in range(repeats):
        start = time.perf_counter()
        logit = float(model.forward(batch, train=False)[0])
        inferences.append(time.perf_counter() - start)
    return median(overheads), median(inferences), logit


def run_benchmark(
    model, samples: list[Sample], scenario: str, repeats: int = _REPEATS
) -> tuple[list[TimingRecord], float]:
    """Time every sample; returns the records and the model's accuracy on them."""
    records = []
    correct = 0
    for i, sample in enumerate(samples):
        classical = time_classical(sample, scenario, repeats)
        overhead, inference, logit = time_neural(model, sample, repeats)
        correct += int((logit > 0) == bool(sample.label))
        records.append(
            TimingRecord(
                sample_id=i,
                classical_s=classical,
                overhead_s=overhead,
                inference_s=inference,
                formula_len=formula_length(sample.phi),
                n_states=sample.system.n_states,
                n_transitions=len(sample.system.transitions),
            )
        )
    accuracy = correct / len(samples) if samples else 0.0
    return records, accuracy


def speedup_report(dataset: str, records: list[TimingRecord]) -> ReportRow:
    classical = sum(r.classical_s for r in records)
    overhead = sum(r.overhead_s for r in records)
    inference = sum(r.inference_s for r in records)
    return ReportRow(
        dataset=dataset,
        n=len(records),
        classical_total=classical,
        overhead_total=overhead,
        inference_total=inference,
        speedup_i=classical / inference if inference else 0.0,
        speedup_o=classical / (inference + overhead) if inference + overhead else 0.0,
    )


_CSV_HEADER = "dataset,n,classical_total,overhead_total,inference_total,speedup_I,speedup_O"


def report_to_csv(rows: list[ReportRow]) -> str:
    lines = [_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    r.dataset,
                    str(r.n),
                    repr(r.classical_total),
                    repr(r.overhead_total),
                    repr(r.inference_total),
                    repr(r.speedup_i),
                    repr(r.speedup_o),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def report_from_csv(text: str) -> list[ReportRow]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _CSV_HEADER:
        raise BenchmarkError("unrecognized report header")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 7:
            raise BenchmarkError(f"malformed report line: {ln!r}")
        rows.append(
            ReportRow(
                dataset=parts[0],
                n=int(parts[1]),
                classical_total=float(parts[2]),
                overhead_total=float(parts[3]),
                inference_total=float(parts[4]),
                speedup_i=float(parts[5]),
                speedup_o=float(parts[6]),
            )
        )
    return rows


def bench_kernels(n_nodes: int = 2000, n_edges: int = 8000, dim: int = 128, repeats: int = 5):
    """Microbenchmark of the message-passing kernels across available lanes.

    Returns (kernel name, backend name, median seconds) tuples; used to compare
    the compiled extension against the numpy fallback.
    """
    from octal._accel import edge_aggregate, kernel_backends, segment_sum

    rng = np.random.default_rng(0)
    h = rng.standard_normal((n_nodes, dim))
    src = rng.integers(0, n_nodes, n_edges)
    dst = rng.integers(0, n_nodes, n_edges)
    seg = np.sort(rng.integers(0, max(1, n_nodes // 40), n_nodes))
    n_seg = int(seg.max()) + 1 if len(seg) else 1

    results = []
    for backend_name, module in kernel_backends().items():
        times = []
        for _ in range(repeats):
            start = time.perf_counter()
            edge_aggregate(h, src, dst, None, n_nodes, module=module)
            times.append(time.perf_counter() - start)
        results.append(("edge_aggregate", backend_name, median(times)))
        times = []
        for _ in range(repeats):
            start = time.perf_counter()
            segment_sum(h, seg, n_seg, module=module)
            times.append(time.perf_counter() - start)
        results.append(("segment_sum", backend_name, median(times)))
    return results
