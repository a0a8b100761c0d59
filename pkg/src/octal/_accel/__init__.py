"""Kernel selection: compiled Cython extension when available, numpy fallback
otherwise.  Set ``OCTAL_PURE=1`` to force the fallback; ``kernel_backends()``
exposes both lanes for the comparison benchmark."""

from __future__ import annotations

import os

import numpy as np

from octal._accel import fallback

if os.environ.get("OCTAL_PURE", "") == "1":
    _kernels = None
else:
    try:
        from octal._accel import _kernels  # type: ignore[attr-defined]
    except ImportError:
        _kernels = None

USING_COMPILED = _kernels is not None
_impl = _kernels if USING_COMPILED else fallback


def _as_f64(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def _as_i64(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def edge_aggregate(
    h: np.ndarray,
    src: np.ndarray,
    dst: np.ndarray,
    coef: np.ndarray | None,
    n_out: int,
    module=None,
) -> np.ndarray:
    """Sum (optionally coef-scaled) source rows into destination rows.

    Returns a fresh (n_out, h.shape[1]) array with out[d] = sum over edges e
    with dst[e] == d of coef[e] * h[src[e]].
    """
    mod = module if module is not None else _impl
    out = np.zeros((n_out, h.shape[1]), dtype=np.float64)
    if coef is not None:
        coef = _as_f64(coef)
    mod.edge_aggregate(_as_f64(h), _as_i64(src), _as_i64(dst), coef, out)
    return out


def segment_sum(h: np.ndarray, seg: np.ndarray, n_seg: int, module=None) -> np.ndarray:
    """Rowwise sums of h grouped by segment id."""
    mod = module if module is not None else _impl
    out = np.zeros((n_seg, h.shape[1]), dtype=np.float64)
    mod.segment_sum(_as_f64(h), _as_i64(seg), out)
    return out


def segment_mean(h: np.ndarray, seg: np.ndarray, n_seg: int, module=None) -> np.ndarray:
    counts = np.bincount(seg, minlength=n_seg).astype(np.float64)
    counts[counts == 0] = 1.0
    return segment_sum(h, seg, n_seg, module=module) / counts[:, None]


def kernel_backends() -> dict[str, object]:
    """Available kernel lanes by name, for correctness tests and benchmarks."""
    lanes: dict[str, object] = {"numpy": fallback}
    if _kernels is not None:
        lanes["compiled"] = _kernels
    return lanes
