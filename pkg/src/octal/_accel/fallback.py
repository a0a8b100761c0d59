"""Pure numpy implementations of the message-passing kernels.

These are the import-time fallback when the compiled extension is missing (or
disabled via ``OCTAL_PURE=1``).  The scatter-adds go through a stable argsort
plus ``np.add.reduceat`` rather than ``np.add.at``, which keeps the pure lane
usable for training, just slower than the compiled one.
"""

from __future__ import annotations

import numpy as np


def edge_aggregate(
    h: np.ndarray,
    src: np.ndarray,
    dst: np.ndarray,
    coef: np.ndarray | None,
    out: np.ndarray,
) -> np.ndarray:
    if len(src) == 0:
        return out
    contrib = h[src]
    if coef is not None:
        contrib = contrib * coef[:, None]
    order = np.argsort(dst, kind="stable")
    sorted_dst = dst[order]
    boundaries = np.flatnonzero(np.r_[True, sorted_dst[1:] != sorted_dst[:-1]])
    sums = np.add.reduceat(contrib[order], boundaries, axis=0)
    out[sorted_dst[boundaries]] += sums
    return out


def segment_sum(h: np.ndarray, seg: np.ndarray, out: np.ndarray) -> np.ndarray:
    if len(seg) == 0:
        return out
    order = np.argsort(seg, kind="stable")
    sorted_seg = seg[order]
    boundaries = np.flatnonzero(np.r_[True, sorted_seg[1:] != sorted_seg[:-1]])
    sums = np.add.reduceat(h[order], boundaries, axis=0)
    out[sorted_seg[boundaries]] += sums
    return out
