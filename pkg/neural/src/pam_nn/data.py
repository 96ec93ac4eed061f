"""Dense tensor assembly from sparse trace files.

Training wants dense (traces, windows, A, A, C) float arrays; files store
sparse cells. Every trace in one dataset must have the same window count
(one model per window count).
"""

from __future__ import annotations

import numpy as np

from .io import Header, SparseTrace


class InconsistentShapes(Exception):
    pass


def to_dense(header: Header, traces: list[SparseTrace]) -> np.ndarray:
    """Stack traces into a (n, T, A, A, C) float32 array; requires uniform T."""
    if not traces:
        raise InconsistentShapes("empty dataset")
    counts = {t.window_count for t in traces}
    if len(counts) != 1:
        raise InconsistentShapes(
            f"traces have mixed window counts {sorted(counts)}; "
            "train one model per window count"
        )
    t_windows = counts.pop()
    if t_windows < 2:
        raise InconsistentShapes("need at least 2 windows per trace")
    n_act = len(header.alphabet)
    n_chan = len(header.channels)
    dense = np.zeros((len(traces), t_windows, n_act, n_act, n_chan), dtype=np.float32)
    for i, trace in enumerate(traces):
        for w, cells in trace.windows.items():
            for row, col, channel in cells:
                dense[i, w, row, col, channel] = 1.0
    return dense


def structural_mask(header: Header) -> np.ndarray:
    """Boolean (A, A, C): True where a cell can legally be occupied.

    Unary channels live on the diagonal, binary channels off it; a
    predictor must zero everything else before serializing.
    """
    n_act = len(header.alphabet)
    n_chan = len(header.channels)
    eye = np.eye(n_act, dtype=bool)
    mask = np.empty((n_act, n_act, n_chan), dtype=bool)
    for c in range(n_chan):
        mask[:, :, c] = eye if header.channel_is_unary(c) else ~eye
    return mask
