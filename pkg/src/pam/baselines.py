"""Training-free reference predictors for the final window of each trace.

These ground the evaluation harness: persistence copies the penultimate
window's cell set forward, and the marginal baseline scores every cell by
its frequency across training final windows. Both emit standard prediction
sets so the whole scoring path runs without any learned model.
"""

from __future__ import annotations

from .errors import EmptyTraining, SingleWindowTrace
from .miner import TraceTensor
from .tensor_store import PredictedTrace, PredictionSet, TensorMeta


def _with_trace_count(meta: TensorMeta, count: int) -> TensorMeta:
    return TensorMeta(
        alphabet=meta.alphabet,
        channels=meta.channels,
        scheme=meta.scheme,
        trace_count=count,
    )


def persistence_predict(tensors: list[TraceTensor], meta: TensorMeta) -> PredictionSet:
    """Score the final window 1.0 on exactly the penultimate window's cells."""
    traces = []
    for tensor in tensors:
        if tensor.window_count < 2:
            raise SingleWindowTrace(
                f"trace {tensor.case_id!r} has {tensor.window_count} window(s)"
            )
        target = tensor.window_count - 1
        scores = {
            (target, row, col, channel): 1.0
            for row, col, channel in tensor.slices[target - 1].cells
        }
        traces.append(
            PredictedTrace(
                case_id=tensor.case_id,
                window_count=tensor.window_count,
                scores=scores,
            )
        )
    return PredictionSet(meta=_with_trace_count(meta, len(traces)), traces=tuple(traces))


def marginal_frequency_predict(
    training: list[TraceTensor],
    targets: list[TraceTensor],
    meta: TensorMeta,
) -> PredictionSet:
    """Score every cell by its presence rate in training final windows.

    The resulting prior is trace-independent: each target trace gets the
    same score map on its final window. Cells never present are omitted.
    """
    if not training:
        raise EmptyTraining("marginal baseline needs a non-empty training set")
    counts: dict[tuple[int, int, int], int] = {}
    for tensor in training:
        for cell in tensor.slices[-1].cells:
            counts[cell] = counts.get(cell, 0) + 1
    frequency = {cell: n / len(training) for cell, n in counts.items()}

    traces = []
    for tensor in targets:
        target = tensor.window_count - 1
        scores = {
            (target, row, col, channel): score
            for (row, col, channel), score in frequency.items()
        }
        traces.append(
            PredictedTrace(
                case_id=tensor.case_id,
                window_count=tensor.window_count,
                scores=scores,
            )
        )
    return PredictionSet(meta=_with_trace_count(meta, len(traces)), traces=tuple(traces))


def truth_as_predictions(tensors: list[TraceTensor], meta: TensorMeta) -> PredictionSet:
    """Perfect predictor: final-window truth cells scored 1.0 (debug reference)."""
    traces = []
    for tensor in tensors:
        target = tensor.window_count - 1
        scores = {
            (target, row, col, channel): 1.0
            for row, col, channel in tensor.slices[target].cells
        }
        traces.append(
            PredictedTrace(
                case_id=tensor.case_id,
                window_count=tensor.window_count,
                scores=scores,
            )
        )
    return PredictionSet(meta=_with_trace_count(meta, len(traces)), traces=tuple(traces))
