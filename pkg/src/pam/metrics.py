"""Ranking metrics and the next-window evaluation protocol.

Scores with binary labels are reduced to descending tie groups (equal
scores form one step of the PR/ROC curve), from which average precision,
ROC AUC (Mann-Whitney, ties credited half), and the best-threshold F1 are
computed. `evaluate_predictions` applies these micro-averaged over every
cell of every trace's final window, treating unscored cells as score 0 and
excluding structurally impossible cells (unary off-diagonal, binary
diagonal) from the universe entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateLabels,
    HeaderMismatch,
    MissingTrace,
    NoPositives,
    TooFewTraces,
)
from .miner import TraceTensor
from .tensor_store import PredictionSet, TensorMeta


def _groups_desc(scores, labels, zero_negatives=0):
    """Unique scores descending with per-group totals and positive counts.

    ``zero_negatives`` adds that many implicit negative cells at score 0.0
    without materializing them.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=float)
    if scores.size:
        uniq, inverse = np.unique(scores, return_inverse=True)
        counts = np.bincount(inverse).astype(float)[::-1]
        tps = np.bincount(inverse, weights=labels)[::-1]
        uniq = uniq[::-1]
    else:
        uniq = np.zeros(0)
        counts = np.zeros(0)
        tps = np.zeros(0)
    if zero_negatives:
        if uniq.size and uniq[-1] == 0.0:
            counts[-1] += zero_negatives
        else:
            uniq = np.append(uniq, 0.0)
            counts = np.append(counts, float(zero_negatives))
            tps = np.append(tps, 0.0)
    return uniq, counts, tps


def average_precision(scores, labels, zero_negatives=0) -> float:
    """Area under the precision-recall curve, summed over recall steps."""
    _, counts, tps = _groups_desc(scores, labels, zero_negatives)
    total_pos = tps.sum()
    if total_pos == 0:
        raise NoPositives("average precision needs at least one positive")
    cum_tp = np.cumsum(tps)
    precision = cum_tp / np.cumsum(counts)
    recall = cum_tp / total_pos
    return float(np.sum(np.diff(recall, prepend=0.0) * precision))


def roc_auc(scores, labels, zero_negatives=0) -> float:
    """Fraction of (positive, negative) pairs ranked correctly; ties count 0.5."""
    _, counts, tps = _groups_desc(scores, labels, zero_negatives)
    total_pos = tps.sum()
    total = counts.sum()
    total_neg = total - total_pos
    if total_pos == 0 or total_neg == 0:
        raise DegenerateLabels("AUC needs both positive and negative labels")
    counts_asc = counts[::-1]
    tps_asc = tps[::-1]
    starts = np.cumsum(counts_asc) - counts_asc
    avg_ranks = starts + (counts_asc + 1.0) / 2.0
    pos_rank_sum = float(np.sum(avg_ranks * tps_asc))
    return (pos_rank_sum - total_pos * (total_pos + 1) / 2.0) / (total_pos * total_neg)


def f1_at_best_threshold(scores, labels, zero_negatives=0) -> tuple[float, float]:
    """Maximum F1 over PR-curve points; returns the lowest threshold attaining it."""
    uniq, counts, tps = _groups_desc(scores, labels, zero_negatives)
    total_pos = tps.sum()
    if total_pos == 0:
        raise NoPositives("F1 needs at least one positive")
    cum_tp = np.cumsum(tps)
    # 2PR/(P+R) simplifies to 2*tp / (predicted + positives)
    f1 = 2.0 * cum_tp / (np.cumsum(counts) + total_pos)
    best = float(f1.max())
    k = int(np.nonzero(f1 == best)[0][-1])
    return best, float(uniq[k])


def f1_at_threshold(scores, labels, threshold, zero_negatives=0) -> float:
    """F1 of the classifier `score >= threshold`."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=float)
    total_pos = labels.sum()
    if total_pos == 0:
        raise NoPositives("F1 needs at least one positive")
    predicted_mask = scores >= threshold
    tp = labels[predicted_mask].sum()
    predicted = predicted_mask.sum() + (zero_negatives if threshold <= 0.0 else 0)
    return float(2.0 * tp / (predicted + total_pos))


def split_dataset(
    tensors: list[TraceTensor],
    train_fraction: float = 0.8,
    validation_fraction_of_train: float = 0.2,
    seed: int = 0,
):
    """Disjoint, exhaustive train/validation/test split at trace granularity."""
    n = len(tensors)
    if n < 3:
        raise TooFewTraces(f"need at least 3 traces to split, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train_all = round(n * train_fraction)
    n_val = round(n_train_all * validation_fraction_of_train)
    train_idx = sorted(perm[: n_train_all - n_val])
    val_idx = sorted(perm[n_train_all - n_val : n_train_all])
    test_idx = sorted(perm[n_train_all:])
    return (
        [tensors[i] for i in train_idx],
        [tensors[i] for i in val_idx],
        [tensors[i] for i in test_idx],
    )


@dataclass
class EvalReport:
    ap: float
    auc: float
    f1_best: float
    f1_threshold: float
    positives: int
    negatives: int
    # channel index -> (template label, positive count, ap)
    per_template: dict[int, tuple[str, int, float]] | None = None


def _structural(row, col, unary) -> bool:
    return (row == col) if unary else (row != col)


def evaluate_predictions(
    truth: list[TraceTensor],
    truth_meta: TensorMeta,
    predictions: PredictionSet,
    per_template: bool = False,
) -> EvalReport:
    """Micro-averaged AP/AUC/F1 over all final-window cells of all traces."""
    if not truth_meta.same_universe(predictions.meta):
        raise HeaderMismatch("truth and prediction headers disagree")
    profile = truth_meta.profile()
    n_act = len(truth_meta.alphabet)
    channel_unary = [profile.is_unary(c) for c in range(len(profile))]
    cells_per_channel = [
        n_act if unary else n_act * (n_act - 1) for unary in channel_unary
    ]
    universe_per_trace = sum(cells_per_channel)

    pred_by_case = {t.case_id: t for t in predictions.traces}

    explicit_scores: list[float] = []
    explicit_labels: list[float] = []
    explicit_channels: list[int] = []
    implicit = 0
    positives = 0
    implicit_per_channel = [0] * len(profile)

    for tensor in truth:
        pred_trace = pred_by_case.get(tensor.case_id)
        if pred_trace is None:
            raise MissingTrace(f"prediction set lacks trace {tensor.case_id!r}")
        if pred_trace.window_count != tensor.window_count:
            raise HeaderMismatch(
                f"trace {tensor.case_id!r}: window counts differ "
                f"({pred_trace.window_count} vs {tensor.window_count})"
            )
        target = tensor.window_count - 1
        truth_cells = {
            (row, col, channel)
            for row, col, channel in tensor.slices[target].cells
            if _structural(row, col, channel_unary[channel])
        }
        scored = {
            (row, col, channel): score
            for (w, row, col, channel), score in pred_trace.scores.items()
            if w == target and _structural(row, col, channel_unary[channel])
        }
        explicit_here = [0] * len(profile)
        for cell in truth_cells:
            explicit_scores.append(scored.pop(cell, 0.0))
            explicit_labels.append(1.0)
            explicit_channels.append(cell[2])
            explicit_here[cell[2]] += 1
        for cell, score in scored.items():
            explicit_scores.append(score)
            explicit_labels.append(0.0)
            explicit_channels.append(cell[2])
            explicit_here[cell[2]] += 1
        positives += len(truth_cells)
        implicit += universe_per_trace - len(truth_cells) - len(scored)
        for c in range(len(profile)):
            implicit_per_channel[c] += cells_per_channel[c] - explicit_here[c]

    scores = np.asarray(explicit_scores)
    labels = np.asarray(explicit_labels)
    channels = np.asarray(explicit_channels)
    negatives = implicit + int((labels == 0.0).sum())

    ap = average_precision(scores, labels, zero_negatives=implicit)
    auc = roc_auc(scores, labels, zero_negatives=implicit)
    f1_best, f1_thr = f1_at_best_threshold(scores, labels, zero_negatives=implicit)

    report = EvalReport(
        ap=ap,
        auc=auc,
        f1_best=f1_best,
        f1_threshold=f1_thr,
        positives=positives,
        negatives=negatives,
    )
    if per_template:
        breakdown = {}
        for c in range(len(profile)):
            mask = channels == c
            c_scores = scores[mask]
            c_labels = labels[mask]
            count = int(c_labels.sum())
            if count == 0:
                c_ap = 0.0
            else:
                c_ap = average_precision(
                    c_scores, c_labels, zero_negatives=implicit_per_channel[c]
                )
            breakdown[c] = (str(profile.entries[c]), count, c_ap)
        report.per_template = breakdown
    return report
