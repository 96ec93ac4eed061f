import pytest

from pam.baselines import marginal_frequency_predict, persistence_predict, truth_as_predictions
from pam.declare import default14
from pam.errors import EmptyTraining, SingleWindowTrace
from pam.event_log import log_from_sequences
from pam.metrics import evaluate_predictions, f1_at_threshold
from pam.miner import TensorSlice, TraceTensor, mine_log
from pam.tensor_store import make_meta, read_predictions, write_predictions
from pam.windowing import FixedCount

PROFILE = default14()


def tensor_from_cell_sets(case_id, *cell_sets):
    return TraceTensor(
        case_id=case_id,
        slices=tuple(
            TensorSlice(window_index=i, cells=frozenset(cells))
            for i, cells in enumerate(cell_sets)
        ),
    )


def meta_for(tensors):
    return make_meta(("p", "q"), PROFILE, "fixed-count:2", len(tensors))


def persistence_f1_at_one(tensors):
    """Pooled F1 of persistence scores against final windows at threshold 1.0."""
    preds = persistence_predict(tensors, meta_for(tensors))
    scores, labels = [], []
    for tensor, pred in zip(tensors, preds.traces):
        target = tensor.window_count - 1
        truth = tensor.slices[target].cells
        predicted = {(r, c, ch) for (w, r, c, ch) in pred.scores if w == target}
        for cell in truth | predicted:
            scores.append(1.0 if cell in predicted else 0.0)
            labels.append(1 if cell in truth else 0)
    return f1_at_threshold(scores, labels, 1.0)


def test_identical_last_windows_give_perfect_f1():
    cells = {(0, 0, 1), (0, 1, 6)}
    t = tensor_from_cell_sets("c", cells, cells)
    assert persistence_f1_at_one([t]) == pytest.approx(1.0)


def test_half_overlapping_windows():
    # {x,y} then {y,z}: precision = recall = 0.5
    x, y, z = (0, 0, 1), (1, 1, 1), (0, 1, 6)
    t = tensor_from_cell_sets("c", {x, y}, {y, z})
    assert persistence_f1_at_one([t]) == pytest.approx(0.5)


def test_periodic_log_perfect_metrics():
    log = log_from_sequences(["abab", "baba", "abab"])
    tensors, _ = mine_log(log, FixedCount(2), PROFILE)
    meta = make_meta(log.labels, PROFILE, FixedCount(2), len(tensors))
    for tensor in tensors:  # windows of a periodic trace are identical
        assert tensor.slices[0].cells == tensor.slices[1].cells
    report = evaluate_predictions(tensors, meta, persistence_predict(tensors, meta))
    assert report.ap == 1.0
    assert report.auc == 1.0
    assert report.f1_best == 1.0


def test_persistence_needs_two_windows():
    t = tensor_from_cell_sets("c", {(0, 0, 1)})
    with pytest.raises(SingleWindowTrace):
        persistence_predict([t], meta_for([t]))


def test_persistence_files_validate(tmp_path):
    log = log_from_sequences(["abcabc", "cabcab"])
    tensors, _ = mine_log(log, FixedCount(3), PROFILE)
    meta = make_meta(log.labels, PROFILE, FixedCount(3), len(tensors))
    preds = persistence_predict(tensors, meta)
    path = tmp_path / "p.pam"
    write_predictions(preds, path)
    back = read_predictions(path)
    report = evaluate_predictions(tensors, meta, back)
    assert 0.0 <= report.ap <= 1.0


def test_marginal_frequencies():
    always = (0, 0, 1)
    sometimes = (0, 1, 6)
    never_counted = (1, 1, 1)
    tensors = [
        tensor_from_cell_sets("a", set(), {always, sometimes}),
        tensor_from_cell_sets("b", set(), {always, sometimes}),
        tensor_from_cell_sets("c", set(), {always, sometimes}),
        tensor_from_cell_sets("d", set(), {always}),
    ]
    preds = marginal_frequency_predict(tensors, tensors, meta_for(tensors))
    scores = preds.traces[0].scores
    assert scores[(1,) + always] == 1.0
    assert scores[(1,) + sometimes] == 0.75
    assert (1,) + never_counted not in scores


def test_marginal_empty_training():
    with pytest.raises(EmptyTraining):
        marginal_frequency_predict([], [], meta_for([]))


def test_truth_predictor_is_exact():
    log = log_from_sequences(["abcd", "dcba"])
    tensors, _ = mine_log(log, FixedCount(2), PROFILE)
    meta = make_meta(log.labels, PROFILE, FixedCount(2), len(tensors))
    report = evaluate_predictions(tensors, meta, truth_as_predictions(tensors, meta))
    assert (report.ap, report.auc, report.f1_best) == (1.0, 1.0, 1.0)
