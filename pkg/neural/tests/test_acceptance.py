"""Acceptance suite for the neural component.

All metric scoring goes through the mining toolkit's own evaluator
(invoked as a subprocess on serialized prediction files); this component
never grades itself.
"""

import subprocess
import sys
import time

from conftest import harness_eval, run_miner
from pam_nn.specs import ConvLstmSpec, EncDecSpec
from pam_nn.train import predict_to_file, train_from_files


def train_and_score(arch, spec, files, tmp_path, tag):
    handle, log = train_from_files(arch, files["train"], files["val"], spec)
    pred = tmp_path / f"{tag}.pred.pam"
    predict_to_file(handle, files["test"], pred)
    report = harness_eval(files["test"], pred, tmp_path / f"{tag}.report.json")
    return pred, report, log


def test_overfit_convlstm(deterministic_dataset, tmp_path):
    """Deterministic 200-trace log: ConvLSTM reaches AP >= 0.95 in budget."""
    started = time.perf_counter()
    _, report, log = train_and_score(
        "convlstm", ConvLstmSpec(seed=5), deterministic_dataset, tmp_path, "conv"
    )
    elapsed = time.perf_counter() - started
    assert log["epochs"] == 10  # fixed-count default budget
    assert report["ap"] >= 0.95, report
    assert elapsed < 300.0


def test_overfit_encdec(deterministic_dataset, tmp_path):
    started = time.perf_counter()
    _, report, log = train_and_score(
        "encdec", EncDecSpec(seed=5), deterministic_dataset, tmp_path, "encdec"
    )
    elapsed = time.perf_counter() - started
    assert log["epochs"] == 10
    assert report["ap"] >= 0.95, report
    assert elapsed < 300.0


def test_drift_beats_persistence(drift_dataset, tmp_path):
    """When the final window drifts away from the penultimate one, the
    trained model must beat the copy-forward baseline by >= 0.10 AP."""
    _, model_report, _ = train_and_score(
        "convlstm", ConvLstmSpec(seed=9), drift_dataset, tmp_path, "drift"
    )
    persistence_pred = tmp_path / "persistence.pam"
    run_miner("baseline", "--kind", "persistence", "--in", drift_dataset["test"],
              "--out", persistence_pred)
    persistence_report = harness_eval(
        drift_dataset["test"], persistence_pred, tmp_path / "persistence.report.json"
    )
    assert model_report["ap"] - persistence_report["ap"] >= 0.10, (
        model_report["ap"], persistence_report["ap"],
    )


def test_prediction_files_validate_under_harness_reader(deterministic_dataset, tmp_path):
    """Zero format errors when the toolkit's own reader parses our output."""
    pred, _, _ = train_and_score(
        "convlstm", ConvLstmSpec(epochs=1, seed=1), deterministic_dataset, tmp_path,
        "contract",
    )
    probe = (
        "from pam.tensor_store import read_predictions; "
        f"ps = read_predictions({str(pred)!r}); "
        "print(len(ps.traces))"
    )
    result = subprocess.run(
        [sys.executable, "-c", probe], capture_output=True, text=True
    )
    assert result.returncode == 0, result.stderr
    assert int(result.stdout.strip()) > 0


def test_gradient_check_is_part_of_contract():
    # the finite-difference check lives in test_models; assert it is present
    from test_models import test_bce_gradient_matches_finite_differences

    test_bce_gradient_matches_finite_differences()
