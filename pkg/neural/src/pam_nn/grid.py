"""Hyperparameter grid runs scored by the external evaluation harness.

This component never computes ranking metrics itself: each trained spec
predicts the held-out file and the mining toolkit's `eval` command is
invoked on the resulting prediction file. Per-epoch wall times are
recorded alongside the harness metrics.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

from .specs import spec_from_dict
from .train import predict_to_file, train_from_files

HARNESS = [sys.executable, "-m", "pam.cli"]


def score_with_harness(truth_path, pred_path, report_path) -> dict:
    """Run the toolkit's evaluator on a prediction file and parse its report."""
    result = subprocess.run(
        HARNESS + ["eval", "--truth", str(truth_path), "--pred", str(pred_path),
                   "--report", str(report_path)],
        capture_output=True,
        text=True,
    )
    if result.returncode != 0:
        raise RuntimeError(f"harness eval failed: {result.stderr.strip()}")
    with open(report_path, encoding="utf-8") as fh:
        return json.load(fh)


def grid_search(config: dict, workdir) -> list[dict]:
    """Train every spec in the grid and collect harness metrics per row."""
    if not config.get("specs"):
        raise ValueError("grid config needs a non-empty 'specs' list")
    arch = config["arch"]
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, payload in enumerate(config["specs"]):
        spec = spec_from_dict(arch, payload)
        handle, log = train_from_files(arch, config["train"], config["val"], spec)
        pred_path = workdir / f"grid-{i}.pred.pam"
        predict_to_file(handle, config["test"], pred_path)
        report = score_with_harness(
            config["test"], pred_path, workdir / f"grid-{i}.report.json"
        )
        rows.append(
            {
                "spec": payload,
                "ap": report["ap"],
                "auc": report["auc"],
                "f1": report["f1_best"],
                "epochs": log["epochs"],
                "epoch_seconds_mean": sum(log["epoch_seconds"]) / len(log["epoch_seconds"]),
                "final_loss": log["loss"][-1],
            }
        )
    return rows
