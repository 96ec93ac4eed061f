import csv
import json
import subprocess
import sys

import pytest

MINER = [sys.executable, "-m", "pam.cli"]


def run_miner(*argv):
    result = subprocess.run(
        MINER + [str(a) for a in argv], capture_output=True, text=True
    )
    assert result.returncode == 0, result.stderr
    return result


def write_log_csv(path, sequences):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id", "activity"])
        for i, seq in enumerate(sequences):
            for activity in seq:
                writer.writerow([f"case{i}", activity])


def build_dataset(tmp_path, sequences, scheme="fixed-count:4", seed=1):
    """CSV -> mined tensors -> train/val/test files, all via the miner CLI."""
    csv_path = tmp_path / "log.csv"
    write_log_csv(csv_path, sequences)
    tensor_path = tmp_path / "tensors.pam"
    run_miner("mine", "--log", csv_path, "--scheme", scheme,
              "--profile", "default14", "--out", tensor_path, "--threads", "1")
    run_miner("split", "--in", tensor_path, "--seed", str(seed),
              "--out-prefix", tmp_path / "part")
    return {
        "all": tensor_path,
        "train": tmp_path / "part.train.pam",
        "val": tmp_path / "part.val.pam",
        "test": tmp_path / "part.test.pam",
    }


def harness_eval(truth, pred, report_path):
    run_miner("eval", "--truth", truth, "--pred", pred, "--report", report_path)
    with open(report_path, encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def deterministic_dataset(tmp_path_factory):
    """200 traces from two fixed patterns; alphabet of 5 activities."""
    tmp = tmp_path_factory.mktemp("deterministic")
    patterns = ["abcabcde", "bcabcaed"]
    sequences = [patterns[i % 2] for i in range(200)]
    return build_dataset(tmp, sequences, scheme="fixed-count:4")


@pytest.fixture(scope="session")
def drift_dataset(tmp_path_factory):
    """Final window systematically differs from the penultimate one."""
    tmp = tmp_path_factory.mktemp("drift")
    # fixed-count:3 on length 6: windows "ab|ab|de" (or "ba|ba|ed"),
    # so copying the penultimate window forward is systematically wrong
    patterns = ["ababde", "babaed"]
    sequences = [patterns[i % 2] for i in range(200)]
    return build_dataset(tmp, sequences, scheme="fixed-count:3")
