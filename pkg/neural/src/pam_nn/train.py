"""Training, persistence, and prediction for the next-window models."""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path

os.environ.setdefault("TF_CPP_MIN_LOG_LEVEL", "2")
# oneDNN reorders float reductions; keep prediction files bit-reproducible
os.environ.setdefault("TF_ENABLE_ONEDNN_OPTS", "0")

import numpy as np
import tensorflow as tf

from .data import InconsistentShapes, structural_mask, to_dense
from .io import SCORE_FLOOR, Header, read_tensor_file, write_prediction_file
from .models import build_convlstm, build_encdec
from .specs import default_epochs, spec_from_dict, spec_to_dict


class ShapeMismatch(Exception):
    pass


def set_determinism(seed: int) -> None:
    tf.keras.utils.set_random_seed(seed)
    tf.config.experimental.enable_op_determinism()


class _EpochTimer(tf.keras.callbacks.Callback):
    def __init__(self):
        super().__init__()
        self.seconds = []

    def on_epoch_begin(self, epoch, logs=None):
        self._started = time.perf_counter()

    def on_epoch_end(self, epoch, logs=None):
        self.seconds.append(time.perf_counter() - self._started)


@dataclass
class ModelHandle:
    model: object
    arch: str
    spec: object
    header: Header
    window_count: int

    def save(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        self.model.save(out / "model.keras")
        info = {
            "arch": self.arch,
            "spec": spec_to_dict(self.spec),
            "alphabet": self.header.alphabet,
            "channels": self.header.channels,
            "scheme": self.header.scheme,
            "window_count": self.window_count,
        }
        with open(out / "handle.json", "w", encoding="utf-8") as fh:
            json.dump(info, fh, indent=2)

    @classmethod
    def load(cls, model_dir) -> "ModelHandle":
        model_dir = Path(model_dir)
        with open(model_dir / "handle.json", encoding="utf-8") as fh:
            info = json.load(fh)
        header = Header(
            alphabet=info["alphabet"],
            channels=info["channels"],
            scheme=info["scheme"],
            traces=[],
        )
        return cls(
            model=tf.keras.models.load_model(model_dir / "model.keras"),
            arch=info["arch"],
            spec=spec_from_dict(info["arch"], info["spec"]),
            header=header,
            window_count=info["window_count"],
        )


def _flatten_steps(dense: np.ndarray) -> np.ndarray:
    n, t = dense.shape[:2]
    return dense.reshape(n, t, -1)


def train_from_files(arch: str, train_path, val_path, spec, out_model=None):
    """Fit one model on (windows 1..T-1 -> window T) pairs from tensor files.

    Returns the model handle and a training log with per-epoch losses and
    wall times. The loss curve is recorded, not asserted monotone.
    """
    header, traces = read_tensor_file(train_path)
    val_header, val_traces = read_tensor_file(val_path)
    if not header.same_universe(val_header):
        raise ShapeMismatch("training and validation files have different universes")
    dense = to_dense(header, traces)
    val_dense = to_dense(val_header, val_traces)
    if dense.shape[1] != val_dense.shape[1]:
        raise InconsistentShapes("training and validation window counts differ")
    t_windows = dense.shape[1]
    n_act, n_chan = len(header.alphabet), len(header.channels)

    set_determinism(spec.seed)
    if arch == "convlstm":
        model = build_convlstm(n_act, n_chan, t_windows - 1, spec)
        x, y = dense[:, :-1], dense[:, -1]
        val_x, val_y = val_dense[:, :-1], val_dense[:, -1]
    elif arch == "encdec":
        model = build_encdec(n_act, n_chan, t_windows - 1, spec)
        flat = _flatten_steps(dense)
        val_flat = _flatten_steps(val_dense)
        x, y = flat[:, :-1], flat[:, -1]
        val_x, val_y = val_flat[:, :-1], val_flat[:, -1]
    else:
        raise ShapeMismatch(f"unknown architecture {arch!r}")

    epochs = spec.epochs if spec.epochs is not None else default_epochs(header.scheme)
    timer = _EpochTimer()
    history = model.fit(
        x,
        y,
        validation_data=(val_x, val_y),
        epochs=epochs,
        batch_size=spec.batch_size,
        verbose=0,
        callbacks=[timer],
    )
    log = {
        "arch": arch,
        "spec": spec_to_dict(spec),
        "epochs": epochs,
        "loss": [float(v) for v in history.history["loss"]],
        "val_loss": [float(v) for v in history.history.get("val_loss", [])],
        "epoch_seconds": timer.seconds,
    }
    handle = ModelHandle(
        model=model, arch=arch, spec=spec, header=header, window_count=t_windows
    )
    if out_model:
        handle.save(out_model)
        with open(Path(out_model) / "training_log.json", "w", encoding="utf-8") as fh:
            json.dump(log, fh, indent=2)
    return handle, log


def predict_scores(handle: ModelHandle, header: Header, traces) -> np.ndarray:
    """Per-cell probabilities (n, A, A, C) for the final window of each trace."""
    if not header.same_universe(handle.header):
        raise ShapeMismatch("input file universe differs from the model's")
    dense = to_dense(header, traces)
    if dense.shape[1] != handle.window_count:
        raise ShapeMismatch(
            f"model expects {handle.window_count} windows, file has {dense.shape[1]}"
        )
    n_act, n_chan = len(header.alphabet), len(header.channels)
    if handle.arch == "convlstm":
        x = dense[:, :-1]
    else:
        x = _flatten_steps(dense)[:, :-1]
    probs = handle.model.predict(x, verbose=0)
    probs = probs.reshape(len(traces), n_act, n_act, n_chan)
    probs = np.clip(probs, 0.0, 1.0) * structural_mask(header)
    return probs


def predict_to_file(handle: ModelHandle, in_path, out_path) -> None:
    """Serialize final-window probabilities for every trace in a tensor file."""
    header, traces = read_tensor_file(in_path)
    probs = predict_scores(handle, header, traces)
    target = handle.window_count - 1
    rows = []
    for trace, grid in zip(traces, probs):
        scores = {
            (target, int(r), int(c), int(ch)): float(grid[r, c, ch])
            for r, c, ch in np.argwhere(grid >= SCORE_FLOOR)
        }
        rows.append((trace.case_id, trace.window_count, scores))
    write_prediction_file(header, rows, out_path)
