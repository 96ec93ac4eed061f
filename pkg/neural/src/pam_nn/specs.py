"""Hyperparameter specifications for the two network topologies."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass


class UnsupportedSpec(Exception):
    pass


FILTER_CHOICES = (4, 8, 12)
KERNEL_CHOICES = (4, 8, 12)
DIM_CHOICES = (64, 128, 256, 512)
OPTIMIZERS = ("nadam", "adadelta")


@dataclass(frozen=True)
class ConvLstmSpec:
    layers: int = 1
    filters: int = 8
    kernel: int = 4
    epochs: int | None = None  # None: 10 for fixed-count data, 20 for fixed-size
    batch_size: int = 10
    optimizer: str = "nadam"
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.layers <= 4:
            raise UnsupportedSpec(f"layers must be in [1, 4], got {self.layers}")
        if self.filters not in FILTER_CHOICES:
            raise UnsupportedSpec(f"filters must be one of {FILTER_CHOICES}")
        if self.kernel not in KERNEL_CHOICES:
            raise UnsupportedSpec(f"kernel must be one of {KERNEL_CHOICES}")
        _check_common(self)


@dataclass(frozen=True)
class EncDecSpec:
    base_dim: int = 64
    layers: int = 1  # each subsequent encoder layer is half the previous
    epochs: int | None = None
    batch_size: int = 10
    optimizer: str = "nadam"
    seed: int = 0

    def __post_init__(self):
        if self.base_dim not in DIM_CHOICES:
            raise UnsupportedSpec(f"base_dim must be one of {DIM_CHOICES}")
        if not 1 <= self.layers <= 4:
            raise UnsupportedSpec(f"layers must be in [1, 4], got {self.layers}")
        if min(self.encoder_dims()) < 1:
            raise UnsupportedSpec("encoder dimensions fell below 1")
        _check_common(self)

    def encoder_dims(self) -> list[int]:
        return [self.base_dim // (2 ** i) for i in range(self.layers)]


def _check_common(spec):
    if not 10 <= spec.batch_size <= 20:
        raise UnsupportedSpec(f"batch_size must be in [10, 20], got {spec.batch_size}")
    if spec.optimizer not in OPTIMIZERS:
        raise UnsupportedSpec(f"optimizer must be one of {OPTIMIZERS}")
    if spec.epochs is not None and spec.epochs < 1:
        raise UnsupportedSpec("epochs must be positive")


def spec_from_dict(arch: str, payload: dict):
    if arch == "convlstm":
        return ConvLstmSpec(**payload)
    if arch == "encdec":
        return EncDecSpec(**payload)
    raise UnsupportedSpec(f"unknown architecture {arch!r}")


def load_spec(arch: str, path):
    with open(path, encoding="utf-8") as fh:
        return spec_from_dict(arch, json.load(fh))


def spec_to_dict(spec) -> dict:
    return asdict(spec)


def default_epochs(scheme: str) -> int:
    return 10 if scheme.startswith("fixed-count") else 20
