"""Recurrent next-window predictors over constraint tensor files."""

from .data import InconsistentShapes, structural_mask, to_dense
from .io import Header, SparseTrace, read_tensor_file, write_prediction_file
from .specs import ConvLstmSpec, EncDecSpec, UnsupportedSpec, default_epochs
from .train import ModelHandle, ShapeMismatch, predict_to_file, train_from_files

__version__ = "0.1.0"
