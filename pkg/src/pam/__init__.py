"""Windowed declarative-constraint tensors from event logs.

Traces are partitioned into windows, each window is mined into a sparse
binary activity x activity x constraint-channel slice, and sequences of
slices feed next-window prediction and its evaluation.
"""

from .declare import (
    ConstraintProfile,
    ConstraintTemplate,
    compile_template,
    default14,
    evaluate_template,
    load_profile,
    oracle_evaluate_template,
)
from .event_log import Activity, EventLog, IngestionOptions, Trace, log_from_sequences, parse_csv_log, write_csv_log
from .metrics import (
    EvalReport,
    average_precision,
    evaluate_predictions,
    f1_at_best_threshold,
    f1_at_threshold,
    roc_auc,
    split_dataset,
)
from .miner import MiningStats, TensorSlice, TraceTensor, mine_log, mine_window, mine_windowed, overlap
from .tensor_store import (
    PredictedTrace,
    PredictionSet,
    TensorMeta,
    make_meta,
    read_predictions,
    read_tensors,
    write_predictions,
    write_tensors,
)
from .windowing import (
    FixedCount,
    FixedSize,
    WindowedTrace,
    bin_by_window_count,
    parse_scheme,
    split_fixed_count,
    split_fixed_size,
    split_trace,
)

__version__ = "0.1.0"
