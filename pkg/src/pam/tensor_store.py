"""Bit-exact text serialization of tensor datasets and prediction score sets.

One self-describing UTF-8 file carries a header (``#!`` lines, tab-separated)
plus sorted sparse cell records:

    #!version    1
    #!alphabet_size    2
    #!activity    0    <label>
    #!profile_size    14
    #!channel    0    absence:1
    #!scheme    fixed-count:4
    #!trace_count    5
    #!trace    0    <case id>    4
    <trace_ordinal>  <case_id>  <window_index>  <row>  <col>  <channel>

Prediction files append a ``score`` column in [0, 1], written with exactly
nine decimal digits. Records are sorted by (trace_ordinal, window_index,
row, col, channel); duplicates are invalid. Writers omit prediction cells
scoring below ``SCORE_FLOOR``; readers treat missing cells as score 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .declare import ConstraintProfile, ConstraintTemplate
from .errors import FormatError
from .miner import TensorSlice, TraceTensor

FORMAT_VERSION = 1
SCORE_FLOOR = 1e-6


@dataclass(frozen=True)
class TensorMeta:
    alphabet: tuple[str, ...]
    channels: tuple[str, ...]  # template per channel, e.g. "exactly:2"
    scheme: str
    trace_count: int
    version: int = FORMAT_VERSION

    def profile(self) -> ConstraintProfile:
        return ConstraintProfile(
            entries=tuple(ConstraintTemplate.parse(c) for c in self.channels)
        )

    def same_universe(self, other: "TensorMeta") -> bool:
        return (
            self.alphabet == other.alphabet
            and self.channels == other.channels
            and self.scheme == other.scheme
        )


def make_meta(alphabet_labels, profile: ConstraintProfile, scheme, trace_count) -> TensorMeta:
    return TensorMeta(
        alphabet=tuple(alphabet_labels),
        channels=profile.channel_labels,
        scheme=str(scheme),
        trace_count=trace_count,
    )


@dataclass(frozen=True)
class PredictedTrace:
    case_id: str
    window_count: int
    # (window_index, row, col, channel) -> score
    scores: dict[tuple[int, int, int, int], float] = field(default_factory=dict)


@dataclass(frozen=True)
class PredictionSet:
    meta: TensorMeta
    traces: tuple[PredictedTrace, ...]


def _check_token(text: str, what: str) -> str:
    if "\t" in text or "\n" in text or "\r" in text:
        raise FormatError(f"{what} {text!r} contains a tab or newline")
    return text


def _write_header(fh, meta: TensorMeta, window_counts, case_ids):
    fh.write(f"#!version\t{meta.version}\n")
    fh.write(f"#!alphabet_size\t{len(meta.alphabet)}\n")
    for i, label in enumerate(meta.alphabet):
        fh.write(f"#!activity\t{i}\t{_check_token(label, 'activity label')}\n")
    fh.write(f"#!profile_size\t{len(meta.channels)}\n")
    for i, channel in enumerate(meta.channels):
        fh.write(f"#!channel\t{i}\t{channel}\n")
    fh.write(f"#!scheme\t{meta.scheme}\n")
    fh.write(f"#!trace_count\t{len(case_ids)}\n")
    for i, (case_id, count) in enumerate(zip(case_ids, window_counts)):
        fh.write(f"#!trace\t{i}\t{_check_token(case_id, 'case id')}\t{count}\n")


def _validate_cell(cell, meta, ordinal, window_count):
    w, row, col, channel = cell
    if not 0 <= w < window_count:
        raise FormatError(f"trace {ordinal}: window index {w} out of range")
    if not (0 <= row < len(meta.alphabet) and 0 <= col < len(meta.alphabet)):
        raise FormatError(f"trace {ordinal}: activity index out of range in {cell}")
    if not 0 <= channel < len(meta.channels):
        raise FormatError(f"trace {ordinal}: channel index out of range in {cell}")


def write_tensors(tensors: list[TraceTensor], meta: TensorMeta, path) -> None:
    """Write tensors in canonical record order; re-reading yields equal structures."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        _write_header(
            fh,
            meta,
            [t.window_count for t in tensors],
            [t.case_id for t in tensors],
        )
        for ordinal, tensor in enumerate(tensors):
            records = sorted(
                (s.window_index, row, col, channel)
                for s in tensor.slices
                for row, col, channel in s.cells
            )
            for cell in records:
                _validate_cell(cell, meta, ordinal, tensor.window_count)
                w, row, col, channel = cell
                fh.write(
                    f"{ordinal}\t{tensor.case_id}\t{w}\t{row}\t{col}\t{channel}\n"
                )


def write_predictions(predictions: PredictionSet, path) -> None:
    """Write a prediction set, dropping cells below the sparsity floor."""
    meta = predictions.meta
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        _write_header(
            fh,
            meta,
            [t.window_count for t in predictions.traces],
            [t.case_id for t in predictions.traces],
        )
        for ordinal, trace in enumerate(predictions.traces):
            for cell in sorted(trace.scores):
                score = trace.scores[cell]
                if not (math.isfinite(score) and 0.0 <= score <= 1.0):
                    raise FormatError(f"score {score!r} outside [0, 1] in {cell}")
                if score < SCORE_FLOOR:
                    continue
                _validate_cell(cell, meta, ordinal, trace.window_count)
                w, row, col, channel = cell
                fh.write(
                    f"{ordinal}\t{trace.case_id}\t{w}\t{row}\t{col}\t{channel}"
                    f"\t{score:.9f}\n"
                )


def _finish_header(fields, activities, channels, trace_decls, path):
    for required in ("version", "alphabet_size", "profile_size", "scheme", "trace_count"):
        if required not in fields:
            raise FormatError(f"{path}: missing header key {required!r}")
    if fields["version"] != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format version {fields['version']}")
    if sorted(activities) != list(range(fields["alphabet_size"])):
        raise FormatError(f"{path}: activity indices do not cover the alphabet")
    if sorted(channels) != list(range(fields["profile_size"])):
        raise FormatError(f"{path}: channel indices do not cover the profile")
    if len(trace_decls) != fields["trace_count"]:
        raise FormatError(
            f"{path}: trace_count {fields['trace_count']} != {len(trace_decls)} trace lines"
        )
    return TensorMeta(
        alphabet=tuple(activities[i] for i in range(fields["alphabet_size"])),
        channels=tuple(channels[i] for i in range(fields["profile_size"])),
        scheme=fields["scheme"],
        trace_count=fields["trace_count"],
    )


def _read_records(path, with_score):
    n_fields = 7 if with_score else 6
    fields = {}
    activities = {}
    channels = {}
    trace_decls = []
    meta = None
    per_trace = None
    last_key = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if line.startswith("#!"):
                if meta is not None:
                    raise FormatError("header line after records", line_no)
                parts = line[2:].rstrip("\n").split("\t")
                try:
                    key = parts[0]
                    if key == "activity":
                        activities[int(parts[1])] = parts[2]
                    elif key == "channel":
                        channels[int(parts[1])] = parts[2]
                    elif key == "trace":
                        if int(parts[1]) != len(trace_decls):
                            raise FormatError("trace ordinals must be dense", line_no)
                        trace_decls.append((parts[2], int(parts[3])))
                    elif key in ("version", "alphabet_size", "profile_size", "trace_count"):
                        fields[key] = int(parts[1])
                    elif key == "scheme":
                        fields[key] = parts[1]
                    else:
                        raise FormatError(f"unknown header key {key!r}", line_no)
                except (IndexError, ValueError):
                    raise FormatError(f"malformed header line {line[:-1]!r}", line_no) from None
                continue

            if meta is None:
                meta = _finish_header(fields, activities, channels, trace_decls, path)
                per_trace = [dict() if with_score else [] for _ in trace_decls]

            parts = line.rstrip("\n").split("\t")
            if len(parts) != n_fields:
                raise FormatError(f"expected {n_fields} fields, got {len(parts)}", line_no)
            try:
                ordinal = int(parts[0])
                w, row, col, channel = (int(p) for p in parts[2:6])
            except ValueError:
                raise FormatError(f"non-integer index in {parts}", line_no) from None
            if not 0 <= ordinal < len(trace_decls):
                raise FormatError(f"trace ordinal {ordinal} out of range", line_no)
            case_id, window_count = trace_decls[ordinal]
            if parts[1] != case_id:
                raise FormatError(
                    f"case id {parts[1]!r} does not match declared {case_id!r}", line_no
                )
            key = (ordinal, w, row, col, channel)
            if last_key is not None and key <= last_key:
                raise FormatError("records out of canonical order or duplicated", line_no)
            last_key = key
            try:
                _validate_cell((w, row, col, channel), meta, ordinal, window_count)
            except FormatError as err:
                raise FormatError(str(err), line_no) from None
            if with_score:
                try:
                    score = float(parts[6])
                except ValueError:
                    raise FormatError(f"bad score {parts[6]!r}", line_no) from None
                if not (math.isfinite(score) and 0.0 <= score <= 1.0):
                    raise FormatError(f"score {score} outside [0, 1]", line_no)
                per_trace[ordinal][(w, row, col, channel)] = score
            else:
                per_trace[ordinal].append((w, row, col, channel))
    if meta is None:
        meta = _finish_header(fields, activities, channels, trace_decls, path)
        per_trace = [dict() if with_score else [] for _ in trace_decls]
    return meta, trace_decls, per_trace


def read_tensors(path) -> tuple[list[TraceTensor], TensorMeta]:
    """Inverse of :func:`write_tensors`."""
    meta, trace_decls, per_trace = _read_records(path, with_score=False)
    tensors = []
    for (case_id, window_count), records in zip(trace_decls, per_trace):
        by_window: dict[int, list] = {}
        for w, row, col, channel in records:
            by_window.setdefault(w, []).append((row, col, channel))
        slices = tuple(
            TensorSlice(window_index=i, cells=frozenset(by_window.get(i, ())))
            for i in range(window_count)
        )
        tensors.append(TraceTensor(case_id=case_id, slices=slices))
    return tensors, meta


def read_predictions(path) -> PredictionSet:
    """Read a prediction set; validates score range on top of tensor checks."""
    meta, trace_decls, per_trace = _read_records(path, with_score=True)
    traces = tuple(
        PredictedTrace(case_id=case_id, window_count=window_count, scores=scores)
        for (case_id, window_count), scores in zip(trace_decls, per_trace)
    )
    return PredictionSet(meta=meta, traces=traces)
