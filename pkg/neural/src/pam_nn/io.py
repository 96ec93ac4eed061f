"""Reader/writer for the tensor and prediction text file contract.

This component talks to the mining toolkit exclusively through its files:
UTF-8, tab-separated, ``#!`` header lines (version, alphabet, channels,
scheme, per-trace window counts) followed by sorted sparse cell records.
Prediction records append a score in [0, 1] printed with nine decimals;
cells under 1e-6 are omitted and read back as zero by the evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

FORMAT_VERSION = 1
SCORE_FLOOR = 1e-6

# Template ids that constrain a single activity; their cells sit on the
# tensor diagonal. Everything else is a binary template off the diagonal.
UNARY_TEMPLATES = {"existence", "absence", "exactly", "init", "last"}


class TensorFileError(Exception):
    pass


@dataclass
class Header:
    alphabet: list[str]
    channels: list[str]
    scheme: str
    traces: list[tuple[str, int]]  # (case_id, window_count)

    def channel_is_unary(self, index: int) -> bool:
        name = self.channels[index].partition(":")[0]
        return name in UNARY_TEMPLATES

    def same_universe(self, other: "Header") -> bool:
        return (
            self.alphabet == other.alphabet
            and self.channels == other.channels
            and self.scheme == other.scheme
        )


@dataclass
class SparseTrace:
    case_id: str
    window_count: int
    # window index -> list of (row, col, channel)
    windows: dict[int, list[tuple[int, int, int]]] = field(default_factory=dict)


def read_tensor_file(path) -> tuple[Header, list[SparseTrace]]:
    fields: dict[str, str] = {}
    activities: dict[int, str] = {}
    channels: dict[int, str] = {}
    trace_decls: list[tuple[str, int]] = []
    traces: list[SparseTrace] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split("\t")
            if parts[0].startswith("#!"):
                key = parts[0][2:]
                if key == "activity":
                    activities[int(parts[1])] = parts[2]
                elif key == "channel":
                    channels[int(parts[1])] = parts[2]
                elif key == "trace":
                    trace_decls.append((parts[2], int(parts[3])))
                else:
                    fields[key] = parts[1]
                continue
            if not traces:
                traces = [SparseTrace(cid, n) for cid, n in trace_decls]
            if len(parts) != 6:
                raise TensorFileError(f"{path}:{line_no}: expected 6 fields")
            ordinal = int(parts[0])
            w, row, col, channel = (int(p) for p in parts[2:6])
            traces[ordinal].windows.setdefault(w, []).append((row, col, channel))
    if int(fields.get("version", -1)) != FORMAT_VERSION:
        raise TensorFileError(f"{path}: unsupported version {fields.get('version')}")
    if not traces:
        traces = [SparseTrace(cid, n) for cid, n in trace_decls]
    header = Header(
        alphabet=[activities[i] for i in range(int(fields["alphabet_size"]))],
        channels=[channels[i] for i in range(int(fields["profile_size"]))],
        scheme=fields["scheme"],
        traces=trace_decls,
    )
    return header, traces


def write_prediction_file(header: Header, scored_traces, path) -> None:
    """Write per-trace final-window scores in canonical record order.

    ``scored_traces`` yields (case_id, window_count, {(w, row, col, ch): score}).
    """
    rows = list(scored_traces)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#!version\t{FORMAT_VERSION}\n")
        fh.write(f"#!alphabet_size\t{len(header.alphabet)}\n")
        for i, label in enumerate(header.alphabet):
            fh.write(f"#!activity\t{i}\t{label}\n")
        fh.write(f"#!profile_size\t{len(header.channels)}\n")
        for i, channel in enumerate(header.channels):
            fh.write(f"#!channel\t{i}\t{channel}\n")
        fh.write(f"#!scheme\t{header.scheme}\n")
        fh.write(f"#!trace_count\t{len(rows)}\n")
        for i, (case_id, window_count, _) in enumerate(rows):
            fh.write(f"#!trace\t{i}\t{case_id}\t{window_count}\n")
        for ordinal, (case_id, _, scores) in enumerate(rows):
            for cell in sorted(scores):
                score = float(scores[cell])
                if score < SCORE_FLOOR:
                    continue
                w, row, col, channel = cell
                fh.write(
                    f"{ordinal}\t{case_id}\t{w}\t{row}\t{col}\t{channel}\t{score:.9f}\n"
                )
