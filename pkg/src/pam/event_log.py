"""Event log ingestion: CSV files in, indexed traces over a global alphabet out.

A log is a list of traces; each trace is the ordered activity sequence of one
case. Activities are interned into an alphabet indexed by first occurrence in
the source file, and traces store integer indices only.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import EmptyLog, MalformedRow, MissingColumn

DEFAULT_CASE_COL = "case_id"
DEFAULT_ACTIVITY_COL = "activity"


@dataclass(frozen=True)
class Activity:
    index: int
    label: str


@dataclass(frozen=True)
class Trace:
    case_id: str
    events: tuple[int, ...]

    def __len__(self):
        return len(self.events)


@dataclass(frozen=True)
class EventLog:
    alphabet: tuple[Activity, ...]
    traces: tuple[Trace, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.alphabet)

    def label_of(self, index: int) -> str:
        return self.alphabet[index].label

    def __len__(self):
        return len(self.traces)


@dataclass
class IngestionOptions:
    """Column configuration for :func:`parse_csv_log`.

    When ``time_col`` is set, events within a case are stably sorted by that
    column (ISO-8601 or integer epoch); otherwise file order is kept.
    """

    case_col: str = DEFAULT_CASE_COL
    activity_col: str = DEFAULT_ACTIVITY_COL
    time_col: str | None = None


def _parse_time(value: str, line_no: int) -> float:
    value = value.strip()
    try:
        return float(int(value))
    except ValueError:
        pass
    try:
        # 3.10 fromisoformat does not accept a trailing 'Z'
        dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        raise MalformedRow(f"line {line_no}: unparseable timestamp {value!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def parse_csv_log(path, options: IngestionOptions | None = None) -> EventLog:
    """Parse a UTF-8, comma-separated event log with a header row.

    Traces are grouped by case id in order of first appearance. Within a
    case, events keep file order unless ``options.time_col`` is given, in
    which case they are stably sorted by timestamp (ties keep file order).
    The alphabet contains exactly the labels that occur, ordered by first
    occurrence in the file. Labels are compared after stripping surrounding
    whitespace; no case folding.
    """
    opts = options or IngestionOptions()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyLog(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        cols = {}
        for name in (opts.case_col, opts.activity_col) + (
            (opts.time_col,) if opts.time_col else ()
        ):
            if name not in header:
                raise MissingColumn(f"{path}: column {name!r} not in header {header}")
            cols[name] = header.index(name)

        label_index: dict[str, int] = {}
        # case_id -> list of (sort_key, file_order, activity_index)
        cases: dict[str, list] = {}
        n_rows = 0
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise MalformedRow(
                    f"line {line_no}: expected {len(header)} fields, got {len(row)}"
                )
            case_id = row[cols[opts.case_col]].strip()
            label = row[cols[opts.activity_col]].strip()
            if label not in label_index:
                label_index[label] = len(label_index)
            key = _parse_time(row[cols[opts.time_col]], line_no) if opts.time_col else 0.0
            cases.setdefault(case_id, []).append((key, n_rows, label_index[label]))
            n_rows += 1

    if n_rows == 0:
        raise EmptyLog(f"{path}: no event rows")

    traces = []
    for case_id, events in cases.items():
        events.sort(key=lambda e: (e[0], e[1]))  # stable: ties keep file order
        traces.append(Trace(case_id=case_id, events=tuple(e[2] for e in events)))
    alphabet = tuple(Activity(i, lbl) for lbl, i in label_index.items())
    return EventLog(alphabet=alphabet, traces=tuple(traces))


def write_csv_log(log: EventLog, path, options: IngestionOptions | None = None) -> None:
    """Serialize a log back to CSV, trace by trace, events in stored order."""
    opts = options or IngestionOptions()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([opts.case_col, opts.activity_col])
        for trace in log.traces:
            for idx in trace.events:
                writer.writerow([trace.case_id, log.alphabet[idx].label])


def log_from_sequences(sequences, case_ids=None) -> EventLog:
    """Build a log in memory from label sequences (handy for tests and demos)."""
    label_index: dict[str, int] = {}
    traces = []
    for i, seq in enumerate(sequences):
        case_id = case_ids[i] if case_ids is not None else str(i + 1)
        events = []
        for label in seq:
            if label not in label_index:
                label_index[label] = len(label_index)
            events.append(label_index[label])
        traces.append(Trace(case_id=case_id, events=tuple(events)))
    alphabet = tuple(Activity(i, lbl) for lbl, i in label_index.items())
    return EventLog(alphabet=alphabet, traces=tuple(traces))
