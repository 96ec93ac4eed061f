"""Trace partitioning into consecutive, non-overlapping windows.

Two schemes: a fixed number of windows per trace, or windows of a fixed
size. Under both, windows are non-empty and their concatenation equals the
trace. Fixed-window-size traces can additionally be binned by their window
count so that one predictive model serves one bin.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OverlappingBins, TraceTooShort
from .event_log import EventLog, Trace


@dataclass(frozen=True)
class FixedCount:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("window count must be >= 1")

    def __str__(self):
        return f"fixed-count:{self.n}"


@dataclass(frozen=True)
class FixedSize:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("window size must be >= 1")

    def __str__(self):
        return f"fixed-size:{self.k}"


WindowingScheme = FixedCount | FixedSize


def parse_scheme(text: str) -> WindowingScheme:
    kind, _, param = text.partition(":")
    try:
        value = int(param)
    except ValueError:
        raise ValueError(f"bad scheme parameter in {text!r}") from None
    if kind == "fixed-count":
        return FixedCount(value)
    if kind == "fixed-size":
        return FixedSize(value)
    raise ValueError(f"unknown scheme {text!r}")


@dataclass(frozen=True)
class WindowedTrace:
    trace: Trace
    boundaries: tuple[tuple[int, int], ...]  # half-open (start, end) pairs

    @property
    def windows(self) -> tuple[tuple[int, ...], ...]:
        ev = self.trace.events
        return tuple(ev[s:e] for s, e in self.boundaries)

    def __len__(self):
        return len(self.boundaries)


def split_fixed_count(trace: Trace, n: int) -> WindowedTrace:
    """Split into exactly ``n`` non-empty windows.

    Windows get ceil(|t|/n) events each, capped so that every remaining
    window can still be non-empty; the final window takes the remainder.
    """
    length = len(trace)
    if length < n:
        raise TraceTooShort(f"trace {trace.case_id!r}: {length} events < {n} windows")
    base = -(-length // n)
    boundaries = []
    start = 0
    for i in range(n):
        remaining_windows = n - i
        if remaining_windows == 1:
            end = length
        else:
            end = start + min(base, length - start - (remaining_windows - 1))
        boundaries.append((start, end))
        start = end
    return WindowedTrace(trace=trace, boundaries=tuple(boundaries))


def split_fixed_size(trace: Trace, k: int) -> WindowedTrace:
    """Split into consecutive chunks of length ``k``; the last takes 1..k events."""
    length = len(trace)
    if length == 0:
        raise TraceTooShort(f"trace {trace.case_id!r} is empty")
    boundaries = tuple((s, min(s + k, length)) for s in range(0, length, k))
    return WindowedTrace(trace=trace, boundaries=boundaries)


def split_trace(trace: Trace, scheme: WindowingScheme) -> WindowedTrace:
    if isinstance(scheme, FixedCount):
        return split_fixed_count(trace, scheme.n)
    return split_fixed_size(trace, scheme.k)


def window_count(trace: Trace, scheme: WindowingScheme) -> int:
    if isinstance(scheme, FixedCount):
        return scheme.n
    return -(-len(trace) // scheme.k)


@dataclass(frozen=True)
class BinnedLog:
    """Fixed-size windowed traces grouped by window count bin."""

    bins: dict[tuple[int, int], list[WindowedTrace]]
    excluded_count: int


def parse_bins(text: str) -> list[tuple[int, int]]:
    """Parse a bin list like ``6-10,11-15`` or ``2`` into inclusive ranges."""
    bins = []
    for part in text.split(","):
        part = part.strip()
        lo, _, hi = part.partition("-")
        bins.append((int(lo), int(hi) if hi else int(lo)))
    return bins


def bin_by_window_count(
    log: EventLog, k: int, bins: list[tuple[int, int]]
) -> BinnedLog:
    """Assign each trace to the bin containing its window count ceil(|t|/k).

    Traces whose window count matches no bin are excluded and counted.
    Bins must be disjoint inclusive integer ranges over counts >= 2.
    """
    for lo, hi in bins:
        if lo > hi or lo < 2:
            raise OverlappingBins(f"bad bin {lo}-{hi}: need 2 <= lo <= hi")
    ordered = sorted(bins)
    for (_, hi), (lo, _) in zip(ordered, ordered[1:]):
        if lo <= hi:
            raise OverlappingBins(f"bins overlap around {lo}")

    result: dict[tuple[int, int], list[WindowedTrace]] = {b: [] for b in bins}
    excluded = 0
    for trace in log.traces:
        count = -(-len(trace) // k)
        for b in bins:
            if b[0] <= count <= b[1]:
                result[b].append(split_fixed_size(trace, k))
                break
        else:
            excluded += 1
    return BinnedLog(bins=result, excluded_count=excluded)
