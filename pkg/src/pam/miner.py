"""Per-window constraint mining into sparse binary activity × activity × channel slices.

Mining is per trace and per window: each unary profile channel is checked
for every alphabet activity (so absence cells appear for activities missing
from the window), and each binary channel for every ordered pair of
activities that both occur in the window. Alternation channels are only
considered when their second argument occurs at least twice.

The hot path never walks full windows per pair. Runs of don't-care events
collapse to a single symbol (safe because every template DFA is idempotent
on that symbol), and the resulting short patterns are memoized, so a pair
check is usually one dictionary lookup.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import Pool

from .declare import ConstraintProfile, compile_template
from .errors import ProfileMismatch, TraceTooShort
from .event_log import EventLog
from .windowing import WindowingScheme, split_trace

Cell = tuple[int, int, int]  # (row_activity, col_activity, channel)


@dataclass(frozen=True)
class TensorSlice:
    window_index: int
    cells: frozenset[Cell]


@dataclass(frozen=True)
class TraceTensor:
    case_id: str
    slices: tuple[TensorSlice, ...]

    @property
    def window_count(self) -> int:
        return len(self.slices)


@dataclass
class MiningStats:
    trace_count: int
    too_short_count: int
    total_constraint_count: int
    mean_overlap: float
    mining_seconds: float


def overlap(s1: TensorSlice, s2: TensorSlice, alphabet_size=None, profile_size=None) -> float:
    """Jaccard similarity of two slices' cell sets; 1.0 when both are empty."""
    if alphabet_size is not None or profile_size is not None:
        for s in (s1, s2):
            for row, col, channel in s.cells:
                if alphabet_size is not None and not (
                    0 <= row < alphabet_size and 0 <= col < alphabet_size
                ):
                    raise ProfileMismatch(f"cell {(row, col, channel)} outside alphabet")
                if profile_size is not None and not 0 <= channel < profile_size:
                    raise ProfileMismatch(f"cell {(row, col, channel)} outside profile")
    union = len(s1.cells | s2.cells)
    if union == 0:
        return 1.0
    return len(s1.cells & s2.cells) / union


class _ProfileEngine:
    """Compiled DFAs plus memo tables for one profile."""

    O_UNARY = 1  # 'other' symbol id in the unary projection
    O_BINARY = 2

    WINDOW_MEMO_CAP = 1 << 18

    def __init__(self, profile: ConstraintProfile):
        self.profile = profile
        self.unary = [(c, compile_template(t)) for c, t in enumerate(profile) if t.arity == 1]
        self.binary = [(c, compile_template(t)) for c, t in enumerate(profile) if t.arity == 2]
        self.alt_channels = profile.alternate_condition_channels()
        self._unary_memo: dict[tuple, tuple[int, ...]] = {}
        self._binary_memo: dict[tuple, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        # (alphabet_size, window) -> shared cells frozenset; windows repeat a
        # lot in real logs, so identical windows share one mined object
        self.window_memo: dict[tuple, frozenset] = {}

    def unary_channels_for(self, key: tuple) -> tuple[int, ...]:
        held = self._unary_memo.get(key)
        if held is None:
            held = tuple(c for c, dfa in self.unary if dfa.accepts(key))
            self._unary_memo[key] = held
        return held

    def binary_channels_for(self, key: tuple) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Channels holding on the pattern: (all, with alternation channels removed)."""
        held = self._binary_memo.get(key)
        if held is None:
            full = tuple(c for c, dfa in self.binary if dfa.accepts(key))
            non_alt = tuple(c for c in full if c not in self.alt_channels)
            held = (full, non_alt)
            self._binary_memo[key] = held
        return held


@lru_cache(maxsize=8)
def _engine(profile: ConstraintProfile) -> _ProfileEngine:
    return _ProfileEngine(profile)


def _reduced_unary(positions, length) -> tuple[int, ...]:
    """Projected pattern for one activity with don't-care runs collapsed."""
    if not positions:
        return (1,)
    out = []
    if positions[0] > 0:
        out.append(1)
    out.append(0)
    prev = positions[0]
    for p in positions[1:]:
        if p > prev + 1:
            out.append(1)
        out.append(0)
        prev = p
    if positions[-1] < length - 1:
        out.append(1)
    return tuple(out)


def _reduced_binary_pair(pos_a, pos_b, length):
    """Projected patterns for both pair orders in one merge walk.

    Returns (pattern for (a, b), pattern for (b, a)); don't-care runs are
    collapsed to a single symbol.
    """
    fwd = []
    rev = []
    ia, ib = 0, 0
    na, nb = len(pos_a), len(pos_b)
    prev = -1
    while ia < na or ib < nb:
        if ib >= nb or (ia < na and pos_a[ia] < pos_b[ib]):
            pos, sym = pos_a[ia], 0
            ia += 1
        else:
            pos, sym = pos_b[ib], 1
            ib += 1
        if pos > prev + 1:
            fwd.append(2)
            rev.append(2)
        fwd.append(sym)
        rev.append(1 - sym)
        prev = pos
    if prev < length - 1:
        fwd.append(2)
        rev.append(2)
    return tuple(fwd), tuple(rev)


def mine_window(
    window, profile: ConstraintProfile, alphabet_size: int, window_index: int = 0
) -> TensorSlice:
    """Mine one non-empty window into a slice of (row, col, channel) cells."""
    engine = _engine(profile)
    window = tuple(window)
    memo_key = (alphabet_size, window)
    cached = engine.window_memo.get(memo_key)
    if cached is not None:
        return TensorSlice(window_index=window_index, cells=cached)
    length = len(window)
    positions: dict[int, list[int]] = {}
    for i, event in enumerate(window):
        positions.setdefault(event, []).append(i)

    cells = []
    append = cells.append
    absent_held = None
    for activity in range(alphabet_size):
        pos = positions.get(activity)
        if pos is None:
            if absent_held is None:
                absent_held = engine.unary_channels_for((1,))
            held = absent_held
        else:
            held = engine.unary_channels_for(_reduced_unary(pos, length))
        for c in held:
            append((activity, activity, c))

    present = list(positions)
    channels_for = engine.binary_channels_for
    for i, a in enumerate(present):
        pos_a = positions[a]
        repeated_a = len(pos_a) >= 2
        for b in present[i + 1 :]:
            pos_b = positions[b]
            key_ab, key_ba = _reduced_binary_pair(pos_a, pos_b, length)
            full, non_alt = channels_for(key_ab)
            for c in full if len(pos_b) >= 2 else non_alt:
                append((a, b, c))
            full, non_alt = channels_for(key_ba)
            for c in full if repeated_a else non_alt:
                append((b, a, c))
    cell_set = frozenset(cells)
    if len(engine.window_memo) < engine.WINDOW_MEMO_CAP:
        engine.window_memo[memo_key] = cell_set
    return TensorSlice(window_index=window_index, cells=cell_set)


def mine_windowed(windowed, profile: ConstraintProfile, alphabet_size: int) -> TraceTensor:
    """Mine an already-windowed trace into a tensor, one slice per window."""
    slices = tuple(
        mine_window(window, profile, alphabet_size, window_index=i)
        for i, window in enumerate(windowed.windows)
    )
    return TraceTensor(case_id=windowed.trace.case_id, slices=slices)


def _mine_trace(trace, scheme, profile, alphabet_size):
    try:
        windowed = split_trace(trace, scheme)
    except TraceTooShort:
        return None
    return mine_windowed(windowed, profile, alphabet_size)


_WORKER_ARGS = None


def _worker_init(scheme, profile, alphabet_size):
    global _WORKER_ARGS
    _WORKER_ARGS = (scheme, profile, alphabet_size)


def _worker_mine(trace):
    scheme, profile, alphabet_size = _WORKER_ARGS
    return _mine_trace(trace, scheme, profile, alphabet_size)


def mine_log(
    log: EventLog,
    scheme: WindowingScheme,
    profile: ConstraintProfile,
    threads: int = 1,
) -> tuple[list[TraceTensor], MiningStats]:
    """Mine every eligible trace; count too-short traces instead of failing.

    Mining is data-parallel over traces with a deterministic merge: results
    are ordered by trace position in the log regardless of ``threads``.
    """
    alphabet_size = len(log.alphabet)
    started = time.perf_counter()
    if threads > 1 and len(log.traces) > 1:
        with Pool(
            processes=threads,
            initializer=_worker_init,
            initargs=(scheme, profile, alphabet_size),
        ) as pool:
            # imap streams results so the parent deserializes while workers mine
            mined = list(pool.imap(_worker_mine, log.traces, chunksize=256))
    else:
        mined = [_mine_trace(t, scheme, profile, alphabet_size) for t in log.traces]

    tensors = [t for t in mined if t is not None]
    too_short = sum(1 for t in mined if t is None)
    stats = collect_stats(tensors, too_short, time.perf_counter() - started)
    return tensors, stats


def collect_stats(tensors, too_short_count: int, seconds: float) -> MiningStats:
    """Aggregate cell totals and mean consecutive-window overlap."""
    total_cells = 0
    overlap_sum = 0.0
    overlap_pairs = 0
    for tensor in tensors:
        for s in tensor.slices:
            total_cells += len(s.cells)
        for s1, s2 in zip(tensor.slices, tensor.slices[1:]):
            overlap_sum += overlap(s1, s2)
            overlap_pairs += 1
    return MiningStats(
        trace_count=len(tensors),
        too_short_count=too_short_count,
        total_constraint_count=total_cells,
        mean_overlap=overlap_sum / overlap_pairs if overlap_pairs else 0.0,
        mining_seconds=seconds,
    )
