import pytest
from hypothesis import given, strategies as st

from pam.errors import OverlappingBins, TraceTooShort
from pam.event_log import Trace, log_from_sequences
from pam.windowing import (
    BinnedLog,
    FixedCount,
    FixedSize,
    bin_by_window_count,
    parse_bins,
    parse_scheme,
    split_fixed_count,
    split_fixed_size,
)


def trace_of(n, case_id="t"):
    return Trace(case_id=case_id, events=tuple(range(n)))


def lengths(windowed):
    return [e - s for s, e in windowed.boundaries]


def test_fixed_count_example():
    w = split_fixed_count(Trace("t", ("a", "b", "c", "d", "e")), 3)
    assert w.windows == (("a", "b"), ("c", "d"), ("e",))


def test_fixed_count_singleton():
    w = split_fixed_count(Trace("t", ("a",)), 1)
    assert w.windows == (("a",),)


def test_fixed_count_too_short():
    with pytest.raises(TraceTooShort):
        split_fixed_count(trace_of(2), 3)


def test_fixed_count_ceiling_rule():
    assert lengths(split_fixed_count(trace_of(7), 3)) == [3, 3, 1]


def test_fixed_count_tail_correction():
    # ceil(7/5)=2 would exhaust the trace after window 4
    assert lengths(split_fixed_count(trace_of(7), 5)) == [2, 2, 1, 1, 1]


def test_fixed_size_examples():
    assert lengths(split_fixed_size(trace_of(11), 10)) == [10, 1]
    assert lengths(split_fixed_size(trace_of(10), 5)) == [5, 5]
    assert lengths(split_fixed_size(trace_of(9), 2)) == [2, 2, 2, 2, 1]


def check_partition(windowed, trace):
    assert all(e > s for s, e in windowed.boundaries)
    flat = tuple(x for w in windowed.windows for x in w)
    assert flat == trace.events
    for (_, e1), (s2, _) in zip(windowed.boundaries, windowed.boundaries[1:]):
        assert e1 == s2


@given(st.integers(1, 40), st.integers(1, 12))
def test_fixed_count_partition_properties(length, n):
    trace = trace_of(length)
    if length < n:
        with pytest.raises(TraceTooShort):
            split_fixed_count(trace, n)
        return
    w = split_fixed_count(trace, n)
    assert len(w) == n
    check_partition(w, trace)
    base = -(-length // n)
    assert all(ln <= base for ln in lengths(w))
    assert split_fixed_count(trace, n) == w  # deterministic


@given(st.integers(1, 60), st.integers(1, 12))
def test_fixed_size_partition_properties(length, k):
    trace = trace_of(length)
    w = split_fixed_size(trace, k)
    check_partition(w, trace)
    assert len(w) == -(-length // k)
    assert all(ln == k for ln in lengths(w)[:-1])
    assert 1 <= lengths(w)[-1] <= k


def test_parse_scheme():
    assert parse_scheme("fixed-count:4") == FixedCount(4)
    assert parse_scheme("fixed-size:10") == FixedSize(10)
    with pytest.raises(ValueError):
        parse_scheme("sliding:3")


def test_parse_bins():
    assert parse_bins("6-10,11-15") == [(6, 10), (11, 15)]
    assert parse_bins("2") == [(2, 2)]


def test_bin_by_window_count():
    log = log_from_sequences(["a" * 11, "a" * 21])
    binned = bin_by_window_count(log, 10, [(2, 2)])
    assert isinstance(binned, BinnedLog)
    assert [len(w.trace) for w in binned.bins[(2, 2)]] == [11]
    assert binned.excluded_count == 1


def test_bin_empty_log_like():
    log = log_from_sequences(["a"])  # 1 window -> matches no bin >= 2
    binned = bin_by_window_count(log, 10, [(2, 3)])
    assert binned.bins == {(2, 3): []}
    assert binned.excluded_count == 1


def test_overlapping_bins_rejected():
    log = log_from_sequences(["aaaa"])
    with pytest.raises(OverlappingBins):
        bin_by_window_count(log, 2, [(2, 5), (5, 8)])
    with pytest.raises(OverlappingBins):
        bin_by_window_count(log, 2, [(1, 3)])
