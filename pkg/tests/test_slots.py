import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from slotsim.slots import (Hit, LatencyConfig, Miss, SlotTable, xorshift64)

CFG = LatencyConfig(num_slots=2, miss_latency=50, hit_latency=0)


def table(n=2, policy="lru", ntags=8, **kw):
    cfg = dataclasses.replace(CFG, num_slots=n)
    return SlotTable(cfg, ntags, policy=policy, **kw)


def test_config_validation():
    with pytest.raises(ValueError):
        LatencyConfig(num_slots=0)
    with pytest.raises(ValueError):
        LatencyConfig(miss_latency=-1)
    with pytest.raises(ValueError):
        SlotTable(CFG, 4, policy="clock")
    with pytest.raises(ValueError):
        SlotTable(CFG, 0)
    with pytest.raises(ValueError):
        SlotTable(CFG, 3, labels=("a", "b"))


def test_cold_miss_then_hit():
    t = table()
    r = t.access(3)
    assert isinstance(r, Miss) and r.latency == 50 and r.evicted is None
    r = t.access(3)
    assert isinstance(r, Hit) and r.latency == 0
    st_ = t.snapshot().stats["T3"]
    assert st_ == {"hits": 1, "misses": 1, "evictions": 0,
                   "stall_cycles": 50}


def test_empty_slot_preferred_over_eviction():
    t = table(n=3)
    t.access(0)
    t.access(1)
    r = t.access(2)
    assert r.evicted is None
    assert t.occupied() == 3


def test_lru_evicts_least_recent():
    t = table(n=2)
    t.access(0)
    t.access(1)
    t.access(0)            # 1 is now the LRU line
    r = t.access(2)
    assert isinstance(r, Miss) and r.evicted == 1
    assert set(t.snapshot().slots) == {0, 2}


def test_fifo_ignores_rehits():
    t = table(n=2, policy="fifo")
    t.access(0)
    t.access(1)
    t.access(0)            # re-hit must not refresh insertion order
    r = t.access(2)
    assert r.evicted == 0
    assert set(t.snapshot().slots) == {1, 2}


def test_random_policy_is_seeded():
    a = table(n=2, policy="random", seed=123)
    b = table(n=2, policy="random", seed=123)
    seq = [5, 1, 2, 3, 1, 5, 2, 7, 0, 4, 5]
    va = [getattr(a.access(t), "evicted", None) for t in seq]
    vb = [getattr(b.access(t), "evicted", None) for t in seq]
    assert va == vb
    c = table(n=2, policy="random", seed=999)
    vc = [getattr(c.access(t), "evicted", None) for t in seq]
    # different stream somewhere (tiny chance of collision; seq chosen so
    # the two seeds do diverge)
    assert va != vc


def test_xorshift_reference_values():
    # first outputs from state 1; pinned so both engines stay in lockstep
    s = 1
    got = []
    for _ in range(3):
        s = xorshift64(s)
        got.append(s)
    assert got == [1082269761, 1152992998833853505, 11177516664432764457]


def test_hit_latency_charged():
    cfg = LatencyConfig(num_slots=2, miss_latency=10, hit_latency=2)
    t = SlotTable(cfg, 4)
    t.access(0)
    t.access(0)
    t.access(0)
    assert t.stall_cycles[0] == 10 + 2 + 2
    assert t.total("stall_cycles") == 14


def test_add_stall_and_reset():
    t = table()
    t.access(1)
    t.add_stall(1, 7)
    assert t.stall_cycles[1] == 57
    t.reset()
    assert t.occupied() == 0
    assert t.total("misses") == 1       # stats survive a plain reset
    t.reset(clear_stats=True)
    assert t.total("misses") == 0


def test_single_slot_thrash():
    t = table(n=1)
    for tag in (0, 1, 0, 1):
        t.access(tag)
    assert t.total("misses") == 4
    assert t.total("evictions") == 3


# ---- LRU stack (inclusion) property ----
#
# For LRU, the content of an N-slot table is always a subset of the
# content of an (N+1)-slot table fed the same accesses, so hits can only
# grow with capacity.

def lru_hits(trace, nslots, ntags):
    t = SlotTable(dataclasses.replace(CFG, num_slots=nslots), ntags)
    hits = 0
    for tag in trace:
        if isinstance(t.access(tag), Hit):
            hits += 1
    return hits, set(s for s in t.snapshot().slots if s is not None)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=11),
                min_size=1, max_size=400))
def test_lru_inclusion(trace):
    prev_hits = -1
    prev_set = set()
    for n in range(1, 7):
        hits, content = lru_hits(trace, n, 12)
        assert prev_set <= content
        assert hits >= prev_hits
        prev_hits, prev_set = hits, content


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=9),
                min_size=1, max_size=300))
def test_lru_matches_reference_model(trace):
    """Drive SlotTable against a textbook move-to-front list."""
    n = 3
    t = SlotTable(dataclasses.replace(CFG, num_slots=n), 10)
    model = []            # front = most recent
    for tag in trace:
        r = t.access(tag)
        if tag in model:
            assert isinstance(r, Hit)
            model.remove(tag)
        else:
            assert isinstance(r, Miss)
            if len(model) == n:
                lru = model.pop()
                assert r.evicted == lru
            else:
                assert r.evicted is None
        model.insert(0, tag)
    assert set(x for x in t.snapshot().slots if x is not None) == set(model)
